#ifndef MRDCF_FIXED_POINT_HPP
#define MRDCF_FIXED_POINT_HPP

#include "mrdcf/scenario.hpp"
#include "mrdcf/slot_model.hpp"
#include "mrdcf/station_chain.hpp"

namespace mrdcf {

class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), last_residual(residual), iterations(iterations) {}
    double last_residual;
    int iterations;
};

/// Solved network state: the coupled per-station chains plus the shared slot
/// expectation, with throughputs from the slot decomposition.
struct Equilibrium {
    TauVector tau;
    std::vector<StationState> per_station;
    SlotBreakdown slot;
    std::vector<double> throughput_bps;
    double aggregate_bps = 0.0;
    double residual = 0.0;   // max_s |tau_s - tau_from_chain(...)| at the result
    int iterations = 0;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    double damping = 0.5;    // successive-substitution step factor
};

/// Per-station throughput at a given slot decomposition:
/// S_s = P_s (1 - pe_s) 8 PL_s / T_av, bits per second.
std::vector<double> throughput(const TauVector& tau, const SlotBreakdown& slot,
                               const Scenario& sc);

/// Evaluates the full dependent state (p_col, p_eq, q, p_i0, b_idle, slot
/// decomposition, throughputs) at a fixed tau. The residual field reports how
/// far tau is from the chain's response — zero exactly at an equilibrium.
Equilibrium evaluate_at_tau(const Scenario& sc, const TauVector& tau);

/// Damped successive substitution on tau until the chain response agrees with
/// the iterate to `tol`. Deterministic for a given scenario. Throws
/// solver_error on non-convergence.
Equilibrium solve_equilibrium(const Scenario& sc, const SolveOptions& opts = {});

}  // namespace mrdcf

#endif
