#ifndef MRDCF_FAIRNESS_HPP
#define MRDCF_FAIRNESS_HPP

#include "mrdcf/fixed_point.hpp"

namespace mrdcf {

class optimize_error : public std::runtime_error {
public:
    explicit optimize_error(const std::string& what) : std::runtime_error(what) {}
};

/// Throughput allocation criteria. PF weighs every station equally; LPF weighs
/// by packet rate relative to the largest; MLPF first truncates each packet
/// rate to what the station's bit rate can physically carry.
enum class Criterion { pf, lpf, mlpf };

const char* criterion_name(Criterion c);       // "2-PF" / "3-LPF" / "4-MLPF"
const char* criterion_flag(Criterion c);       // "pf" / "lpf" / "mlpf"

/// Packet rates truncated at the PHY ceiling R / (8 PL).
struct TruncatedRates {
    std::vector<double> lambda_star;
    double lambda_star_max;
};

TruncatedRates truncate_rates(const Scenario& sc);

/// Log-utility weights for a criterion.
std::vector<double> criterion_weights(const Scenario& sc, Criterion c);

/// U = sum_s w_s log(S_s). Throws optimize_error on a non-positive throughput
/// (the optimizer keeps tau interior so this indicates a caller bug).
double utility(const std::vector<double>& throughput_bps, const std::vector<double>& weights);

/// Jain's index (sum x)^2 / (N sum x^2) on arbitrary nonnegative values.
double jain_index(const std::vector<double>& values);

/// Per-station W0 realizing a target tau.
struct W0Inversion {
    double w0_real = 0.0;  // exact real-valued solution of the chain equation
    int w0_int = 1;        // rounded up to the next integer, never below 1
    bool feasible = true;  // false when even W0 = 1 cannot reach the target
};

/// Inverts the chain equation for W0 at each station, holding the network at
/// tau_star: the traffic quantities (p_eq, q, p_i0) are fixed by tau_star and
/// b_idle is recomputed at the candidate W0 until |dW0| <= 1e-6. Integer
/// windows round up so a station is never made more aggressive than the
/// optimizer asked for. Infeasible stations (tau unreachable with W0 >= 1)
/// are clamped to W0 = 1 and flagged.
std::vector<W0Inversion> invert_w0(const TauVector& tau_star, const Scenario& sc);

/// Gradient residual of the stationarity system at tau: for each station j,
///   r_j = w_j / tau_j - (sum_{k != j} w_k) / (1 - tau_j)
///         - (C / T_av) dT_av/dtau_j,   C = sum_k w_k,
/// with the partial derivative by central finite difference (h = 1e-6,
/// Richardson-extrapolated with the half step). Zero at interior optima of
/// the weighted log utility.
std::vector<double> stationarity_residual(const TauVector& tau, const Scenario& sc,
                                          const std::vector<double>& weights);

struct OptimizeOptions {
    double tau_lo = 1e-5;
    double tau_hi = 0.5;
    int max_iter = 400;      // BFGS iterations per start
    double grad_h = 1e-6;    // finite-difference step for the utility gradient
    double step_tol = 1e-11; // projected-step convergence threshold
};

/// Optimizer output: the maximizing tau, the realizing windows, and the model
/// prediction at that operating point.
struct AllocationResult {
    Criterion criterion;
    std::vector<double> weights;
    TauVector tau_star;
    std::vector<W0Inversion> w0_star;
    Equilibrium predicted;       // consistent state evaluated at tau_star
    double utility_value = 0.0;
    double jain_normalized = 0.0;  // on S_s / R_s, the reported convention
    double jain_absolute = 0.0;    // on raw S_s, for transparency
};

/// Maximizes U over the tau box by projected quasi-Newton ascent from five
/// deterministic starts; ties break lexicographically on tau. The box bounds
/// S_s at the PHY rate implicitly (MAC overhead keeps S_s < R_s for any tau).
AllocationResult optimize(const Scenario& sc, Criterion criterion,
                          const OptimizeOptions& opts = {});

}  // namespace mrdcf

#endif
