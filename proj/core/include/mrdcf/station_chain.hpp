#ifndef MRDCF_STATION_CHAIN_HPP
#define MRDCF_STATION_CHAIN_HPP

#include "mrdcf/scenario.hpp"

namespace mrdcf {

/// Raised when the per-station chain cannot be solved (degenerate transition
/// structure, e.g. p_i0 == 0 with a reachable idle state).
class chain_error : public std::runtime_error {
public:
    explicit chain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Traffic-side probabilities of the tagged station.
struct TrafficProbs {
    double q;     // at least one arrival within an average slot
    double p_i0;  // at least one arrival within an average slot of the others
};

/// Solved per-station state used by the equilibrium and the optimizer.
struct StationState {
    double tau = 0.0;
    double p_col = 0.0;
    double p_eq = 0.0;
    double b_idle = 0.0;
    double q = 0.0;
    double p_i0 = 0.0;
};

/// Combined failure probability: collision or channel error.
double p_equivalent_failure(double p_col, double pe);

/// q and P_I,0 from the arrival rate and the two expected slot durations.
TrafficProbs traffic_probs(double lambda_pps, double t_av, double t_av_excl);

/// sum_{i=0}^{m-1} (2 p)^i. This is the singularity-free form of
/// (1 - (2p)^m) / (1 - 2p); use it everywhere the closed-form chain solution
/// appears so p_eq = 1/2 needs no special casing.
double twice_peq_geometric_sum(double p_eq, int m);

/// Transmission probability of a fully loaded station (idle state never
/// occupied): 2 / ((W0 + 1) + W0 p_eq sum_{i<m} (2 p_eq)^i).
double tau_saturated(double p_eq, double w0, int m);

/// Closed-form chain solution: tau = (1 - b_idle) * tau_saturated.
double tau_from_chain(double b_idle, double p_eq, double w0, int m);

/// Stationary idle-state mass from flow balance across the chain:
/// the idle state is entered after a success with an empty queue and left on
/// the first arrival. Algebraically identical to the explicit linear solve.
double idle_probability_closed(double q, double p_eq, double p_i0, double w0, int m);

/// Result of the explicit stationary solve of the backoff chain.
struct ChainSolution {
    double b_idle;          // stationary mass of the idle state
    double tau;             // sum of the transmit-state masses b(i,0)
    double stationary_sum;  // total mass, 1 up to solver roundoff
    double min_mass;        // most negative entry (roundoff guard)
    int n_states;
};

/// Builds the finite chain (stages 0..m, stage-i window round(2^i W0), uniform
/// counter draw, failure probability p_eq, idle state entered with
/// (1-q)(1-p_eq) after success and left with p_i0) and solves the stationary
/// distribution as a sparse linear system. Windows must round to integers
/// >= 1. Intended for validation; the closed form above is the fast path.
ChainSolution solve_station_chain(double w0, int m, double p_eq, double q, double p_i0);

/// Convenience wrapper matching the scenario types.
double idle_probability(const StationConfig& st, const PhyTimingParams& phy, double p_eq,
                        double q, double p_i0);

}  // namespace mrdcf

#endif
