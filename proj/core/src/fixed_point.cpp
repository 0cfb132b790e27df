#include "mrdcf/fixed_point.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace mrdcf {

std::vector<double> throughput(const TauVector& tau, const SlotBreakdown& slot,
                               const Scenario& sc) {
    (void)tau;
    std::vector<double> out(sc.stations.size());
    for (int s = 0; s < sc.size(); ++s) {
        out[s] = slot.p_succ[s] * (1.0 - sc.stations[s].pe) *
                 sc.stations[s].payload_bytes * 8.0 / slot.t_av;
    }
    return out;
}

namespace {

// One application of the chain response map: from tau to the per-station
// dependent quantities and the tau each chain would answer with.
struct ResponseState {
    std::vector<StationState> stations;
    SlotBreakdown slot;
    TauVector tau_next;
};

ResponseState chain_response(const Scenario& sc, const ClassPartition& part,
                             const TauVector& tau) {
    ResponseState rs;
    rs.slot = expected_slot(tau, sc, part);
    rs.stations.resize(sc.stations.size());
    rs.tau_next.resize(tau.size());
    const int m = sc.phy.max_backoff_stage;
    for (int s = 0; s < sc.size(); ++s) {
        StationState st;
        st.tau = tau[s];
        double silent = 1.0;
        for (int j = 0; j < sc.size(); ++j) {
            if (j != s) silent *= (1.0 - tau[j]);
        }
        st.p_col = 1.0 - silent;
        st.p_eq = p_equivalent_failure(st.p_col, sc.stations[s].pe);
        const double t_excl = expected_slot_excluding(tau, sc, s);
        const auto tp = traffic_probs(sc.stations[s].lambda_pps, rs.slot.t_av, t_excl);
        st.q = tp.q;
        st.p_i0 = tp.p_i0;
        st.b_idle = idle_probability_closed(st.q, st.p_eq, st.p_i0, sc.stations[s].w0, m);
        rs.tau_next[s] = tau_from_chain(st.b_idle, st.p_eq, sc.stations[s].w0, m);
        rs.stations[s] = st;
    }
    return rs;
}

double response_gap(const TauVector& tau, const TauVector& tau_next) {
    double gap = 0.0;
    for (std::size_t s = 0; s < tau.size(); ++s) {
        gap = std::max(gap, std::abs(tau[s] - tau_next[s]));
    }
    return gap;
}

Equilibrium pack(const Scenario& sc, const TauVector& tau, const ResponseState& rs,
                 int iterations) {
    Equilibrium eq;
    eq.tau = tau;
    eq.per_station = rs.stations;
    eq.slot = rs.slot;
    eq.throughput_bps = throughput(tau, rs.slot, sc);
    eq.aggregate_bps = 0.0;
    for (double s : eq.throughput_bps) eq.aggregate_bps += s;
    eq.residual = response_gap(tau, rs.tau_next);
    eq.iterations = iterations;
    return eq;
}

}  // namespace

Equilibrium evaluate_at_tau(const Scenario& sc, const TauVector& tau) {
    assert(static_cast<int>(tau.size()) == sc.size());
    const auto part = derive_classes(sc);
    return pack(sc, tau, chain_response(sc, part, tau), 0);
}

Equilibrium solve_equilibrium(const Scenario& sc, const SolveOptions& opts) {
    validate_scenario(sc);
    if (!(opts.tol > 0.0)) throw solver_error("tolerance must be positive", 0.0, 0);
    const auto part = derive_classes(sc);

    TauVector tau(sc.stations.size());
    for (int s = 0; s < sc.size(); ++s) {
        tau[s] = 2.0 / (sc.stations[s].w0 + 1.0);  // saturated, collision-free start
    }

    ResponseState rs = chain_response(sc, part, tau);
    double gap = response_gap(tau, rs.tau_next);
    int it = 0;
    while (gap > opts.tol && it < opts.max_iter) {
        for (std::size_t s = 0; s < tau.size(); ++s) {
            tau[s] += opts.damping * (rs.tau_next[s] - tau[s]);
        }
        rs = chain_response(sc, part, tau);
        gap = response_gap(tau, rs.tau_next);
        ++it;
    }
    if (gap > opts.tol) {
        throw solver_error("equilibrium iteration did not converge after " +
                               std::to_string(it) + " iterations (residual " +
                               std::to_string(gap) + ")",
                           gap, it);
    }
    return pack(sc, tau, rs, it);
}

}  // namespace mrdcf
