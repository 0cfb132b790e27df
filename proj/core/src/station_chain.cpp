#include "mrdcf/station_chain.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cassert>
#include <cmath>
#include <vector>

namespace mrdcf {

double p_equivalent_failure(double p_col, double pe) {
    assert(p_col >= 0.0 && p_col <= 1.0 && pe >= 0.0 && pe <= 1.0);
    return p_col + pe - pe * p_col;
}

TrafficProbs traffic_probs(double lambda_pps, double t_av, double t_av_excl) {
    assert(lambda_pps > 0.0 && t_av > 0.0 && t_av_excl > 0.0);
    return TrafficProbs{1.0 - std::exp(-lambda_pps * t_av),
                        1.0 - std::exp(-lambda_pps * t_av_excl)};
}

double twice_peq_geometric_sum(double p_eq, int m) {
    double sum = 0.0;
    double term = 1.0;
    const double x = 2.0 * p_eq;
    for (int i = 0; i < m; ++i) {
        sum += term;
        term *= x;
    }
    return sum;
}

double tau_saturated(double p_eq, double w0, int m) {
    return 2.0 / ((w0 + 1.0) + w0 * p_eq * twice_peq_geometric_sum(p_eq, m));
}

double tau_from_chain(double b_idle, double p_eq, double w0, int m) {
    return (1.0 - b_idle) * tau_saturated(p_eq, w0, m);
}

double idle_probability_closed(double q, double p_eq, double p_i0, double w0, int m) {
    if (p_i0 <= 0.0) return 1.0;  // the idle state, once entered, is never left
    // Flow balance: entries to idle are (1-q)(1-p_eq) per transmission, exits
    // are p_i0 per idle slot, and the backoff block normalizes to tau_sat.
    const double a = (1.0 - q) * (1.0 - p_eq) / p_i0;
    const double ts = tau_saturated(p_eq, w0, m);
    return a * ts / (1.0 + a * ts);
}

ChainSolution solve_station_chain(double w0, int m, double p_eq, double q, double p_i0) {
    if (!(w0 >= 1.0) || m < 1) throw chain_error("invalid chain geometry");
    if (!(p_eq >= 0.0 && p_eq < 1.0)) throw chain_error("p_eq out of range");
    if (!(q >= 0.0 && q <= 1.0) || !(p_i0 >= 0.0 && p_i0 <= 1.0)) {
        throw chain_error("traffic probability out of range");
    }

    std::vector<int> width(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double w = std::ldexp(w0, i);  // 2^i * w0
        width[i] = static_cast<int>(std::llround(w));
        if (width[i] < 1 || std::abs(w - width[i]) > 1e-9) {
            throw chain_error("stage window 2^i * w0 must be a positive integer");
        }
    }

    // State layout: 0 = idle, then stages back to back, counter 0 first.
    std::vector<int> offset(m + 1);
    int n = 1;
    for (int i = 0; i <= m; ++i) {
        offset[i] = n;
        n += width[i];
    }
    const auto state = [&](int i, int k) { return offset[i] + k; };

    // Column-major (P^T - I) with the last row replaced by the normalization.
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(4 * n + (m + 2) * width[0]));
    const auto add = [&](int from, int to, double p) {
        if (to != n - 1) trips.emplace_back(to, from, p);  // row "to" of P^T
    };

    add(0, 0, 1.0 - p_i0);
    for (int k = 0; k < width[0]; ++k) add(0, state(0, k), p_i0 / width[0]);
    for (int i = 0; i <= m; ++i) {
        for (int k = 1; k < width[i]; ++k) add(state(i, k), state(i, k - 1), 1.0);
        const int nxt = std::min(i + 1, m);
        for (int k = 0; k < width[nxt]; ++k) {
            add(state(i, 0), state(nxt, k), p_eq / width[nxt]);
        }
        for (int k = 0; k < width[0]; ++k) {
            add(state(i, 0), state(0, k), (1.0 - p_eq) * q / width[0]);
        }
        add(state(i, 0), 0, (1.0 - p_eq) * (1.0 - q));
    }
    for (int j = 0; j < n; ++j) trips.emplace_back(j, j, j == n - 1 ? 0.0 : -1.0);
    for (int j = 0; j < n; ++j) trips.emplace_back(n - 1, j, 1.0);

    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
        throw chain_error("stationary system is singular");
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[n - 1] = 1.0;
    const Eigen::VectorXd pi = lu.solve(rhs);

    ChainSolution sol;
    sol.n_states = n;
    sol.b_idle = pi[0];
    sol.tau = 0.0;
    for (int i = 0; i <= m; ++i) sol.tau += pi[state(i, 0)];
    sol.stationary_sum = pi.sum();
    sol.min_mass = pi.minCoeff();
    return sol;
}

double idle_probability(const StationConfig& st, const PhyTimingParams& phy, double p_eq,
                        double q, double p_i0) {
    return solve_station_chain(st.w0, phy.max_backoff_stage, p_eq, q, p_i0).b_idle;
}

}  // namespace mrdcf
