#include "mrdcf/fairness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace mrdcf {

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::pf: return "2-PF";
        case Criterion::lpf: return "3-LPF";
        case Criterion::mlpf: return "4-MLPF";
    }
    return "?";
}

const char* criterion_flag(Criterion c) {
    switch (c) {
        case Criterion::pf: return "pf";
        case Criterion::lpf: return "lpf";
        case Criterion::mlpf: return "mlpf";
    }
    return "?";
}

TruncatedRates truncate_rates(const Scenario& sc) {
    TruncatedRates tr;
    tr.lambda_star.resize(sc.stations.size());
    for (int s = 0; s < sc.size(); ++s) {
        const auto& st = sc.stations[s];
        const double offered_bps = st.lambda_pps * st.payload_bytes * 8.0;
        tr.lambda_star[s] = offered_bps <= st.bit_rate_bps
                                ? st.lambda_pps
                                : st.bit_rate_bps / (8.0 * st.payload_bytes);
    }
    tr.lambda_star_max = *std::max_element(tr.lambda_star.begin(), tr.lambda_star.end());
    return tr;
}

std::vector<double> criterion_weights(const Scenario& sc, Criterion c) {
    std::vector<double> w(sc.stations.size(), 1.0);
    if (c == Criterion::pf) return w;
    if (c == Criterion::lpf) {
        double lmax = 0.0;
        for (const auto& st : sc.stations) lmax = std::max(lmax, st.lambda_pps);
        for (int s = 0; s < sc.size(); ++s) w[s] = sc.stations[s].lambda_pps / lmax;
        return w;
    }
    const auto tr = truncate_rates(sc);
    for (int s = 0; s < sc.size(); ++s) w[s] = tr.lambda_star[s] / tr.lambda_star_max;
    return w;
}

double utility(const std::vector<double>& throughput_bps,
               const std::vector<double>& weights) {
    assert(throughput_bps.size() == weights.size());
    double u = 0.0;
    for (std::size_t s = 0; s < throughput_bps.size(); ++s) {
        if (!(throughput_bps[s] > 0.0)) {
            throw optimize_error("log-domain violation: station " + std::to_string(s + 1) +
                                 " has zero throughput");
        }
        u += weights[s] * std::log(throughput_bps[s]);
    }
    return u;
}

double jain_index(const std::vector<double>& values) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : values) {
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq <= 0.0) throw optimize_error("jain index of an all-zero vector");
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

namespace {

struct StationTrafficAtTau {
    double p_eq;
    double q;
    double p_i0;
};

StationTrafficAtTau traffic_at_tau(const Scenario& sc, const ClassPartition& part,
                                   const TauVector& tau, int s) {
    const auto slot = expected_slot(tau, sc, part);
    double silent = 1.0;
    for (int j = 0; j < sc.size(); ++j) {
        if (j != s) silent *= (1.0 - tau[j]);
    }
    const double p_eq = p_equivalent_failure(1.0 - silent, sc.stations[s].pe);
    const double t_excl = expected_slot_excluding(tau, sc, s);
    const auto tp = traffic_probs(sc.stations[s].lambda_pps, slot.t_av, t_excl);
    return StationTrafficAtTau{p_eq, tp.q, tp.p_i0};
}

// Chain response tau at a candidate window, with b_idle consistent.
double tau_at_w0(double w0, int m, const StationTrafficAtTau& t) {
    const double b = idle_probability_closed(t.q, t.p_eq, t.p_i0, w0, m);
    return tau_from_chain(b, t.p_eq, w0, m);
}

}  // namespace

std::vector<W0Inversion> invert_w0(const TauVector& tau_star, const Scenario& sc) {
    assert(static_cast<int>(tau_star.size()) == sc.size());
    const auto part = derive_classes(sc);
    const int m = sc.phy.max_backoff_stage;
    std::vector<W0Inversion> out(sc.stations.size());
    for (int s = 0; s < sc.size(); ++s) {
        const double target = tau_star[s];
        if (!(target > 0.0 && target < 1.0)) {
            throw optimize_error("invert_w0: tau out of (0,1) for station " +
                                 std::to_string(s + 1));
        }
        const auto t = traffic_at_tau(sc, part, tau_star, s);
        W0Inversion inv;
        // tau is strictly decreasing in W0, so bracket and bisect.
        if (tau_at_w0(1.0, m, t) < target) {
            inv.w0_real = 1.0;
            inv.w0_int = 1;
            inv.feasible = false;  // unreachable even at the smallest window
            out[s] = inv;
            continue;
        }
        double lo = 1.0;
        double hi = 2.0;
        while (tau_at_w0(hi, m, t) > target) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) throw optimize_error("invert_w0: no finite window reaches tau");
        }
        while (hi - lo > 1e-6 * std::max(1.0, lo)) {
            const double mid = 0.5 * (lo + hi);
            if (tau_at_w0(mid, m, t) > target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        inv.w0_real = 0.5 * (lo + hi);
        // Round up: overshooting tau at small windows is severely nonlinear,
        // so never hand back a window more aggressive than requested.
        inv.w0_int = std::max(1, static_cast<int>(std::ceil(inv.w0_real - 1e-9)));
        inv.feasible = true;
        out[s] = inv;
    }
    return out;
}

namespace {

double t_av_at(const Scenario& sc, const ClassPartition& part, const TauVector& tau) {
    return expected_slot(tau, sc, part).t_av;
}

}  // namespace

std::vector<double> stationarity_residual(const TauVector& tau, const Scenario& sc,
                                          const std::vector<double>& weights) {
    const auto part = derive_classes(sc);
    const double t_av = t_av_at(sc, part, tau);
    double c = 0.0;
    for (double w : weights) c += w;

    std::vector<double> r(tau.size());
    for (std::size_t j = 0; j < tau.size(); ++j) {
        const double h = 1e-6;
        auto central = [&](double step) {
            TauVector tp = tau;
            TauVector tm = tau;
            tp[j] += step;
            tm[j] -= step;
            return (t_av_at(sc, part, tp) - t_av_at(sc, part, tm)) / (2.0 * step);
        };
        const double d_h = central(h);
        const double d_h2 = central(h / 2.0);
        const double dt_av = (4.0 * d_h2 - d_h) / 3.0;  // Richardson extrapolation

        double others = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (k != j) others += weights[k];
        }
        r[j] = weights[j] / tau[j] - others / (1.0 - tau[j]) - (c / t_av) * dt_av;
    }
    return r;
}

namespace {

class UtilityObjective {
public:
    UtilityObjective(const Scenario& sc, std::vector<double> weights)
        : sc_(sc), part_(derive_classes(sc)), weights_(std::move(weights)) {}

    double operator()(const TauVector& tau) const {
        const auto slot = expected_slot(tau, sc_, part_);
        double u = 0.0;
        for (int s = 0; s < sc_.size(); ++s) {
            const double thr = slot.p_succ[s] * (1.0 - sc_.stations[s].pe) *
                               sc_.stations[s].payload_bytes * 8.0 / slot.t_av;
            if (!(thr > 0.0)) return -1e300;
            u += weights_[s] * std::log(thr);
        }
        return u;
    }

    Eigen::VectorXd gradient(const TauVector& tau, double h) const {
        Eigen::VectorXd g(tau.size());
        TauVector probe = tau;
        for (std::size_t j = 0; j < tau.size(); ++j) {
            probe[j] = tau[j] + h;
            const double up = (*this)(probe);
            probe[j] = tau[j] - h;
            const double dn = (*this)(probe);
            probe[j] = tau[j];
            g[static_cast<int>(j)] = (up - dn) / (2.0 * h);
        }
        return g;
    }

private:
    const Scenario& sc_;
    ClassPartition part_;
    std::vector<double> weights_;
};

Eigen::VectorXd project_box(Eigen::VectorXd x, double lo, double hi) {
    for (int i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo, hi);
    return x;
}

struct AscentResult {
    double value;
    TauVector tau;
};

// Projected BFGS ascent with Armijo backtracking. The inverse-Hessian estimate
// resets to identity whenever curvature information degenerates (bound hits).
AscentResult bfgs_ascent(const UtilityObjective& obj, const TauVector& start,
                         const OptimizeOptions& opts) {
    const int n = static_cast<int>(start.size());
    Eigen::VectorXd x = project_box(
        Eigen::Map<const Eigen::VectorXd>(start.data(), n), opts.tau_lo, opts.tau_hi);

    const auto to_tau = [&](const Eigen::VectorXd& v) {
        return TauVector(v.data(), v.data() + v.size());
    };

    double f = obj(to_tau(x));
    Eigen::VectorXd g = obj.gradient(to_tau(x), opts.grad_h);
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);

    for (int it = 0; it < opts.max_iter; ++it) {
        Eigen::VectorXd d = h_inv * g;
        if (d.dot(g) <= 0.0) {
            h_inv.setIdentity();
            d = g;
        }
        double alpha = 1.0;
        Eigen::VectorXd x_new = x;
        double f_new = f;
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = project_box(x + alpha * d, opts.tau_lo, opts.tau_hi);
            f_new = obj(to_tau(x_new));
            if (f_new > f + 1e-4 * g.dot(x_new - x)) {
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) break;

        const Eigen::VectorXd g_new = obj.gradient(to_tau(x_new), opts.grad_h);
        const Eigen::VectorXd step = x_new - x;
        const Eigen::VectorXd y = g - g_new;  // descent convention on -U
        const double sy = step.dot(y);
        if (sy > 1e-14) {
            const Eigen::MatrixXd v =
                Eigen::MatrixXd::Identity(n, n) - (step * y.transpose()) / sy;
            h_inv = v * h_inv * v.transpose() + (step * step.transpose()) / sy;
        } else {
            h_inv.setIdentity();
        }
        const double move = step.cwiseAbs().maxCoeff();
        x = x_new;
        f = f_new;
        g = g_new;
        if (move < opts.step_tol) break;
    }
    return AscentResult{f, to_tau(x)};
}

}  // namespace

AllocationResult optimize(const Scenario& sc, Criterion criterion,
                          const OptimizeOptions& opts) {
    validate_scenario(sc);
    const auto weights = criterion_weights(sc, criterion);
    const UtilityObjective obj(sc, weights);
    const int n = sc.size();

    // Deterministic multi-start: saturated closed form, two uniform levels, a
    // weight-shaped point, and the solved network equilibrium.
    std::vector<TauVector> starts;
    TauVector sat(n);
    for (int s = 0; s < n; ++s) sat[s] = 2.0 / (sc.stations[s].w0 + 1.0);
    starts.push_back(sat);
    starts.push_back(TauVector(n, 0.02));
    starts.push_back(TauVector(n, 0.1));
    TauVector shaped(n);
    for (int s = 0; s < n; ++s) shaped[s] = std::clamp(0.2 * weights[s], opts.tau_lo, opts.tau_hi);
    starts.push_back(shaped);
    starts.push_back(solve_equilibrium(sc).tau);

    bool have_best = false;
    AscentResult best{-1e300, {}};
    for (const auto& x0 : starts) {
        const auto r = bfgs_ascent(obj, x0, opts);
        if (!have_best || r.value > best.value ||
            (r.value == best.value && r.tau < best.tau)) {
            best = r;
            have_best = true;
        }
    }
    if (!have_best || best.value <= -1e300) {
        throw optimize_error("no interior improvement found");
    }

    AllocationResult out;
    out.criterion = criterion;
    out.weights = weights;
    out.tau_star = best.tau;
    out.w0_star = invert_w0(best.tau, sc);
    out.predicted = evaluate_at_tau(sc, best.tau);
    out.utility_value = utility(out.predicted.throughput_bps, weights);

    std::vector<double> normalized(out.predicted.throughput_bps.size());
    for (int s = 0; s < n; ++s) {
        normalized[s] = out.predicted.throughput_bps[s] / sc.stations[s].bit_rate_bps;
    }
    out.jain_normalized = jain_index(normalized);
    out.jain_absolute = jain_index(out.predicted.throughput_bps);
    return out;
}

}  // namespace mrdcf
