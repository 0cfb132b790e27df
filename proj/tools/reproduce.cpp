#include "reproduce.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mrdcf/fairness.hpp"
#include "mrdcf/scenario_io.hpp"
#include "mrdcf/sim.hpp"
#include "report.hpp"

namespace mrdcf::tool {

namespace {

struct SetupEval {
    std::string name;
    std::vector<int> w0_int;
    std::vector<double> model_bps;
    double model_agg = 0.0;
    std::vector<double> sim_bps;
    std::vector<double> sim_se;
    double sim_agg = 0.0;
    double sim_jain_norm = 0.0;
    double model_jain_norm = 0.0;
};

double jain_of(const std::vector<double>& x) {
    double s = 0.0, s2 = 0.0;
    for (double v : x) {
        s += v;
        s2 += v * v;
    }
    return s * s / (static_cast<double>(x.size()) * s2);
}

SetupEval eval_setup(const Scenario& base, std::optional<Criterion> criterion,
                     double duration, int reps, std::uint64_t seed) {
    SetupEval ev;
    Scenario sim_sc = base;
    if (criterion) {
        ev.name = criterion_name(*criterion);
        const auto alloc = optimize(base, *criterion);
        ev.model_bps = alloc.predicted.throughput_bps;
        ev.model_agg = alloc.predicted.aggregate_bps;
        for (int s = 0; s < base.size(); ++s) {
            ev.w0_int.push_back(alloc.w0_star[s].w0_int);
            sim_sc.stations[s].w0 = alloc.w0_star[s].w0_int;
        }
    } else {
        ev.name = "1-DCF";
        const auto eq = solve_equilibrium(base);
        ev.model_bps = eq.throughput_bps;
        ev.model_agg = eq.aggregate_bps;
        for (int s = 0; s < base.size(); ++s) {
            ev.w0_int.push_back(static_cast<int>(std::llround(base.stations[s].w0)));
        }
    }

    SimConfig cfg;
    cfg.scenario = sim_sc;
    cfg.duration = duration;
    cfg.warmup = 1.0;
    cfg.seed = seed;
    cfg.replications = reps;
    const auto agg = replicate(cfg);
    ev.sim_bps = agg.mean_bps;
    ev.sim_se = agg.stderr_bps.empty() ? std::vector<double>(base.size(), 0.0)
                                       : agg.stderr_bps;
    ev.sim_agg = agg.mean_aggregate_bps;

    std::vector<double> sim_norm(base.size());
    std::vector<double> model_norm(base.size());
    for (int s = 0; s < base.size(); ++s) {
        sim_norm[s] = ev.sim_bps[s] / base.stations[s].bit_rate_bps;
        model_norm[s] = ev.model_bps[s] / base.stations[s].bit_rate_bps;
    }
    ev.sim_jain_norm = jain_of(sim_norm);
    ev.model_jain_norm = jain_of(model_norm);
    return ev;
}

const std::optional<Criterion> kSetups[] = {
    std::nullopt, Criterion::pf, Criterion::lpf, Criterion::mlpf};

std::filesystem::path write_fig1(const std::string& which, const ReproduceOptions& opts) {
    const bool is_a = which == "fig1A";
    const Scenario sc = is_a ? builtin_scenario_a() : builtin_scenario_b();
    std::vector<std::string> rows;
    std::uint64_t seed = opts.seed;
    for (const auto& crit : kSetups) {
        const auto ev = eval_setup(sc, crit, opts.duration, opts.replications, seed);
        seed += 101;
        for (int s = 0; s < sc.size(); ++s) {
            std::ostringstream row;
            row << (is_a ? "A" : "B") << ',' << ev.name << ',' << s + 1 << ','
                << csv_num(ev.sim_bps[s] / sc.stations[s].bit_rate_bps) << ','
                << csv_num(ev.sim_bps[s]) << ',' << csv_num(ev.sim_se[s]) << ','
                << csv_num(ev.model_bps[s]) << ',' << ev.w0_int[s];
            rows.push_back(row.str());
        }
    }
    const auto path = opts.out_dir / (which + ".csv");
    Provenance prov{"reproduce " + which, scenario_hash(sc), opts.seed, true};
    write_csv(path, prov,
              "scenario,setup,station,sim_normalized,sim_bps,sim_se_bps,model_bps,w0",
              rows);
    return path;
}

std::filesystem::path write_table1(const ReproduceOptions& opts) {
    std::vector<std::string> rows;
    std::uint64_t seed = opts.seed;
    for (const auto& [tag, sc] :
         {std::pair{"A", builtin_scenario_a()}, std::pair{"B", builtin_scenario_b()}}) {
        for (const auto& crit : kSetups) {
            const auto ev = eval_setup(sc, crit, opts.duration, opts.replications, seed);
            seed += 101;
            std::ostringstream row;
            row << tag << ',' << ev.name << ',' << csv_num(ev.sim_jain_norm) << ','
                << csv_num(ev.sim_agg / 1e6) << ',' << csv_num(ev.model_jain_norm) << ','
                << csv_num(ev.model_agg / 1e6);
            rows.push_back(row.str());
        }
    }
    const auto path = opts.out_dir / "table1.csv";
    Provenance prov{"reproduce table1", scenario_hash(builtin_scenario_a()), opts.seed,
                    true};
    write_csv(path, prov,
              "scenario,setup,jain_sim,aggregate_sim_mbps,jain_model,aggregate_model_mbps",
              rows);
    return path;
}

std::filesystem::path write_fig2(const ReproduceOptions& opts) {
    // Slow-station packet rate swept log-spaced over 10..3300 pkt/s; the DCF,
    // LPF, and MLPF families are re-derived at every point.
    const int points = std::max(20, opts.sweep_points);
    std::vector<std::string> rows;
    std::uint64_t seed = opts.seed;
    for (int i = 0; i < points; ++i) {
        const double lambda_slow =
            10.0 * std::pow(3300.0 / 10.0, static_cast<double>(i) / (points - 1));
        Scenario sc = builtin_scenario_a();
        sc.stations[2].lambda_pps = lambda_slow;
        sc.label = "fig2 sweep";
        for (const auto& crit : {std::optional<Criterion>{}, std::optional{Criterion::lpf},
                                 std::optional{Criterion::mlpf}}) {
            const auto ev =
                eval_setup(sc, crit, opts.fig2_duration, opts.fig2_replications, seed);
            seed += 101;
            for (int s = 0; s < sc.size(); ++s) {
                std::ostringstream row;
                row << csv_num(lambda_slow) << ',' << (crit ? criterion_name(*crit) : "1-DCF")
                    << ',' << s + 1 << ',' << csv_num(ev.sim_bps[s]) << ','
                    << csv_num(ev.sim_se[s]) << ',' << csv_num(ev.model_bps[s]);
                rows.push_back(row.str());
            }
        }
    }
    const auto path = opts.out_dir / "fig2.csv";
    Provenance prov{"reproduce fig2", scenario_hash(builtin_scenario_a()), opts.seed, true};
    write_csv(path, prov, "lambda_slow_pps,setup,station,sim_bps,sim_se_bps,model_bps",
              rows);
    return path;
}

}  // namespace

std::filesystem::path reproduce_target(const std::string& target,
                                       const ReproduceOptions& opts) {
    if (target == "fig1A" || target == "fig1B") return write_fig1(target, opts);
    if (target == "fig2") return write_fig2(opts);
    if (target == "table1") return write_table1(opts);
    throw std::invalid_argument("unknown reproduce target '" + target +
                                "' (expected fig1A, fig1B, fig2, or table1)");
}

}  // namespace mrdcf::tool
