// mrdcf: model, optimize, and simulate multirate non-saturated 802.11 DCF
// networks; `reproduce` renders the built-in study figures and table.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mrdcf/fairness.hpp"
#include "mrdcf/scenario_io.hpp"
#include "mrdcf/sim.hpp"
#include "report.hpp"
#include "reproduce.hpp"

namespace fs = std::filesystem;
using namespace mrdcf;
using namespace mrdcf::tool;

namespace {

// exit categories: 2 usage, 3 scenario file, 4 solver/simulator, 5 unknown target
constexpr int kExitUsage = 2;
constexpr int kExitScenario = 3;
constexpr int kExitSolver = 4;
constexpr int kExitTarget = 5;

struct SweepSpec {
    int station = 0;  // 1-based
    std::string field;
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
};

SweepSpec parse_sweep(const std::string& text) {
    SweepSpec sw;
    std::istringstream in(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() != 5) {
        throw CLI::ValidationError("--sweep expects station:field:start:stop:points");
    }
    sw.station = std::stoi(parts[0]);
    sw.field = parts[1];
    sw.start = std::stod(parts[2]);
    sw.stop = std::stod(parts[3]);
    sw.points = std::stoi(parts[4]);
    if (sw.points < 2 || !(sw.stop > sw.start) || !std::isfinite(sw.start) ||
        !std::isfinite(sw.stop)) {
        throw CLI::ValidationError("--sweep range must be finite with points >= 2");
    }
    return sw;
}

void apply_field(Scenario& sc, int station_1based, const std::string& field, double v) {
    if (station_1based < 1 || station_1based > sc.size()) {
        throw scenario_error("sweep station index out of range");
    }
    auto& st = sc.stations[station_1based - 1];
    if (field == "lambda" || field == "lambda_pps") st.lambda_pps = v;
    else if (field == "bit_rate" || field == "bit_rate_bps") st.bit_rate_bps = v;
    else if (field == "payload" || field == "payload_bytes") st.payload_bytes = v;
    else if (field == "w0") st.w0 = v;
    else if (field == "pe") st.pe = v;
    else throw scenario_error("unknown sweep field '" + field + "'");
}

Criterion criterion_from_flag(const std::string& flag) {
    if (flag == "pf") return Criterion::pf;
    if (flag == "lpf") return Criterion::lpf;
    if (flag == "mlpf") return Criterion::mlpf;
    throw CLI::ValidationError("--criterion must be pf, lpf, or mlpf");
}

void print_pe_note(const Scenario& sc) {
    bool all_zero = true;
    for (const auto& st : sc.stations) all_zero = all_zero && st.pe == 0.0;
    if (all_zero) {
        std::printf("note: channel error probabilities default to 0 (ideal channel)\n");
    }
}

void print_equilibrium(const Scenario& sc, const Equilibrium& eq) {
    std::printf("%-4s %-12s %-11s %-6s %-9s %-9s %-9s %-12s %-8s\n", "st", "lambda_pps",
                "rate", "w0", "tau", "q", "b_idle", "throughput", "S/R");
    for (int s = 0; s < sc.size(); ++s) {
        const auto& st = sc.stations[s];
        const auto& ps = eq.per_station[s];
        std::printf("%-4d %-12.6g %-11s %-6.6g %-9.6f %-9.6f %-9.6f %-12s %-8.4f\n", st.id,
                    st.lambda_pps, format_bps(st.bit_rate_bps).c_str(), st.w0, ps.tau, ps.q,
                    ps.b_idle, format_bps(eq.throughput_bps[s]).c_str(),
                    eq.throughput_bps[s] / st.bit_rate_bps);
    }
    std::vector<double> norm(sc.size());
    for (int s = 0; s < sc.size(); ++s) {
        norm[s] = eq.throughput_bps[s] / sc.stations[s].bit_rate_bps;
    }
    std::printf("aggregate %s   T_av %.6g us   jain(normalized) %.4f   residual %.2e (%d iters)\n",
                format_bps(eq.aggregate_bps).c_str(), eq.slot.t_av * 1e6,
                jain_index(norm), eq.residual, eq.iterations);
}

std::string equilibrium_rows(const Scenario& sc, const Equilibrium& eq,
                             const std::string& prefix) {
    std::ostringstream rows;
    for (int s = 0; s < sc.size(); ++s) {
        const auto& ps = eq.per_station[s];
        rows << prefix << s + 1 << ',' << csv_num(ps.tau) << ',' << csv_num(ps.p_col)
             << ',' << csv_num(ps.p_eq) << ',' << csv_num(ps.q) << ',' << csv_num(ps.p_i0)
             << ',' << csv_num(ps.b_idle) << ',' << csv_num(eq.throughput_bps[s]) << ','
             << csv_num(eq.throughput_bps[s] / sc.stations[s].bit_rate_bps);
        if (s + 1 < sc.size()) rows << '\n';
    }
    return rows.str();
}

int run_model(const std::string& scenario_path, const std::string& out_dir,
              const std::string& sweep_arg) {
    const Scenario sc = load_scenario_file(scenario_path);
    print_pe_note(sc);

    if (!sweep_arg.empty()) {
        const auto sw = parse_sweep(sweep_arg);
        std::vector<std::string> rows;
        for (int i = 0; i < sw.points; ++i) {
            const double v = sw.start + (sw.stop - sw.start) * i / (sw.points - 1);
            Scenario point = sc;
            apply_field(point, sw.station, sw.field, v);
            const auto eq = solve_equilibrium(point);
            std::ostringstream row;
            row << csv_num(v);
            for (int s = 0; s < sc.size(); ++s) row << ',' << csv_num(eq.throughput_bps[s]);
            row << ',' << csv_num(eq.aggregate_bps);
            rows.push_back(row.str());
            std::printf("%s = %.6g: aggregate %s\n", sw.field.c_str(), v,
                        format_bps(eq.aggregate_bps).c_str());
        }
        if (!out_dir.empty()) {
            std::ostringstream header;
            header << sw.field;
            for (int s = 0; s < sc.size(); ++s) header << ",S" << s + 1 << "_bps";
            header << ",aggregate_bps";
            Provenance prov{"model sweep " + sweep_arg, scenario_hash(sc), 0, true};
            write_csv(fs::path(out_dir) / "model_sweep.csv", prov, header.str(), rows);
        }
        return 0;
    }

    const auto eq = solve_equilibrium(sc);
    print_equilibrium(sc, eq);
    if (!out_dir.empty()) {
        Provenance prov{"model " + scenario_path, scenario_hash(sc), 0, true};
        write_csv(fs::path(out_dir) / "model.csv", prov,
                  "station,tau,p_col,p_eq,q,p_i0,b_idle,throughput_bps,normalized",
                  {equilibrium_rows(sc, eq, "")});
    }
    return 0;
}

int run_optimize(const std::string& scenario_path, const std::string& criterion_flag_arg,
                 const std::string& out_dir, bool with_sim, double duration, int reps,
                 std::uint64_t seed) {
    const Scenario sc = load_scenario_file(scenario_path);
    print_pe_note(sc);
    const Criterion crit = criterion_from_flag(criterion_flag_arg);
    const auto alloc = optimize(sc, crit);

    std::printf("criterion %s  weights:", criterion_name(crit));
    for (double w : alloc.weights) std::printf(" %.4f", w);
    std::printf("\n");
    std::printf("%-4s %-10s %-12s %-8s %-12s %-8s\n", "st", "tau*", "W0(real)", "W0",
                "predicted", "S/R");
    for (int s = 0; s < sc.size(); ++s) {
        std::printf("%-4d %-10.6f %-12.4f %-8d %-12s %-8.4f%s\n", s + 1, alloc.tau_star[s],
                    alloc.w0_star[s].w0_real, alloc.w0_star[s].w0_int,
                    format_bps(alloc.predicted.throughput_bps[s]).c_str(),
                    alloc.predicted.throughput_bps[s] / sc.stations[s].bit_rate_bps,
                    alloc.w0_star[s].feasible ? "" : "  [tau* unreachable; clamped to W0=1]");
    }
    std::printf("predicted aggregate %s   U %.6f   jain(normalized) %.4f   jain(absolute) %.4f\n",
                format_bps(alloc.predicted.aggregate_bps).c_str(), alloc.utility_value,
                alloc.jain_normalized, alloc.jain_absolute);

    std::optional<ReplicatedReport> sim;
    if (with_sim) {
        SimConfig cfg;
        cfg.scenario = sc;
        for (int s = 0; s < sc.size(); ++s) {
            cfg.scenario.stations[s].w0 = alloc.w0_star[s].w0_int;
        }
        cfg.duration = duration;
        cfg.seed = seed;
        cfg.replications = reps;
        sim = replicate(cfg);
        std::vector<double> norm(sc.size());
        for (int s = 0; s < sc.size(); ++s) {
            norm[s] = sim->mean_bps[s] / sc.stations[s].bit_rate_bps;
            std::printf("simulated S%d %s +- %s\n", s + 1,
                        format_bps(sim->mean_bps[s]).c_str(),
                        sim->stderr_bps.empty() ? "n/a"
                                                : format_bps(sim->stderr_bps[s]).c_str());
        }
        std::printf("simulated aggregate %s   jain(normalized) %.4f\n",
                    format_bps(sim->mean_aggregate_bps).c_str(), jain_index(norm));
    }

    if (!out_dir.empty()) {
        std::vector<std::string> rows;
        for (int s = 0; s < sc.size(); ++s) {
            std::ostringstream row;
            row << s + 1 << ',' << csv_num(alloc.weights[s]) << ','
                << csv_num(alloc.tau_star[s]) << ',' << csv_num(alloc.w0_star[s].w0_real)
                << ',' << alloc.w0_star[s].w0_int << ',' << alloc.w0_star[s].feasible << ','
                << csv_num(alloc.predicted.throughput_bps[s]);
            row << ',' << (sim ? csv_num(sim->mean_bps[s]) : "");
            rows.push_back(row.str());
        }
        Provenance prov{"optimize " + criterion_flag_arg + " " + scenario_path,
                        scenario_hash(sc), seed, true};
        write_csv(fs::path(out_dir) / "optimize.csv", prov,
                  "station,weight,tau_star,w0_real,w0_int,feasible,predicted_bps,sim_bps",
                  rows);
    }
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_dir,
                 double duration, double warmup, int reps, std::uint64_t seed, bool raw,
                 const std::string& sweep_arg) {
    const Scenario sc = load_scenario_file(scenario_path);

    SimConfig cfg;
    cfg.scenario = sc;
    cfg.duration = duration;
    cfg.warmup = warmup;
    cfg.seed = seed;
    cfg.replications = reps;

    if (!sweep_arg.empty()) {
        const auto sw = parse_sweep(sweep_arg);
        std::vector<std::string> rows;
        for (int i = 0; i < sw.points; ++i) {
            const double v = sw.start + (sw.stop - sw.start) * i / (sw.points - 1);
            SimConfig point = cfg;
            apply_field(point.scenario, sw.station, sw.field, v);
            point.seed = seed + 7919u * static_cast<std::uint64_t>(i);
            const auto agg = replicate(point);
            std::ostringstream row;
            row << csv_num(v);
            for (int s = 0; s < sc.size(); ++s) row << ',' << csv_num(agg.mean_bps[s]);
            row << ',' << csv_num(agg.mean_aggregate_bps);
            rows.push_back(row.str());
            std::printf("%s = %.6g: simulated aggregate %s\n", sw.field.c_str(), v,
                        format_bps(agg.mean_aggregate_bps).c_str());
        }
        if (!out_dir.empty()) {
            std::ostringstream header;
            header << sw.field;
            for (int s = 0; s < sc.size(); ++s) header << ",S" << s + 1 << "_bps";
            header << ",aggregate_bps";
            Provenance prov{"simulate sweep " + sweep_arg, scenario_hash(sc), seed, true};
            write_csv(fs::path(out_dir) / "simulate_sweep.csv", prov, header.str(), rows);
        }
        return 0;
    }

    const auto agg = replicate(cfg);
    std::printf("%-4s %-14s %-12s %-10s %-10s %-10s\n", "st", "throughput", "stderr",
                "coll_frac", "err_frac", "idle_frac");
    const auto& first = agg.runs.front();
    for (int s = 0; s < sc.size(); ++s) {
        double coll = 0.0, err = 0.0, idle = 0.0;
        for (const auto& run : agg.runs) {
            coll += run.stations[s].collision_fraction();
            err += run.stations[s].error_fraction();
            idle += static_cast<double>(run.stations[s].idle_slots) /
                    static_cast<double>(run.measured_slots);
        }
        const int n_runs = static_cast<int>(agg.runs.size());
        std::printf("%-4d %-14s %-12s %-10.4f %-10.4f %-10.4f\n", s + 1,
                    format_bps(agg.mean_bps[s]).c_str(),
                    agg.stderr_bps.empty() ? "n/a" : format_bps(agg.stderr_bps[s]).c_str(),
                    coll / n_runs, err / n_runs, idle / n_runs);
    }
    std::printf("aggregate %s   slots idle/succ/err/coll %llu/%llu/%llu/%llu   rng %s\n",
                format_bps(agg.mean_aggregate_bps).c_str(),
                static_cast<unsigned long long>(first.slots.idle),
                static_cast<unsigned long long>(first.slots.success),
                static_cast<unsigned long long>(first.slots.error),
                static_cast<unsigned long long>(first.slots.collision),
                first.rng_algorithm.c_str());

    if (!out_dir.empty()) {
        std::vector<std::string> rows;
        for (int s = 0; s < sc.size(); ++s) {
            std::ostringstream row;
            row << s + 1 << ',' << csv_num(agg.mean_bps[s]) << ','
                << (agg.stderr_bps.empty() ? "" : csv_num(agg.stderr_bps[s]));
            rows.push_back(row.str());
        }
        Provenance prov{"simulate " + scenario_path, scenario_hash(sc), seed, true};
        write_csv(fs::path(out_dir) / "simulate.csv", prov,
                  "station,mean_bps,stderr_bps", rows);
        if (raw) {
            std::vector<std::string> raw_rows;
            for (std::size_t r = 0; r < agg.runs.size(); ++r) {
                const auto& run = agg.runs[r];
                for (int s = 0; s < sc.size(); ++s) {
                    const auto& st = run.stations[s];
                    const auto emit = [&](const char* metric, double value) {
                        std::ostringstream row;
                        row << r << ',' << s + 1 << ',' << metric << ',' << csv_num(value);
                        raw_rows.push_back(row.str());
                    };
                    emit("throughput_bps", st.throughput_bps);
                    emit("delivered_frames", static_cast<double>(st.delivered_frames));
                    emit("attempts", static_cast<double>(st.attempts));
                    emit("collisions", static_cast<double>(st.collisions));
                    emit("channel_errors", static_cast<double>(st.channel_errors));
                    emit("dropped_queue", static_cast<double>(st.dropped_queue));
                    emit("generated", static_cast<double>(st.generated));
                }
            }
            Provenance raw_prov{"simulate raw " + scenario_path, scenario_hash(sc), seed,
                                true};
            write_csv(fs::path(out_dir) / "simulate_raw.csv", raw_prov,
                      "replication,station,metric,value", raw_rows);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multirate non-saturated 802.11 DCF: model, fairness optimizer, simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string criterion = "mlpf";
    std::string sweep;
    std::string target;
    double duration = 60.0;
    double warmup = 1.0;
    int reps = 10;
    std::uint64_t seed = 1;
    bool with_sim = false;
    bool raw = false;
    int points = 24;

    auto* model = app.add_subcommand("model", "solve the analytical equilibrium");
    model->add_option("--scenario", scenario_path, "scenario file")->required();
    model->add_option("--out", out_dir, "output directory for CSV files");
    model->add_option("--sweep", sweep, "station:field:start:stop:points");

    auto* opt = app.add_subcommand("optimize", "proportional-fair window allocation");
    opt->add_option("--scenario", scenario_path, "scenario file")->required();
    opt->add_option("--criterion", criterion, "pf, lpf, or mlpf");
    opt->add_option("--out", out_dir, "output directory for CSV files");
    opt->add_flag("--sim", with_sim, "also simulate at the returned integer W0");
    opt->add_option("--duration", duration, "simulated seconds per replication");
    opt->add_option("--reps", reps, "simulation replications");
    opt->add_option("--seed", seed, "base RNG seed");

    auto* simc = app.add_subcommand("simulate", "discrete-event CSMA/CA simulation");
    simc->add_option("--scenario", scenario_path, "scenario file")->required();
    simc->add_option("--out", out_dir, "output directory for CSV files");
    simc->add_option("--duration", duration, "simulated seconds per replication");
    simc->add_option("--warmup", warmup, "seconds excluded from statistics");
    simc->add_option("--reps", reps, "replications");
    simc->add_option("--seed", seed, "base RNG seed");
    simc->add_flag("--raw", raw, "emit per-replication raw metric rows");
    simc->add_option("--sweep", sweep, "station:field:start:stop:points");

    auto* repr = app.add_subcommand("reproduce", "render built-in study targets");
    repr->add_option("target", target, "fig1A, fig1B, fig2, or table1")->required();
    repr->add_option("--out", out_dir, "output directory")->default_val("out");
    repr->add_option("--seed", seed, "base RNG seed");
    repr->add_option("--duration", duration, "simulated seconds per replication");
    repr->add_option("--reps", reps, "replications per setup");
    repr->add_option("--points", points, "fig2 sweep resolution (>= 20)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (model->parsed()) return run_model(scenario_path, out_dir, sweep);
        if (opt->parsed()) {
            return run_optimize(scenario_path, criterion, out_dir, with_sim, duration,
                                reps, seed);
        }
        if (simc->parsed()) {
            return run_simulate(scenario_path, out_dir, duration, warmup, reps, seed, raw,
                                sweep);
        }
        ReproduceOptions ro;
        ro.out_dir = out_dir;
        ro.seed = seed;
        ro.duration = duration;
        ro.replications = reps;
        ro.sweep_points = points;
        const auto path = reproduce_target(target, ro);
        std::printf("wrote %s\n", path.string().c_str());
        return 0;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "error: %s: %s\n", scenario_path.c_str(), e.what());
        return kExitScenario;
    } catch (const scenario_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitScenario;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTarget;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
}
