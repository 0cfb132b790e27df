#include "mrdcf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace mrdcf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr const char* kRngId = "mt19937_64/splitmix64";

// Uniform in [0,1) with 53-bit resolution, independent of library
// distribution internals so runs reproduce across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) {
    return -std::log1p(-uniform01(rng)) / rate;
}

int uniform_counter(std::mt19937_64& rng, int window) {
    return static_cast<int>(uniform01(rng) * window);
}

void validate_config(const SimConfig& cfg) {
    validate_scenario(cfg.scenario);
    if (!(cfg.duration > cfg.warmup) || cfg.warmup < 0.0) {
        throw sim_error("duration must exceed warmup and warmup be nonnegative");
    }
    if (cfg.replications < 1) throw sim_error("replications must be at least 1");
    for (const auto& st : cfg.scenario.stations) {
        if (std::abs(st.w0 - std::round(st.w0)) > 1e-9) {
            throw sim_error("station " + std::to_string(st.id) +
                            ": w0 must be an integer for simulation");
        }
    }
}

}  // namespace

SimReport run_sim(const SimConfig& cfg) {
    validate_config(cfg);
    const auto& sc = cfg.scenario;
    const int n = sc.size();
    const int m = sc.phy.max_backoff_stage;
    const auto part = derive_classes(sc);

    std::vector<double> t_succ(n);
    std::vector<double> t_err(n);
    std::vector<int> w0(n);
    for (int s = 0; s < n; ++s) {
        const auto fd = frame_durations(sc.stations[s], sc.phy);
        t_succ[s] = fd.t_success;
        t_err[s] = fd.t_error;
        w0[s] = static_cast<int>(std::llround(sc.stations[s].w0));
    }

    std::mt19937_64 rng(splitmix64(cfg.seed));

    enum class Mode { idle, contend };
    std::vector<Mode> mode(n, Mode::idle);
    std::vector<int> stage(n, 0);
    std::vector<int> counter(n, 0);
    std::vector<double> next_arrival(n);
    for (int s = 0; s < n; ++s) {
        next_arrival[s] = exponential(rng, sc.stations[s].lambda_pps);
    }

    SimReport rep;
    rep.stations.resize(n);
    rep.seed = cfg.seed;
    rep.rng_algorithm = kRngId;
    for (auto& st : rep.stations) {
        st.stage_draws.assign(m + 1, 0);
        st.stage_max_counter.assign(m + 1, -1);
    }

    const auto draw_counter = [&](int s) {
        const int window = w0[s] << stage[s];
        const int k = uniform_counter(rng, window);
        auto& st = rep.stations[s];
        ++st.stage_draws[stage[s]];
        st.stage_max_counter[stage[s]] = std::max(st.stage_max_counter[stage[s]], k);
        return k;
    };

    std::vector<int> transmitters;
    transmitters.reserve(n);

    double t = 0.0;
    while (t < cfg.duration) {
        const bool measured = t >= cfg.warmup;
        if (measured) ++rep.measured_slots;
        transmitters.clear();
        for (int s = 0; s < n; ++s) {
            if (mode[s] == Mode::contend && counter[s] == 0) transmitters.push_back(s);
            if (measured && mode[s] == Mode::idle) ++rep.stations[s].idle_slots;
        }

        double slot_len = sc.phy.sigma;
        if (transmitters.empty()) {
            if (measured) ++rep.slots.idle;
            for (int s = 0; s < n; ++s) {
                if (mode[s] == Mode::contend) --counter[s];
            }
        } else if (transmitters.size() == 1) {
            const int s = transmitters.front();
            if (measured) ++rep.stations[s].attempts;
            if (uniform01(rng) < sc.stations[s].pe) {
                slot_len = t_err[s];
                if (measured) {
                    ++rep.slots.error;
                    ++rep.stations[s].channel_errors;
                }
                stage[s] = std::min(stage[s] + 1, m);
                counter[s] = draw_counter(s);
            } else {
                slot_len = t_succ[s];
                ++rep.stations[s].delivered_total;
                if (measured) {
                    ++rep.slots.success;
                    ++rep.stations[s].delivered_frames;
                    rep.stations[s].throughput_bps += sc.stations[s].payload_bytes * 8.0;
                }
                // Frame gone; the buffer frees for an arrival inside this slot.
                mode[s] = Mode::idle;
                stage[s] = 0;
            }
        } else {
            int slowest_class = part.n_classes();
            for (int s : transmitters) {
                slowest_class = std::min(slowest_class, part.class_of[s]);
            }
            slot_len = part.classes[slowest_class].t_collision;
            if (measured) ++rep.slots.collision;
            for (int s : transmitters) {
                if (measured) {
                    ++rep.stations[s].attempts;
                    ++rep.stations[s].collisions;
                }
                stage[s] = std::min(stage[s] + 1, m);
                counter[s] = draw_counter(s);
            }
        }

        const double t_end = t + slot_len;
        for (int s = 0; s < n; ++s) {
            while (next_arrival[s] <= t_end) {
                ++rep.stations[s].generated;
                if (mode[s] == Mode::idle) {
                    mode[s] = Mode::contend;
                    stage[s] = 0;
                    counter[s] = draw_counter(s);
                } else {
                    ++rep.stations[s].dropped_queue;
                }
                next_arrival[s] += exponential(rng, sc.stations[s].lambda_pps);
            }
        }
        t = t_end;
    }

    rep.measured_seconds = cfg.duration - cfg.warmup;
    for (int s = 0; s < n; ++s) {
        auto& st = rep.stations[s];
        st.throughput_bps /= rep.measured_seconds;
        st.in_service_at_end = mode[s] == Mode::contend ? 1 : 0;
        rep.aggregate_bps += st.throughput_bps;
    }
    return rep;
}

ReplicatedReport replicate(const SimConfig& cfg) {
    validate_config(cfg);
    const int reps = cfg.replications;

    std::vector<std::future<SimReport>> futures;
    futures.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        SimConfig one = cfg;
        one.replications = 1;
        one.seed = splitmix64(cfg.seed + static_cast<std::uint64_t>(r));
        futures.push_back(std::async(std::launch::async, [one] { return run_sim(one); }));
    }

    ReplicatedReport agg;
    agg.runs.reserve(reps);
    for (auto& f : futures) agg.runs.push_back(f.get());

    const int n = cfg.scenario.size();
    agg.mean_bps.assign(n, 0.0);
    for (const auto& run : agg.runs) {
        for (int s = 0; s < n; ++s) agg.mean_bps[s] += run.stations[s].throughput_bps;
        agg.mean_aggregate_bps += run.aggregate_bps;
    }
    for (int s = 0; s < n; ++s) agg.mean_bps[s] /= reps;
    agg.mean_aggregate_bps /= reps;

    if (reps >= 2) {
        agg.stderr_bps.assign(n, 0.0);
        double var_agg = 0.0;
        for (const auto& run : agg.runs) {
            for (int s = 0; s < n; ++s) {
                const double d = run.stations[s].throughput_bps - agg.mean_bps[s];
                agg.stderr_bps[s] += d * d;
            }
            const double da = run.aggregate_bps - agg.mean_aggregate_bps;
            var_agg += da * da;
        }
        for (int s = 0; s < n; ++s) {
            agg.stderr_bps[s] = std::sqrt(agg.stderr_bps[s] / (reps - 1)) / std::sqrt(reps);
        }
        agg.stderr_aggregate_bps = std::sqrt(var_agg / (reps - 1)) / std::sqrt(reps);
    }
    return agg;
}

}  // namespace mrdcf
