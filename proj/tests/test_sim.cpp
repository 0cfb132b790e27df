#include "doctest.h"

#include "mrdcf/fixed_point.hpp"
#include "mrdcf/scenario_io.hpp"
#include "mrdcf/sim.hpp"

using namespace mrdcf;

namespace {

Scenario single(double lambda, double rate, double w0 = 32, double pe = 0.0) {
    Scenario sc;
    StationConfig st;
    st.id = 1;
    st.lambda_pps = lambda;
    st.bit_rate_bps = rate;
    st.w0 = w0;
    st.pe = pe;
    sc.stations = {st};
    return sc;
}

SimConfig config(Scenario sc, double duration, std::uint64_t seed, int reps = 1) {
    SimConfig cfg;
    cfg.scenario = std::move(sc);
    cfg.duration = duration;
    cfg.warmup = 1.0;
    cfg.seed = seed;
    cfg.replications = reps;
    return cfg;
}

}  // namespace

TEST_CASE("saturated single station matches the renewal closed form") {
    // One backlogged station never collides: each delivery costs T_S plus an
    // average of (W0-1)/2 idle slots.
    const auto sc = single(1e6, 11e6);
    const auto rep = run_sim(config(sc, 60.0, 42));
    const double ts = frame_durations(sc.stations[0], sc.phy).t_success;
    const double expected = 1028 * 8 / (ts + (32 - 1) / 2.0 * sc.phy.sigma);
    CHECK(rep.stations[0].throughput_bps ==
          doctest::Approx(expected).epsilon(0.01));
    CHECK(rep.stations[0].collisions == 0);
    CHECK(rep.slots.collision == 0);
}

TEST_CASE("two identical stations split the channel evenly") {
    Scenario sc;
    for (int i = 0; i < 2; ++i) {
        StationConfig st;
        st.id = i + 1;
        st.lambda_pps = 2000;
        st.bit_rate_bps = 11e6;
        sc.stations.push_back(st);
    }
    const auto agg = replicate(config(sc, 30.0, 9, 8));
    const double gap = std::abs(agg.mean_bps[0] - agg.mean_bps[1]);
    const double se = agg.stderr_bps[0] + agg.stderr_bps[1];
    CHECK(gap <= 2.0 * se + 1e-6 * agg.mean_bps[0]);
}

TEST_CASE("identical seed and config reproduce bit-identically") {
    const auto sc = builtin_scenario_a();
    const auto a = replicate(config(sc, 10.0, 1234, 3));
    const auto b = replicate(config(sc, 10.0, 1234, 3));
    for (int s = 0; s < 3; ++s) {
        CHECK(a.mean_bps[s] == b.mean_bps[s]);
        CHECK(a.stderr_bps[s] == b.stderr_bps[s]);
    }
    for (int r = 0; r < 3; ++r) {
        CHECK(a.runs[r].slots.total() == b.runs[r].slots.total());
        CHECK(a.runs[r].seed == b.runs[r].seed);
    }
    // and a different seed actually changes the sample path
    const auto c = replicate(config(sc, 10.0, 1235, 3));
    CHECK(a.mean_bps[0] != c.mean_bps[0]);
}

TEST_CASE("single replication reports no standard errors") {
    const auto agg = replicate(config(builtin_scenario_a(), 5.0, 7, 1));
    CHECK(agg.stderr_bps.empty());
    CHECK(agg.runs.size() == 1);
}

TEST_CASE("virtual slot census partitions the measured slots") {
    const auto rep = run_sim(config(builtin_scenario_a(), 20.0, 5));
    CHECK(rep.slots.total() == rep.measured_slots);
    CHECK(rep.slots.idle > 0);
    CHECK(rep.slots.success > 0);
}

TEST_CASE("every generated packet is accounted for") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto rep = run_sim(config(builtin_scenario_a(), 15.0, seed));
        for (const auto& st : rep.stations) {
            CHECK(st.generated ==
                  st.delivered_total + st.dropped_queue + st.in_service_at_end);
        }
    }
}

TEST_CASE("backoff windows follow the doubling law capped at stage m") {
    auto sc = builtin_scenario_a();
    for (auto& st : sc.stations) {
        st.w0 = 4;    // small windows and a lossy channel drive the stages deep
        st.pe = 0.4;
    }
    const auto rep = run_sim(config(sc, 30.0, 77));
    const int m = sc.phy.max_backoff_stage;
    for (int s = 0; s < 3; ++s) {
        const int w0 = static_cast<int>(sc.stations[s].w0);
        for (int i = 0; i <= m; ++i) {
            const int window = w0 << i;
            CHECK(rep.stations[s].stage_max_counter[i] < window);
            if (rep.stations[s].stage_draws[i] > 200) {
                CHECK(rep.stations[s].stage_max_counter[i] == window - 1);
            }
        }
        // deep stages were actually exercised
        CHECK(rep.stations[s].stage_draws[m] > 0);
    }
}

TEST_CASE("channel errors burn attempts at the configured rate") {
    const auto sc = single(1e6, 11e6, 32, 0.25);
    const auto rep = run_sim(config(sc, 40.0, 21));
    CHECK(rep.stations[0].error_fraction() == doctest::Approx(0.25).epsilon(0.05));
    CHECK(rep.slots.error > 0);

    // near-certain errors kill throughput
    const auto dead = run_sim(config(single(1e6, 11e6, 32, 0.995), 20.0, 22));
    const auto live = run_sim(config(single(1e6, 11e6, 32, 0.0), 20.0, 22));
    CHECK(dead.stations[0].throughput_bps < 0.05 * live.stations[0].throughput_bps);
}

TEST_CASE("light offered load is delivered almost entirely") {
    const auto sc = single(30, 11e6);
    const auto rep = run_sim(config(sc, 40.0, 33));
    const double offered = 30 * 8 * 1028;
    CHECK(rep.stations[0].throughput_bps == doctest::Approx(offered).epsilon(0.05));
    CHECK(rep.stations[0].idle_slots > 0);
}

TEST_CASE("analytical model and simulator agree on a mixed saturated network") {
    Scenario sc;
    static const double rates[] = {11e6, 5.5e6, 1e6};
    for (int i = 0; i < 3; ++i) {
        StationConfig st;
        st.id = i + 1;
        st.lambda_pps = 5000;  // saturated
        st.bit_rate_bps = rates[i];
        sc.stations.push_back(st);
    }
    const auto eq = solve_equilibrium(sc);
    const auto agg = replicate(config(sc, 40.0, 17, 6));
    for (int s = 0; s < 3; ++s) {
        const double rel =
            std::abs(agg.mean_bps[s] - eq.throughput_bps[s]) / eq.throughput_bps[s];
        CHECK(rel < 0.05);
    }
}

TEST_CASE("config validation") {
    auto cfg = config(builtin_scenario_a(), 10.0, 1);
    cfg.duration = 0.5;  // below warmup
    CHECK_THROWS_AS(run_sim(cfg), sim_error);

    auto fractional = config(builtin_scenario_a(), 10.0, 1);
    fractional.scenario.stations[0].w0 = 32.5;
    CHECK_THROWS_AS(run_sim(fractional), sim_error);

    auto bad_reps = config(builtin_scenario_a(), 10.0, 1);
    bad_reps.replications = 0;
    CHECK_THROWS_AS(replicate(bad_reps), sim_error);
}
