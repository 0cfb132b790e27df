#include "doctest.h"

#include <random>

#include "mrdcf/station_chain.hpp"
#include "oracles.hpp"

using namespace mrdcf;

TEST_CASE("p_equivalent_failure") {
    CHECK(p_equivalent_failure(0.0, 0.0) == doctest::Approx(0.0));
    CHECK(p_equivalent_failure(0.42, 0.0) == doctest::Approx(0.42));
    CHECK(p_equivalent_failure(0.3, 0.1) == doctest::Approx(0.37).epsilon(1e-12));

    // symmetric, monotone, and dominating both inputs
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        const double p = p_equivalent_failure(a, b);
        CHECK(p == doctest::Approx(p_equivalent_failure(b, a)).epsilon(1e-15));
        CHECK(p >= std::max(a, b) - 1e-15);
        CHECK(p <= 1.0 + 1e-15);
        CHECK(p_equivalent_failure(std::min(1.0, a + 0.01), b) >= p - 1e-15);
    }
}

TEST_CASE("traffic_probs") {
    const auto tp = traffic_probs(1000.0, 1e-3, 1e-3);
    CHECK(tp.q == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(tp.p_i0 == doctest::Approx(tp.q));

    // lambda * T_av = ln 2 gives exactly one half
    CHECK(traffic_probs(std::log(2.0) / 2e-3, 2e-3, 1e-3).q == doctest::Approx(0.5));

    // saturation limit
    const auto sat = traffic_probs(1e9, 1e-3, 1e-3);
    CHECK(sat.q == doctest::Approx(1.0));
    CHECK(sat.p_i0 == doctest::Approx(1.0));
}

TEST_CASE("tau_from_chain closed form") {
    // no failures, never idle: the classical 2/(W+1)
    CHECK(tau_from_chain(0.0, 0.0, 32.0, 5) == doctest::Approx(2.0 / 33.0).epsilon(1e-15));
    // permanently idle station never transmits
    CHECK(tau_from_chain(1.0, 0.3, 32.0, 5) == doctest::Approx(0.0));
    // hand evaluation: denominator 33 + 32*0.2*sum_{i<5} 0.4^i
    const double geom = 1.0 + 0.4 + 0.16 + 0.064 + 0.0256;
    const double by_hand = 2.0 / (33.0 + 32.0 * 0.2 * geom);
    CHECK(tau_from_chain(0.0, 0.2, 32.0, 5) == doctest::Approx(by_hand).epsilon(1e-15));
    CHECK(by_hand == doctest::Approx(0.0459159).epsilon(1e-5));
}

TEST_CASE("tau is continuous through p_eq = 1/2") {
    const double lo = tau_from_chain(0.1, 0.5 - 1e-6, 32.0, 5);
    const double mid = tau_from_chain(0.1, 0.5, 32.0, 5);
    const double hi = tau_from_chain(0.1, 0.5 + 1e-6, 32.0, 5);
    CHECK(mid == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
    CHECK(std::isfinite(mid));
    CHECK(lo > hi);  // still decreasing in p_eq
}

TEST_CASE("tau decreases in W0 and in b_idle") {
    double prev = 1.0;
    for (double w0 : {1.0, 2.0, 8.0, 32.0, 128.0, 1024.0}) {
        const double t = tau_from_chain(0.2, 0.1, w0, 5);
        CHECK(t < prev);
        prev = t;
    }
    prev = 1.0;
    for (double b : {0.0, 0.2, 0.5, 0.9, 0.99}) {
        const double t = tau_from_chain(b, 0.1, 32.0, 5);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("explicit chain solve agrees with the closed form and Eq-style algebra") {
    struct Case {
        double w0;
        int m;
        double p_eq, q, p_i0;
    };
    const Case cases[] = {
        {16, 3, 0.05, 0.3, 0.4}, {8, 2, 0.2, 0.7, 0.2},  {32, 5, 0.1, 0.5, 0.3},
        {4, 4, 0.3, 0.9, 0.8},   {16, 5, 0.45, 0.2, 0.1}, {32, 5, 0.5, 0.5, 0.5},
    };
    for (const auto& c : cases) {
        CAPTURE(c.w0);
        CAPTURE(c.p_eq);
        const auto sol = solve_station_chain(c.w0, c.m, c.p_eq, c.q, c.p_i0);
        CHECK(std::abs(sol.stationary_sum - 1.0) < 1e-12);
        CHECK(sol.min_mass > -1e-12);
        CHECK(sol.b_idle ==
              doctest::Approx(idle_probability_closed(c.q, c.p_eq, c.p_i0, c.w0, c.m))
                  .epsilon(1e-12));
        // the transmit-state mass reproduces the closed form at the solved b_idle
        CHECK(std::abs(sol.tau - tau_from_chain(sol.b_idle, c.p_eq, c.w0, c.m)) < 1e-9);
    }
}

TEST_CASE("chain occupancy matches a Monte-Carlo walk") {
    struct Case {
        int w0;
        int m;
        double p_eq, q, p_i0;
    };
    const Case cases[] = {
        {16, 3, 0.05, 0.3, 0.4}, {8, 2, 0.2, 0.7, 0.2}, {4, 4, 0.3, 0.9, 0.8},
        {8, 3, 0.15, 0.5, 0.5},  {16, 2, 0.1, 0.4, 0.6},
    };
    int i = 0;
    for (const auto& c : cases) {
        const auto sol = solve_station_chain(c.w0, c.m, c.p_eq, c.q, c.p_i0);
        const double mc =
            oracles::mc_idle_occupancy(c.w0, c.m, c.p_eq, c.q, c.p_i0, 10'000'000,
                                       1000 + 17 * i++);
        CHECK(std::abs(sol.b_idle - mc) < 1e-3);
    }
}

TEST_CASE("saturation drives the idle state empty") {
    CHECK(idle_probability_closed(1.0, 0.1, 0.5, 32.0, 5) == doctest::Approx(0.0));
    CHECK(idle_probability_closed(1.0 - 1e-12, 0.1, 1.0, 32.0, 5) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // q -> 1 makes Eq. (1) degenerate to the saturated two-parameter form
    const double tau_sat_direct = tau_saturated(0.1, 32.0, 5);
    const double b = idle_probability_closed(1.0, 0.1, 0.7, 32.0, 5);
    CHECK(tau_from_chain(b, 0.1, 32.0, 5) == doctest::Approx(tau_sat_direct).epsilon(1e-12));
}

TEST_CASE("chain construction guards") {
    CHECK_THROWS_AS(solve_station_chain(0.5, 5, 0.1, 0.5, 0.5), chain_error);
    CHECK_THROWS_AS(solve_station_chain(32.7, 5, 0.1, 0.5, 0.5), chain_error);
    CHECK_THROWS_AS(solve_station_chain(32.0, 0, 0.1, 0.5, 0.5), chain_error);
}
