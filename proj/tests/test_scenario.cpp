#include "doctest.h"

#include "mrdcf/scenario.hpp"
#include "mrdcf/scenario_io.hpp"

using namespace mrdcf;

namespace {

StationConfig station(int id, double lambda, double rate, double payload = 1028.0,
                      double w0 = 32.0, double pe = 0.0) {
    StationConfig st;
    st.id = id;
    st.lambda_pps = lambda;
    st.bit_rate_bps = rate;
    st.payload_bytes = payload;
    st.w0 = w0;
    st.pe = pe;
    return st;
}

}  // namespace

TEST_CASE("validate_scenario accepts the three-station reference setup") {
    const auto sc = builtin_scenario_a();
    CHECK_NOTHROW(validate_scenario(sc));
    CHECK(sc.size() == 3);
    CHECK(sc.stations[2].lambda_pps == doctest::Approx(1000.0));
    CHECK(sc.stations[2].bit_rate_bps == doctest::Approx(1e6));
}

TEST_CASE("validate_scenario rejects out-of-range fields") {
    auto sc = builtin_scenario_a();
    sc.stations[1].pe = 1.0;
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("pe out of range"),
                         scenario_error);

    Scenario empty;
    CHECK_THROWS_WITH_AS(validate_scenario(empty), doctest::Contains("no stations"),
                         scenario_error);

    auto bad_w0 = builtin_scenario_a();
    bad_w0.stations[0].w0 = 0.5;
    CHECK_THROWS_AS(validate_scenario(bad_w0), scenario_error);

    auto bad_lambda = builtin_scenario_a();
    bad_lambda.stations[2].lambda_pps = 0.0;
    CHECK_THROWS_WITH_AS(validate_scenario(bad_lambda), doctest::Contains("station 3"),
                         scenario_error);
}

TEST_CASE("frame_durations matches hand-evaluated 802.11b airtimes") {
    PhyTimingParams phy;  // 802.11b long-preamble defaults

    // 1 Mbps, 1028 B payload: 192us preamble + 8*1056/1e6 data + 10us SIFS
    // + (192+112)us ACK + 50us DIFS = 9.004 ms
    const auto slow = frame_durations(station(1, 1000, 1e6), phy);
    CHECK(slow.t_success == doctest::Approx(9.004e-3).epsilon(1e-12));
    CHECK(slow.t_error == doctest::Approx(slow.t_success));

    // Same frame at 11 Mbps: data term 8*1056/11e6 = 768us, total 1.324 ms
    const auto fast = frame_durations(station(1, 1000, 11e6), phy);
    CHECK(fast.t_success == doctest::Approx(1.324e-3).epsilon(1e-12));

    // Payload term vanishes as the rate grows
    const auto limit = frame_durations(station(1, 1000, 1e15), phy);
    const double floor = phy.phy_hdr + phy.sifs + ack_duration(phy) + phy.difs;
    CHECK(limit.t_success == doctest::Approx(floor).epsilon(1e-9));

    // Scale correctness: doubling the payload adds exactly 8*PL/R
    const auto base = frame_durations(station(1, 10, 2e6, 500), phy);
    const auto doubled = frame_durations(station(1, 10, 2e6, 1000), phy);
    CHECK(doubled.t_success - base.t_success ==
          doctest::Approx(8.0 * 500 / 2e6).epsilon(1e-12));
}

TEST_CASE("derive_classes groups by airtime, slowest first") {
    SUBCASE("scenario A forms two classes with the slow station first") {
        const auto part = derive_classes(builtin_scenario_a());
        REQUIRE(part.n_classes() == 2);
        CHECK(part.classes[0].members == std::vector<int>{2});
        CHECK(part.classes[1].members == std::vector<int>{0, 1});
        CHECK(part.classes[0].t_collision > part.classes[1].t_collision);
        CHECK(part.classes[0].t_collision == doctest::Approx(9.004e-3));
        CHECK(part.class_of == std::vector<int>{1, 1, 0});
    }

    SUBCASE("identical stations collapse into one class") {
        Scenario sc;
        for (int i = 0; i < 4; ++i) sc.stations.push_back(station(i + 1, 100, 11e6));
        const auto part = derive_classes(sc);
        REQUIRE(part.n_classes() == 1);
        CHECK(part.classes[0].members.size() == 4);
    }

    SUBCASE("three distinct rates give three singleton classes") {
        Scenario sc;
        sc.stations = {station(1, 100, 1e6), station(2, 100, 2e6), station(3, 100, 11e6)};
        const auto part = derive_classes(sc);
        REQUIRE(part.n_classes() == 3);
        for (const auto& cls : part.classes) CHECK(cls.members.size() == 1);
        CHECK(part.classes[0].members == std::vector<int>{0});  // 1 Mbps slowest
        // strictly decreasing durations
        CHECK(part.classes[0].t_success > part.classes[1].t_success);
        CHECK(part.classes[1].t_success > part.classes[2].t_success);
    }

    SUBCASE("every station lands in exactly one class") {
        Scenario sc;
        sc.stations = {station(1, 10, 1e6), station(2, 10, 11e6), station(3, 10, 1e6),
                       station(4, 10, 5.5e6), station(5, 10, 11e6)};
        const auto part = derive_classes(sc);
        std::vector<int> seen(sc.stations.size(), 0);
        int total = 0;
        for (const auto& cls : part.classes) {
            for (int s : cls.members) {
                ++seen[s];
                ++total;
            }
        }
        CHECK(total == sc.size());
        for (int count : seen) CHECK(count == 1);
    }
}
