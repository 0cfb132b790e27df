#include "mrdcf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mrdcf {

namespace {

std::string station_field(int id, const char* field, const std::string& why) {
    return "station " + std::to_string(id) + ": " + field + " " + why;
}

}  // namespace

const Scenario& validate_scenario(const Scenario& sc) {
    if (sc.stations.empty()) {
        throw scenario_error("no stations");
    }
    const auto& phy = sc.phy;
    if (phy.sigma <= 0) throw scenario_error("phy: sigma must be positive");
    if (phy.sifs <= 0) throw scenario_error("phy: sifs must be positive");
    if (phy.difs <= 0) throw scenario_error("phy: difs must be positive");
    if (phy.phy_hdr <= 0) throw scenario_error("phy: phy_hdr must be positive");
    if (phy.mac_hdr_bytes < 0) throw scenario_error("phy: mac_hdr_bytes must be nonnegative");
    if (phy.ack_bytes < 0) throw scenario_error("phy: ack_bytes must be nonnegative");
    if (phy.ack_rate_bps <= 0) throw scenario_error("phy: ack_rate_bps must be positive");
    if (phy.max_backoff_stage < 1) throw scenario_error("phy: m must be at least 1");
    if (phy.queue_size != 1) throw scenario_error("phy: queue_size must be 1");

    for (int i = 0; i < sc.size(); ++i) {
        const auto& st = sc.stations[i];
        if (st.id != i + 1) {
            throw scenario_error(station_field(st.id, "id",
                "out of order; ids must be contiguous starting at 1"));
        }
        if (!(st.lambda_pps > 0)) {
            throw scenario_error(station_field(st.id, "lambda_pps", "must be positive"));
        }
        if (!(st.bit_rate_bps > 0)) {
            throw scenario_error(station_field(st.id, "bit_rate_bps", "must be positive"));
        }
        if (!(st.payload_bytes >= 1)) {
            throw scenario_error(station_field(st.id, "payload_bytes", "must be at least 1"));
        }
        if (!(st.w0 >= 1)) {
            throw scenario_error(station_field(st.id, "w0", "must be at least 1"));
        }
        if (!(st.pe >= 0 && st.pe < 1)) {
            throw scenario_error(station_field(st.id, "pe", "out of range [0,1)"));
        }
    }
    return sc;
}

double ack_duration(const PhyTimingParams& phy) {
    return phy.phy_hdr + 8.0 * phy.ack_bytes / phy.ack_rate_bps;
}

FrameDurations frame_durations(const StationConfig& st, const PhyTimingParams& phy) {
    const double t_data =
        phy.phy_hdr + 8.0 * (phy.mac_hdr_bytes + st.payload_bytes) / st.bit_rate_bps;
    const double t = t_data + phy.sifs + ack_duration(phy) + phy.difs;
    return FrameDurations{t, t};
}

ClassPartition derive_classes(const Scenario& sc) {
    // Key by T_S at integer nanosecond resolution; iterate in decreasing
    // duration order so class 0 is the slowest.
    std::map<std::int64_t, std::vector<int>, std::greater<>> groups;
    std::vector<FrameDurations> durs(sc.stations.size());
    for (int i = 0; i < sc.size(); ++i) {
        durs[i] = frame_durations(sc.stations[i], sc.phy);
        const auto key = static_cast<std::int64_t>(std::llround(durs[i].t_success * 1e9));
        groups[key].push_back(i);
    }

    ClassPartition part;
    part.class_of.assign(sc.stations.size(), -1);
    for (const auto& [key, members] : groups) {
        DurationClass cls;
        cls.members = members;
        cls.t_success = durs[members.front()].t_success;
        cls.t_error = durs[members.front()].t_error;
        cls.t_collision = cls.t_success;
        const int pos = static_cast<int>(part.classes.size());
        for (int s : members) part.class_of[s] = pos;
        part.classes.push_back(std::move(cls));
    }
    return part;
}

}  // namespace mrdcf
