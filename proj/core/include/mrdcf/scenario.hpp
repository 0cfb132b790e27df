#ifndef MRDCF_SCENARIO_HPP
#define MRDCF_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrdcf {

/// Raised when a scenario violates a structural invariant. The message names
/// the offending station and field.
class scenario_error : public std::runtime_error {
public:
    explicit scenario_error(const std::string& what) : std::runtime_error(what) {}
};

/// One contending station: traffic and PHY description.
/// Units: lambda_pps in packets/s, bit_rate_bps in bits/s, payload_bytes in
/// bytes, w0 in slots (real-valued in the analytical model, integral in the
/// simulator), pe dimensionless in [0,1).
struct StationConfig {
    int id = 0;                 // 1-based station index
    double lambda_pps = 0.0;
    double bit_rate_bps = 0.0;
    double payload_bytes = 1028.0;
    double w0 = 32.0;
    double pe = 0.0;
};

/// Shared MAC/PHY timing constants. Defaults are the IEEE 802.11b
/// long-preamble mandatory values; every field can be overridden from a
/// scenario file.
struct PhyTimingParams {
    double sigma = 20e-6;       // idle slot, seconds
    double sifs = 10e-6;
    double difs = 50e-6;
    double phy_hdr = 192e-6;    // PLCP preamble + header airtime, seconds
    double mac_hdr_bytes = 28.0;
    double ack_bytes = 14.0;
    double ack_rate_bps = 1e6;  // basic rate used by ACK frames
    int max_backoff_stage = 5;  // m: window doubles up to stage m, then stays
    int queue_size = 1;         // KQ, fixed at one packet
};

struct Scenario {
    std::vector<StationConfig> stations;
    PhyTimingParams phy;
    std::string label;

    int size() const { return static_cast<int>(stations.size()); }
};

/// Airtimes of one frame exchange for a given station.
struct FrameDurations {
    double t_success;   // T_S: data + SIFS + ACK + DIFS
    double t_error;     // T_E: same airtime, ACK timeout modeled as SIFS + T_ack
};

/// One channel-occupancy duration class. Class 0 in `ClassPartition::classes`
/// is the slowest (largest duration); the spec's 1-based class index d maps to
/// position d-1.
struct DurationClass {
    std::vector<int> members;   // 0-based station indices
    double t_success = 0.0;     // T_S of a member frame
    double t_error = 0.0;       // T_E of a member frame
    double t_collision = 0.0;   // T_C^(d), equal to t_success by construction
};

struct ClassPartition {
    std::vector<DurationClass> classes;  // sorted by strictly decreasing duration
    std::vector<int> class_of;           // station index -> class position

    int n_classes() const { return static_cast<int>(classes.size()); }
};

/// Checks every type invariant and returns the scenario unchanged.
/// Throws scenario_error naming the first violated field.
const Scenario& validate_scenario(const Scenario& sc);

/// T_S and T_E for one station under the given timing parameters.
FrameDurations frame_durations(const StationConfig& st, const PhyTimingParams& phy);

/// ACK airtime (preamble + ACK body at the basic rate).
double ack_duration(const PhyTimingParams& phy);

/// Groups stations with identical successful-transmission duration into
/// duration classes, ordered slowest first. Equality is decided at nanosecond
/// resolution to avoid floating-point ties.
ClassPartition derive_classes(const Scenario& sc);

}  // namespace mrdcf

#endif
