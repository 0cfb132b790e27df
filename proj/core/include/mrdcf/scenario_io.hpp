#ifndef MRDCF_SCENARIO_IO_HPP
#define MRDCF_SCENARIO_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mrdcf/scenario.hpp"

namespace mrdcf {

/// Parse failure with the offending line number in the message.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// Parses the flat scenario format: an optional top-level `label = ...`,
/// one `[phy]` section (sigma, sifs, difs, phy_hdr in seconds; mac_hdr,
/// ack_size in bytes; ack_rate in bits/s; m; queue_size) and one `[station]`
/// section per station (lambda_pps, bit_rate_bps, payload_bytes, w0, pe).
/// Unset phy keys keep the 802.11b defaults. `#` starts a comment.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_string(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Canonical textual form (stable key order, %.17g values); parses back to an
/// identical scenario.
std::string format_scenario(const Scenario& sc);

/// FNV-1a over the canonical form; stable across runs for provenance lines.
std::uint64_t scenario_hash(const Scenario& sc);

/// The two three-station setups used throughout: A pairs two 11 Mbps stations
/// at 500 pkt/s with a 1 Mbps station at 1000 pkt/s; B swaps the loading so
/// the fast stations carry the higher packet rate (1000 vs 500). B's packet
/// rates are a calibrated assumption, flagged in its label.
Scenario builtin_scenario_a();
Scenario builtin_scenario_b();

}  // namespace mrdcf

#endif
