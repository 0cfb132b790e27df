// Output plumbing for the mrdcf tool: provenance headers, CSV writing, and
// the shared run description every artifact carries.
#ifndef MRDCF_TOOLS_REPORT_HPP
#define MRDCF_TOOLS_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mrdcf::tool {

inline constexpr const char* kVersion = "0.1.0";

struct Provenance {
    std::string run;              // verb plus the salient arguments
    std::uint64_t scenario_hash;  // 0 when no scenario is involved
    std::uint64_t seed;
    bool stamp_time = true;
};

/// `# key: value` comment block; the timestamp sits on its own line so files
/// are byte-comparable after dropping it.
std::string provenance_block(const Provenance& p);

/// Writes header comments, one header row, then data rows.
void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::string& header, const std::vector<std::string>& rows);

std::string format_bps(double bps);    // engineering units for tables
std::string csv_num(double v);         // full-precision CSV field

}  // namespace mrdcf::tool

#endif
