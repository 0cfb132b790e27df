#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mrdcf::tool {

std::string provenance_block(const Provenance& p) {
    std::ostringstream out;
    out << "# mrdcf " << kVersion << "\n";
    out << "# run: " << p.run << "\n";
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                  static_cast<unsigned long long>(p.scenario_hash));
    out << "# scenario_hash: " << hashbuf << "\n";
    out << "# seed: " << p.seed << "\n";
    out << "# rng: mt19937_64/splitmix64\n";
    if (p.stamp_time) {
        const auto now = std::chrono::system_clock::now();
        const auto t = std::chrono::system_clock::to_time_t(now);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        out << "# timestamp: " << buf << "\n";
    }
    return out.str();
}

void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::string& header, const std::vector<std::string>& rows) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << provenance_block(prov);
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
}

std::string format_bps(double bps) {
    char buf[64];
    if (bps >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.4f Mbps", bps / 1e6);
    } else if (bps >= 1e3) {
        std::snprintf(buf, sizeof buf, "%.2f kbps", bps / 1e3);
    } else {
        std::snprintf(buf, sizeof buf, "%.1f bps", bps);
    }
    return buf;
}

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace mrdcf::tool
