#ifndef MRDCF_TOOLS_REPRODUCE_HPP
#define MRDCF_TOOLS_REPRODUCE_HPP

#include <cstdint>
#include <filesystem>
#include <string>

namespace mrdcf::tool {

struct ReproduceOptions {
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    double duration = 60.0;   // simulated seconds per run
    int replications = 10;
    int sweep_points = 24;    // fig2 resolution (log-spaced)
    double fig2_duration = 30.0;
    int fig2_replications = 4;
};

/// Renders one of the built-in study targets (fig1A, fig1B, fig2, table1)
/// into plot-ready CSV under out_dir. Returns the written file path.
/// Throws std::invalid_argument for an unknown target.
std::filesystem::path reproduce_target(const std::string& target,
                                       const ReproduceOptions& opts);

}  // namespace mrdcf::tool

#endif
