#ifndef MRDCF_SIM_HPP
#define MRDCF_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mrdcf/scenario.hpp"

namespace mrdcf {

class sim_error : public std::runtime_error {
public:
    explicit sim_error(const std::string& what) : std::runtime_error(what) {}
};

struct SimConfig {
    Scenario scenario;
    double duration = 60.0;     // simulated seconds
    double warmup = 1.0;        // excluded from statistics
    std::uint64_t seed = 1;
    int replications = 1;
};

/// Post-warmup virtual-slot census of one run.
struct SlotCounts {
    std::uint64_t idle = 0;
    std::uint64_t success = 0;
    std::uint64_t error = 0;
    std::uint64_t collision = 0;

    std::uint64_t total() const { return idle + success + error + collision; }
};

struct StationStats {
    // post-warmup measurements
    double throughput_bps = 0.0;
    std::uint64_t delivered_frames = 0;
    std::uint64_t attempts = 0;
    std::uint64_t collisions = 0;
    std::uint64_t channel_errors = 0;
    std::uint64_t idle_slots = 0;      // slots the station had no frame in service
    // whole-run packet accounting (conservation check)
    std::uint64_t generated = 0;
    std::uint64_t delivered_total = 0;
    std::uint64_t dropped_queue = 0;
    std::uint64_t in_service_at_end = 0;
    // whole-run backoff instrumentation, indexed by stage
    std::vector<std::uint64_t> stage_draws;
    std::vector<int> stage_max_counter;

    double collision_fraction() const {
        return attempts ? static_cast<double>(collisions) / static_cast<double>(attempts) : 0.0;
    }
    double error_fraction() const {
        return attempts ? static_cast<double>(channel_errors) / static_cast<double>(attempts)
                        : 0.0;
    }
};

struct SimReport {
    std::vector<StationStats> stations;
    SlotCounts slots;
    std::uint64_t measured_slots = 0;  // independently counted, equals slots.total()
    double aggregate_bps = 0.0;
    double measured_seconds = 0.0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;  // recorded for reproducibility
};

/// Replicated runs with per-station mean and standard error of throughput.
struct ReplicatedReport {
    std::vector<SimReport> runs;          // ordered by replication index
    std::vector<double> mean_bps;         // per station
    std::vector<double> stderr_bps;       // empty when replications == 1
    double mean_aggregate_bps = 0.0;
    double stderr_aggregate_bps = 0.0;
};

/// Slot-synchronous CSMA/CA run: idle slots decrement pending backoff
/// counters, a lone transmitter occupies T_S (or T_E on a channel error), and
/// simultaneous transmitters collide for the slowest collider's class
/// duration, doubling windows up to stage m. Stations hold one packet: the
/// buffer frees during the station's own transmission, so the first arrival
/// within a successful transmission slot is served next; all other arrivals
/// while a frame is held are dropped and counted. Deterministic for a seed.
SimReport run_sim(const SimConfig& cfg);

/// Runs cfg.replications independent simulations (seeds split from the base
/// seed with a 64-bit mix), in parallel, and aggregates deterministically in
/// replication order.
ReplicatedReport replicate(const SimConfig& cfg);

}  // namespace mrdcf

#endif
