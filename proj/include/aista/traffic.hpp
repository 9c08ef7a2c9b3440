#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aista/dcf.hpp"
#include "aista/engine.hpp"
#include "aista/metrics.hpp"

namespace aista {

/// Periodic bursts (one per video/game frame) of uniformly jittered size,
/// fragmented at the MTU.
struct BurstModel {
    SimTime frame_interval = SimTime::us(16'667);
    std::uint32_t burst_bytes_mean = 8000;
    std::uint32_t burst_bytes_jitter = 0;
    std::uint32_t packet_mtu = 1500;
    std::optional<SimTime> start_offset;  ///< random phase in [0, interval) when empty

    void validate() const;
    bool operator==(const BurstModel&) const = default;
};

struct Burst {
    SimTime fire_time{};               ///< when the following burst is due
    std::vector<std::uint32_t> sizes;  ///< packets emitted now
};

std::vector<std::uint32_t> fragment(std::uint32_t bytes, std::uint32_t mtu);

Burst next_burst(const BurstModel& model, Rng& rng, SimTime now);

struct FlowAssignment {
    MacAddress src = 0;
    MacAddress dst = 0;
    BurstModel model{};
    FlowDirection direction = FlowDirection::Downlink;
    bool tracked = false;  ///< counted in the AI-STA QoS ledger
};

struct TraceEntry {
    SimTime time{};
    std::uint32_t bytes = 0;
    FlowDirection direction = FlowDirection::Uplink;
};

/// Reads `time_ms,bytes,direction` rows (header optional).
std::vector<TraceEntry> load_trace_csv(const std::string& path);

/// Drives every flow on the scheduler and hands packets to `sink`.
class TrafficGenerator {
public:
    using Sink = std::function<void(const FlowAssignment&, std::uint32_t bytes)>;

    TrafficGenerator(Scheduler& sched, std::uint64_t seed, Sink sink);

    void add_flow(const FlowAssignment& flow);
    /// Replays a trace on the given uplink and downlink flows instead of a burst model.
    void add_trace(const std::vector<TraceEntry>& trace, const FlowAssignment& uplink,
                   const FlowAssignment& downlink);

    std::size_t burst_count() const { return bursts_; }

private:
    struct Source {
        FlowAssignment flow;
        Rng rng;
    };
    void fire(std::size_t idx);

    Scheduler& sched_;
    std::uint64_t seed_;
    Sink sink_;
    std::vector<Source> sources_;
    std::size_t bursts_ = 0;
};

}  // namespace aista
