#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "aista/engine.hpp"

namespace aista {

enum class FlowDirection : std::uint8_t { Uplink, Downlink };
const char* to_string(FlowDirection d);

struct PacketRecord {
    std::uint64_t id = 0;
    SimTime send_time{};
    std::optional<SimTime> recv_time;
    std::optional<SimTime> drop_time;
    std::uint32_t bytes = 0;
    FlowDirection flow = FlowDirection::Uplink;
};

struct QosSummary {
    double throughput_bps = 0.0;
    double avg_delay_ms = 0.0;
    double jitter_ms = 0.0;
    double loss_rate = 0.0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    SimTime start{};
    SimTime end{};
};

/// Send/receive/drop accounting for the tracked flows.
class PacketLedger {
public:
    void record_send(std::uint64_t id, SimTime t, std::uint32_t bytes, FlowDirection flow);
    /// Throws on a receive without a send or on a second receive.
    void record_receive(std::uint64_t id, SimTime t);
    /// Ignored when the packet already arrived (lost ACK followed by a retry drop).
    void record_drop(std::uint64_t id, SimTime t);

    bool tracked(std::uint64_t id) const { return index_.contains(id); }
    const std::vector<PacketRecord>& records() const { return records_; }

private:
    std::vector<PacketRecord> records_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// How packets whose fate is still open at `as_of` are treated.
enum class PendingPolicy : std::uint8_t {
    Exclude,    ///< left out of N (provisional view at window close)
    CountLost,  ///< counted as lost (finalized view)
};

/// QoS over packets sent in [start, end), judged as of `as_of`:
/// throughput = received payload bits / span, mean delay and mean absolute
/// delay difference over received packets in arrival order, loss = 1 - N_recv/N.
QosSummary window_summary(std::span<const PacketRecord> records, SimTime start, SimTime end, SimTime as_of,
                          PendingPolicy pending);

}  // namespace aista
