#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aista/engine.hpp"

namespace aista {

using MacAddress = std::uint32_t;

enum class FrameKind : std::uint8_t { Rts, Cts, Data, Ack };
const char* to_string(FrameKind k);

/// Bytes on air besides the payload (MAC header + FCS, LLC for data).
namespace header_bytes {
constexpr std::uint32_t rts = 20;
constexpr std::uint32_t cts = 14;
constexpr std::uint32_t ack = 14;
constexpr std::uint32_t data = 34;
}  // namespace header_bytes

struct Rate {
    std::uint32_t kbps = 24'000;
    static Rate mbps(double v) { return Rate{static_cast<std::uint32_t>(v * 1000.0 + 0.5)}; }
    bool operator==(const Rate&) const = default;
};

struct Frame {
    FrameKind kind = FrameKind::Rts;
    MacAddress src = 0;
    MacAddress dst = 0;
    std::int64_t duration_us = 0;  ///< NAV value carried in the header
    std::uint32_t payload_bytes = 0;
    SimTime airtime{};
    std::uint64_t exchange = 0;    ///< (initiator << 32) | per-initiator sequence
    std::uint64_t packet_id = 0;   ///< DATA only

    bool is_control() const { return kind != FrameKind::Data; }
};

struct MacTimings {
    SimTime slot = SimTime::us(9);
    SimTime sifs = SimTime::us(16);
    SimTime difs = SimTime::us(34);
    SimTime preamble = SimTime::us(20);
    SimTime cts_timeout{};  ///< zero means derived: SIFS + CTS airtime + slot
    SimTime ack_timeout{};  ///< zero means derived: SIFS + ACK airtime + slot
    int cw_min = 15;
    int cw_max = 1023;
    int retry_limit = 7;
    std::uint32_t rts_threshold_bytes = 0;
    Rate control_rate{24'000};
    Rate data_rate{24'000};
    std::size_t queue_capacity = 1000;

    void validate() const;
    SimTime effective_cts_timeout() const;
    SimTime effective_ack_timeout() const;
    bool operator==(const MacTimings&) const = default;
};

/// preamble + ceil(8 * bytes / rate), exact in integer nanoseconds.
SimTime frame_airtime(std::uint32_t bytes_on_air, Rate rate, SimTime preamble);

SimTime rts_airtime(const MacTimings& t);
SimTime cts_airtime(const MacTimings& t);
SimTime ack_airtime(const MacTimings& t);
SimTime data_airtime(std::uint32_t payload_bytes, const MacTimings& t);

/// RTS + SIFS + CTS + SIFS + DATA + SIFS + ACK.
SimTime exchange_duration(std::uint32_t payload_bytes, const MacTimings& t);

/// NAV field of an RTS: the remainder of the exchange after the RTS, in whole microseconds.
std::int64_t rts_duration_us(std::uint32_t payload_bytes, const MacTimings& t);
/// NAV field of the CTS answering an RTS (standard chaining).
std::int64_t cts_duration_us(std::int64_t rts_duration, const MacTimings& t);
std::int64_t data_duration_us(const MacTimings& t);

struct Packet {
    std::uint64_t id = 0;
    MacAddress dst = 0;
    std::uint32_t bytes = 0;
    SimTime created{};
};

enum class MacPhase : std::uint8_t {
    Idle, DifsWait, Backoff, TxRts, AwaitCts, TxData, AwaitAck, NavDefer, Rx,
};
const char* to_string(MacPhase p);

struct MacState {
    MacPhase phase = MacPhase::Idle;
    int cw = 15;
    std::optional<int> backoff_slots;  ///< frozen remainder, empty when no draw is pending
    int retry_count = 0;
    SimTime nav_until{};
    std::deque<Packet> queue;
    std::uint32_t exchange_seq = 0;

    static MacState initial(const MacTimings& t) {
        MacState s;
        s.cw = t.cw_min;
        return s;
    }
    bool has_work() const { return !queue.empty(); }
};

enum class MacEventKind : std::uint8_t {
    Enqueue,
    MediumBusy,
    MediumIdle,
    DifsElapsed,
    SlotElapsed,
    SifsElapsed,
    Timeout,
    TxEnd,
    RxFrame,  ///< a decoded frame addressed to this node
};
const char* to_string(MacEventKind k);

struct MacEvent {
    MacEventKind kind;
    Packet packet{};  ///< Enqueue
    Frame frame{};    ///< RxFrame
};

/// What the node currently perceives: physical carrier sense, NAV and its own
/// transmitter folded into one idle flag.
struct ChannelView {
    bool idle = true;
    SimTime now{};
    SimTime idle_since{};
};

namespace mac_action {
struct StartTimer {
    MacEventKind fires;
    SimTime delay;
};
struct CancelTimer {};
struct Transmit {
    Frame frame;
};
/// CTS or ACK sent SIFS after the triggering frame, outside the contention state machine.
struct Respond {
    Frame frame;
    SimTime delay;
};
struct Delivered {
    Packet packet;
};
enum class DropReason : std::uint8_t { RetryLimit, QueueFull };
struct Dropped {
    Packet packet;
    DropReason reason;
};
struct DataReceived {
    Frame frame;
};
}  // namespace mac_action

using MacAction = std::variant<mac_action::StartTimer, mac_action::CancelTimer, mac_action::Transmit,
                               mac_action::Respond, mac_action::Delivered, mac_action::Dropped,
                               mac_action::DataReceived>;

/// Uniform draw in [0, cw].
int next_backoff(int cw, Rng& rng);

struct CollisionOutcome {
    bool dropped = false;
};
/// Binary exponential backoff after a failed attempt; drops the head-of-line
/// frame when the retry limit is exceeded.
CollisionOutcome on_collision(MacState& s, const MacTimings& t);

/// Sets the NAV from an overheard frame; frames addressed to (or sent by)
/// `self` are ignored.
void nav_update(MacState& s, const Frame& f, MacAddress self, SimTime now);

struct MacContext {
    MacAddress self = 0;
    const MacTimings* timings = nullptr;
    std::function<int(int cw)> draw_backoff;
};

/// The DCF state machine. Mutates `s` and returns the side effects the
/// network runtime must carry out. Illegal (phase, event) pairs throw
/// SimulatorError.
std::vector<MacAction> mac_transition(MacState& s, const MacEvent& ev, const ChannelView& view,
                                      MacContext& ctx);

}  // namespace aista
