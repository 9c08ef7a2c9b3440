#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace aista {

/// Raised on conditions that can only come from a logic error inside the
/// simulator (illegal state-machine input, scheduling in the past, ...).
class SimulatorError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Simulation time in integer nanoseconds since start.
class SimTime {
public:
    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}

    static constexpr SimTime ns(std::int64_t v) { return SimTime(v); }
    static constexpr SimTime us(std::int64_t v) { return SimTime(v * 1'000); }
    static constexpr SimTime ms(std::int64_t v) { return SimTime(v * 1'000'000); }
    static constexpr SimTime sec(std::int64_t v) { return SimTime(v * 1'000'000'000); }

    constexpr std::int64_t count() const { return ns_; }
    constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }
    constexpr double millis() const { return static_cast<double>(ns_) * 1e-6; }
    /// Rounded up to whole microseconds.
    constexpr std::int64_t ceil_us() const { return (ns_ + 999) / 1'000; }

    constexpr SimTime operator+(SimTime o) const { return SimTime(ns_ + o.ns_); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(ns_ - o.ns_); }
    constexpr SimTime operator*(std::int64_t k) const { return SimTime(ns_ * k); }
    constexpr SimTime& operator+=(SimTime o) { ns_ += o.ns_; return *this; }
    constexpr auto operator<=>(const SimTime&) const = default;

private:
    std::int64_t ns_ = 0;
};

enum class EventKind : std::uint8_t {
    FrameStart,
    FrameEnd,
    BackoffSlot,
    TimerExpiry,
    EpochBoundary,
    TrafficArrival,
    CarrierSense,
};

const char* to_string(EventKind k);

struct EventHandle {
    std::uint64_t id = 0;
    bool valid() const { return id != 0; }
};

struct EventLogEntry {
    SimTime time;
    std::uint64_t sequence;
    EventKind kind;
    bool operator==(const EventLogEntry&) const = default;
};

/// Single-threaded discrete-event scheduler. Events at equal time fire in
/// insertion order.
class Scheduler {
public:
    using Callback = std::function<void()>;

    SimTime now() const { return now_; }

    EventHandle schedule(SimTime at, EventKind kind, Callback fn);
    EventHandle schedule_in(SimTime delay, EventKind kind, Callback fn) {
        return schedule(now_ + delay, kind, std::move(fn));
    }

    /// True if the event was pending and is now inert.
    bool cancel(EventHandle h);
    bool pending(EventHandle h) const { return callbacks_.contains(h.id); }

    /// Processes every event with fire time <= t (including ones scheduled
    /// along the way) and leaves the clock at t. Returns the number processed.
    std::size_t run_until(SimTime t);

    std::size_t pending_count() const { return callbacks_.size(); }

    void enable_log(bool on) { log_enabled_ = on; }
    const std::vector<EventLogEntry>& log() const { return log_; }

private:
    struct Entry {
        SimTime time;
        std::uint64_t sequence;
        std::uint64_t id;
        bool operator>(const Entry& o) const {
            if (time != o.time) return time > o.time;
            return sequence > o.sequence;
        }
    };
    struct Pending {
        EventKind kind;
        Callback fn;
    };

    SimTime now_{};
    std::uint64_t next_sequence_ = 0;
    std::uint64_t next_id_ = 1;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
    std::unordered_map<std::uint64_t, Pending> callbacks_;
    bool log_enabled_ = false;
    std::vector<EventLogEntry> log_;
};

/// Seeded random stream. The engine is std::mt19937_64 (bit-exact across
/// platforms); distributions are implemented here because the standard
/// library ones are implementation-defined.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream ids. Node streams are keyed by node index so that adding a node
/// leaves the draws of existing nodes untouched.
namespace streams {
constexpr std::uint64_t mac(std::uint64_t node) { return (node << 8) | 0x01; }
constexpr std::uint64_t fading(std::uint64_t node) { return (node << 8) | 0x02; }
constexpr std::uint64_t traffic(std::uint64_t src, std::uint64_t dst) {
    return (1ULL << 48) | (src << 20) | (dst << 4);
}
constexpr std::uint64_t topology(std::uint64_t node) { return (node << 8) | 0x03; }
constexpr std::uint64_t agent = 0xA6E47ULL << 40;
}  // namespace streams

}  // namespace aista
