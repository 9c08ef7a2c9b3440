#include "aista/engine.hpp"

#include <cmath>
#include <limits>

namespace aista {

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::FrameStart: return "frame-start";
    case EventKind::FrameEnd: return "frame-end";
    case EventKind::BackoffSlot: return "backoff-slot";
    case EventKind::TimerExpiry: return "timer-expiry";
    case EventKind::EpochBoundary: return "epoch-boundary";
    case EventKind::TrafficArrival: return "traffic-arrival";
    case EventKind::CarrierSense: return "carrier-sense";
    }
    return "?";
}

EventHandle Scheduler::schedule(SimTime at, EventKind kind, Callback fn) {
    if (at < now_) {
        throw SimulatorError("event scheduled in the past: t=" + std::to_string(at.count()) +
                             " ns, clock=" + std::to_string(now_.count()) + " ns");
    }
    const std::uint64_t id = next_id_++;
    queue_.push(Entry{at, next_sequence_++, id});
    callbacks_.emplace(id, Pending{kind, std::move(fn)});
    return EventHandle{id};
}

bool Scheduler::cancel(EventHandle h) {
    // Entry stays in the heap and is skipped when popped.
    return callbacks_.erase(h.id) > 0;
}

std::size_t Scheduler::run_until(SimTime t) {
    if (t < now_) {
        throw SimulatorError("run_until target precedes the clock");
    }
    std::size_t processed = 0;
    while (!queue_.empty() && queue_.top().time <= t) {
        const Entry e = queue_.top();
        queue_.pop();
        auto it = callbacks_.find(e.id);
        if (it == callbacks_.end()) continue;
        Pending p = std::move(it->second);
        callbacks_.erase(it);
        now_ = e.time;
        if (log_enabled_) log_.push_back(EventLogEntry{e.time, e.sequence, p.kind});
        p.fn();
        ++processed;
    }
    now_ = t;
    return processed;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace aista
