#include "aista/dcf.hpp"

#include <algorithm>
#include <stdexcept>

namespace aista {

const char* to_string(FrameKind k) {
    switch (k) {
    case FrameKind::Rts: return "RTS";
    case FrameKind::Cts: return "CTS";
    case FrameKind::Data: return "DATA";
    case FrameKind::Ack: return "ACK";
    }
    return "?";
}

const char* to_string(MacPhase p) {
    switch (p) {
    case MacPhase::Idle: return "IDLE";
    case MacPhase::DifsWait: return "DIFS_WAIT";
    case MacPhase::Backoff: return "BACKOFF";
    case MacPhase::TxRts: return "TX_RTS";
    case MacPhase::AwaitCts: return "AWAIT_CTS";
    case MacPhase::TxData: return "TX_DATA";
    case MacPhase::AwaitAck: return "AWAIT_ACK";
    case MacPhase::NavDefer: return "NAV_DEFER";
    case MacPhase::Rx: return "RX";
    }
    return "?";
}

const char* to_string(MacEventKind k) {
    switch (k) {
    case MacEventKind::Enqueue: return "enqueue";
    case MacEventKind::MediumBusy: return "medium-busy";
    case MacEventKind::MediumIdle: return "medium-idle";
    case MacEventKind::DifsElapsed: return "difs-elapsed";
    case MacEventKind::SlotElapsed: return "slot-elapsed";
    case MacEventKind::SifsElapsed: return "sifs-elapsed";
    case MacEventKind::Timeout: return "timeout";
    case MacEventKind::TxEnd: return "tx-end";
    case MacEventKind::RxFrame: return "rx-frame";
    }
    return "?";
}

void MacTimings::validate() const {
    if (slot <= SimTime{} || sifs <= SimTime{}) throw std::invalid_argument("slot and sifs must be positive");
    if (difs != sifs + slot * 2) throw std::invalid_argument("difs must equal sifs + 2 * slot");
    if (cw_min < 1 || cw_max < cw_min) throw std::invalid_argument("need 1 <= cw_min <= cw_max");
    if (((cw_min + 1) & cw_min) != 0 || ((cw_max + 1) & cw_max) != 0) {
        throw std::invalid_argument("cw_min and cw_max must be of the form 2^k - 1");
    }
    if (retry_limit < 0) throw std::invalid_argument("retry_limit must be >= 0");
    if (control_rate.kbps == 0 || data_rate.kbps == 0) throw std::invalid_argument("rates must be positive");
    if (queue_capacity == 0) throw std::invalid_argument("queue_capacity must be positive");
    if (effective_cts_timeout() <= sifs + cts_airtime(*this)) {
        throw std::invalid_argument("cts timeout must exceed SIFS + CTS airtime");
    }
    if (effective_ack_timeout() <= sifs + ack_airtime(*this)) {
        throw std::invalid_argument("ack timeout must exceed SIFS + ACK airtime");
    }
}

SimTime MacTimings::effective_cts_timeout() const {
    return cts_timeout > SimTime{} ? cts_timeout : sifs + cts_airtime(*this) + slot;
}

SimTime MacTimings::effective_ack_timeout() const {
    return ack_timeout > SimTime{} ? ack_timeout : sifs + ack_airtime(*this) + slot;
}

SimTime frame_airtime(std::uint32_t bytes_on_air, Rate rate, SimTime preamble) {
    if (rate.kbps == 0) throw std::invalid_argument("frame_airtime: rate must be positive");
    // bits / (kbit/s) = ms; scale to ns and round up.
    const std::int64_t num = static_cast<std::int64_t>(bytes_on_air) * 8 * 1'000'000;
    const std::int64_t den = rate.kbps;
    return preamble + SimTime((num + den - 1) / den);
}

SimTime rts_airtime(const MacTimings& t) {
    return frame_airtime(header_bytes::rts, t.control_rate, t.preamble);
}
SimTime cts_airtime(const MacTimings& t) {
    return frame_airtime(header_bytes::cts, t.control_rate, t.preamble);
}
SimTime ack_airtime(const MacTimings& t) {
    return frame_airtime(header_bytes::ack, t.control_rate, t.preamble);
}
SimTime data_airtime(std::uint32_t payload_bytes, const MacTimings& t) {
    return frame_airtime(payload_bytes + header_bytes::data, t.data_rate, t.preamble);
}

SimTime exchange_duration(std::uint32_t payload_bytes, const MacTimings& t) {
    return rts_airtime(t) + cts_airtime(t) + data_airtime(payload_bytes, t) + ack_airtime(t) + t.sifs * 3;
}

std::int64_t rts_duration_us(std::uint32_t payload_bytes, const MacTimings& t) {
    return (exchange_duration(payload_bytes, t) - rts_airtime(t)).ceil_us();
}

std::int64_t cts_duration_us(std::int64_t rts_duration, const MacTimings& t) {
    return std::max<std::int64_t>(0, rts_duration - cts_airtime(t).ceil_us() - t.sifs.ceil_us());
}

std::int64_t data_duration_us(const MacTimings& t) {
    return (t.sifs + ack_airtime(t)).ceil_us();
}

int next_backoff(int cw, Rng& rng) {
    if (cw <= 0) return 0;
    return static_cast<int>(rng.uniform_int(0, cw));
}

CollisionOutcome on_collision(MacState& s, const MacTimings& t) {
    s.cw = std::min(2 * (s.cw + 1) - 1, t.cw_max);
    ++s.retry_count;
    if (s.retry_count > t.retry_limit) {
        s.cw = t.cw_min;
        s.retry_count = 0;
        if (!s.queue.empty()) s.queue.pop_front();
        return CollisionOutcome{true};
    }
    return CollisionOutcome{false};
}

void nav_update(MacState& s, const Frame& f, MacAddress self, SimTime now) {
    if (f.dst == self || f.src == self) return;
    s.nav_until = std::max(s.nav_until, now + SimTime::us(f.duration_us));
}

namespace {

using namespace mac_action;

std::uint64_t current_exchange(const MacState& s, MacAddress self) {
    return (static_cast<std::uint64_t>(self) << 32) | s.exchange_seq;
}

bool transmitting_or_waiting(MacPhase p) {
    return p == MacPhase::TxRts || p == MacPhase::AwaitCts || p == MacPhase::TxData ||
           p == MacPhase::AwaitAck;
}

[[noreturn]] void illegal(const MacState& s, const MacEvent& ev) {
    throw SimulatorError(std::string("illegal MAC input: ") + to_string(ev.kind) + " in phase " +
                         to_string(s.phase));
}

class Transition {
public:
    Transition(MacState& s, const ChannelView& view, MacContext& ctx)
        : s_(s), view_(view), ctx_(ctx), t_(*ctx.timings) {}

    std::vector<MacAction> take() { return std::move(out_); }

    MacPhase defer_phase() const {
        return view_.now < s_.nav_until ? MacPhase::NavDefer : MacPhase::Rx;
    }

    void start_contention(bool full_difs) {
        if (!s_.backoff_slots) s_.backoff_slots = ctx_.draw_backoff(s_.cw);
        if (!view_.idle) {
            s_.phase = defer_phase();
            return;
        }
        const SimTime elapsed = full_difs ? SimTime{} : view_.now - view_.idle_since;
        if (elapsed >= t_.difs) {
            enter_backoff();
        } else {
            s_.phase = MacPhase::DifsWait;
            out_.emplace_back(StartTimer{MacEventKind::DifsElapsed, t_.difs - elapsed});
        }
    }

    void enter_backoff() {
        s_.phase = MacPhase::Backoff;
        if (*s_.backoff_slots == 0) {
            transmit_head();
        } else {
            out_.emplace_back(StartTimer{MacEventKind::SlotElapsed, t_.slot});
        }
    }

    void transmit_head() {
        const Packet& p = s_.queue.front();
        s_.backoff_slots.reset();
        ++s_.exchange_seq;
        if (p.bytes > t_.rts_threshold_bytes) {
            Frame f;
            f.kind = FrameKind::Rts;
            f.src = ctx_.self;
            f.dst = p.dst;
            f.duration_us = rts_duration_us(p.bytes, t_);
            f.airtime = rts_airtime(t_);
            f.exchange = current_exchange(s_, ctx_.self);
            s_.phase = MacPhase::TxRts;
            out_.emplace_back(Transmit{f});
        } else {
            s_.phase = MacPhase::TxData;
            out_.emplace_back(Transmit{data_frame()});
        }
    }

    Frame data_frame() const {
        const Packet& p = s_.queue.front();
        Frame f;
        f.kind = FrameKind::Data;
        f.src = ctx_.self;
        f.dst = p.dst;
        f.duration_us = data_duration_us(t_);
        f.payload_bytes = p.bytes;
        f.airtime = data_airtime(p.bytes, t_);
        f.exchange = current_exchange(s_, ctx_.self);
        f.packet_id = p.id;
        return f;
    }

    void after_attempt() {
        if (s_.has_work()) {
            s_.backoff_slots.reset();
            start_contention(true);
        } else {
            s_.backoff_slots.reset();
            s_.phase = MacPhase::Idle;
        }
    }

    void on_rx(const MacEvent& ev) {
        const Frame& f = ev.frame;
        if (f.dst != ctx_.self) throw SimulatorError("RxFrame delivered to the wrong node");
        switch (f.kind) {
        case FrameKind::Rts:
            if (view_.now >= s_.nav_until && !transmitting_or_waiting(s_.phase)) {
                Frame cts;
                cts.kind = FrameKind::Cts;
                cts.src = ctx_.self;
                cts.dst = f.src;
                cts.duration_us = cts_duration_us(f.duration_us, t_);
                cts.airtime = cts_airtime(t_);
                cts.exchange = f.exchange;
                out_.emplace_back(Respond{cts, t_.sifs});
            }
            break;
        case FrameKind::Cts:
            if (s_.phase == MacPhase::AwaitCts && f.exchange == current_exchange(s_, ctx_.self)) {
                out_.emplace_back(CancelTimer{});
                s_.phase = MacPhase::TxData;
                out_.emplace_back(StartTimer{MacEventKind::SifsElapsed, t_.sifs});
            }
            break;
        case FrameKind::Data: {
            Frame ack;
            ack.kind = FrameKind::Ack;
            ack.src = ctx_.self;
            ack.dst = f.src;
            ack.duration_us = 0;
            ack.airtime = ack_airtime(t_);
            ack.exchange = f.exchange;
            out_.emplace_back(Respond{ack, t_.sifs});
            out_.emplace_back(DataReceived{f});
            break;
        }
        case FrameKind::Ack:
            if (s_.phase == MacPhase::AwaitAck && f.exchange == current_exchange(s_, ctx_.self)) {
                out_.emplace_back(CancelTimer{});
                out_.emplace_back(Delivered{s_.queue.front()});
                s_.queue.pop_front();
                s_.cw = t_.cw_min;
                s_.retry_count = 0;
                after_attempt();
            }
            break;
        }
    }

    void run(const MacEvent& ev) {
        switch (ev.kind) {
        case MacEventKind::Enqueue:
            if (s_.queue.size() >= t_.queue_capacity) {
                out_.emplace_back(Dropped{ev.packet, DropReason::QueueFull});
                return;
            }
            s_.queue.push_back(ev.packet);
            if (s_.phase == MacPhase::Idle) start_contention(false);
            return;

        case MacEventKind::MediumBusy:
            switch (s_.phase) {
            case MacPhase::DifsWait:
            case MacPhase::Backoff:
                out_.emplace_back(CancelTimer{});
                s_.phase = defer_phase();
                return;
            case MacPhase::Rx:
            case MacPhase::NavDefer:
                s_.phase = defer_phase();
                return;
            default:
                return;
            }

        case MacEventKind::MediumIdle:
            if (s_.phase == MacPhase::Rx || s_.phase == MacPhase::NavDefer) {
                if (s_.has_work()) {
                    start_contention(false);
                } else {
                    s_.phase = MacPhase::Idle;
                }
            }
            return;

        case MacEventKind::DifsElapsed:
            if (s_.phase != MacPhase::DifsWait) illegal(s_, ev);
            enter_backoff();
            return;

        case MacEventKind::SlotElapsed:
            if (s_.phase != MacPhase::Backoff || !s_.backoff_slots || *s_.backoff_slots <= 0) {
                illegal(s_, ev);
            }
            --*s_.backoff_slots;
            if (*s_.backoff_slots == 0) {
                transmit_head();
            } else {
                out_.emplace_back(StartTimer{MacEventKind::SlotElapsed, t_.slot});
            }
            return;

        case MacEventKind::SifsElapsed:
            if (s_.phase != MacPhase::TxData || s_.queue.empty()) illegal(s_, ev);
            out_.emplace_back(Transmit{data_frame()});
            return;

        case MacEventKind::TxEnd:
            if (s_.phase == MacPhase::TxRts) {
                s_.phase = MacPhase::AwaitCts;
                out_.emplace_back(StartTimer{MacEventKind::Timeout, t_.effective_cts_timeout()});
            } else if (s_.phase == MacPhase::TxData) {
                s_.phase = MacPhase::AwaitAck;
                out_.emplace_back(StartTimer{MacEventKind::Timeout, t_.effective_ack_timeout()});
            } else {
                illegal(s_, ev);
            }
            return;

        case MacEventKind::Timeout: {
            if (s_.phase != MacPhase::AwaitCts && s_.phase != MacPhase::AwaitAck) illegal(s_, ev);
            const Packet head = s_.queue.front();
            if (on_collision(s_, t_).dropped) {
                out_.emplace_back(Dropped{head, DropReason::RetryLimit});
            }
            after_attempt();
            return;
        }

        case MacEventKind::RxFrame:
            on_rx(ev);
            return;
        }
    }

private:
    MacState& s_;
    const ChannelView& view_;
    MacContext& ctx_;
    const MacTimings& t_;
    std::vector<MacAction> out_;
};

}  // namespace

std::vector<MacAction> mac_transition(MacState& s, const MacEvent& ev, const ChannelView& view,
                                      MacContext& ctx) {
    if (ctx.timings == nullptr || !ctx.draw_backoff) {
        throw SimulatorError("mac_transition: incomplete context");
    }
    Transition tr(s, view, ctx);
    tr.run(ev);
    return tr.take();
}

}  // namespace aista
