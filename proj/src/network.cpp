#include "aista/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace aista {

const char* to_string(FrameLogRecord::Type t) {
    switch (t) {
    case FrameLogRecord::Type::TxStart: return "tx_start";
    case FrameLogRecord::Type::TxEnd: return "tx_end";
    case FrameLogRecord::Type::Rx: return "rx";
    }
    return "?";
}

const char* to_string(FrameOutcome o) {
    switch (o) {
    case FrameOutcome::Started: return "started";
    case FrameOutcome::Received: return "received";
    case FrameOutcome::Lost: return "lost";
    }
    return "?";
}

WifiNetwork::WifiNetwork(Scheduler& sched, std::vector<NodeSpec> nodes, RadioConfig radio,
                         MacTimings timings, Thresholds defaults, std::uint64_t seed)
    : sched_(sched), radio_(radio), timings_(timings), n0_w_(dbm_to_watt(radio.channel.n0_dbm)) {
    radio_.channel.validate();
    timings_.validate();
    nodes_.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes_.push_back(Node{std::move(nodes[i]), defaults, MacState::initial(timings_),
                              Rng(seed, streams::mac(i)), Rng(seed, streams::fading(i)), {}, {}, {}, {}, {}, {}, {}});
    }
    gain_.assign(nodes_.size(), std::vector<double>(nodes_.size(), 0.0));
    for (std::size_t a = 0; a < nodes_.size(); ++a) {
        for (std::size_t b = 0; b < nodes_.size(); ++b) {
            if (a == b) continue;
            const double d = std::max(distance(nodes_[a].spec.pos, nodes_[b].spec.pos), 1e-3);
            gain_[a][b] = path_gain(d, radio_.channel);
        }
    }
}

double WifiNetwork::incident_power(MacAddress n) const {
    double total = 0.0;
    for (const auto& tx : active_) total += tx.rx_w[n];
    return total;
}

void WifiNetwork::set_thresholds(MacAddress n, const Thresholds& t) {
    nodes_.at(n).thr = t;
    request_cca_check(n);
}

void WifiNetwork::set_backoff_source(MacAddress n, std::function<int(int)> fn) {
    nodes_.at(n).backoff_override = std::move(fn);
}

void WifiNetwork::enqueue(MacAddress src, Packet p) {
    MacEvent ev{MacEventKind::Enqueue};
    ev.packet = p;
    dispatch(src, ev);
}

bool WifiNetwork::view_idle(const Node& node, MacAddress n) const {
    return !node.tx_id && !carrier_sense_busy(incident_power(n), node.thr.cst_dbm) &&
           sched_.now() >= node.mac.nav_until;
}

void WifiNetwork::dispatch(MacAddress n, const MacEvent& ev) {
    Node& node = nodes_[n];
    ChannelView view{node.fsm_idle, sched_.now(), node.fsm_idle_since};
    MacContext ctx;
    ctx.self = n;
    ctx.timings = &timings_;
    if (node.backoff_override) {
        ctx.draw_backoff = node.backoff_override;
    } else {
        ctx.draw_backoff = [&node](int cw) { return next_backoff(cw, node.mac_rng); };
    }
    execute(n, mac_transition(node.mac, ev, view, ctx));
}

void WifiNetwork::execute(MacAddress n, std::vector<MacAction> actions) {
    using namespace mac_action;
    for (auto& action : actions) {
        std::visit(
            [&](auto& a) {
                using A = std::decay_t<decltype(a)>;
                Node& node = nodes_[n];
                if constexpr (std::is_same_v<A, StartTimer>) {
                    sched_.cancel(node.timer);
                    const MacEventKind fires = a.fires;
                    const EventKind kind =
                        fires == MacEventKind::SlotElapsed ? EventKind::BackoffSlot : EventKind::TimerExpiry;
                    node.timer = sched_.schedule_in(a.delay, kind, [this, n, fires] {
                        nodes_[n].timer = {};
                        dispatch(n, MacEvent{fires});
                    });
                } else if constexpr (std::is_same_v<A, CancelTimer>) {
                    sched_.cancel(node.timer);
                    node.timer = {};
                } else if constexpr (std::is_same_v<A, Transmit>) {
                    if (a.frame.kind == FrameKind::Rts && sched_.now() < node.mac.nav_until) {
                        throw SimulatorError("node " + node.spec.name + " contended while its NAV was set");
                    }
                    start_tx(n, a.frame, false);
                } else if constexpr (std::is_same_v<A, Respond>) {
                    sched_.cancel(node.response_timer);
                    const Frame f = a.frame;
                    node.response_timer = sched_.schedule_in(a.delay, EventKind::TimerExpiry, [this, n, f] {
                        nodes_[n].response_timer = {};
                        // Half-duplex: a node already on air cannot answer.
                        if (!nodes_[n].tx_id) start_tx(n, f, true);
                    });
                } else if constexpr (std::is_same_v<A, Delivered>) {
                    if (hooks_.packet_delivered) hooks_.packet_delivered(n, a.packet);
                } else if constexpr (std::is_same_v<A, Dropped>) {
                    if (hooks_.packet_dropped) hooks_.packet_dropped(n, a.packet, a.reason);
                } else if constexpr (std::is_same_v<A, DataReceived>) {
                    if (delivered_ids_.insert(a.frame.packet_id).second && hooks_.data_received) {
                        hooks_.data_received(n, a.frame);
                    }
                }
            },
            action);
    }
}

void WifiNetwork::start_tx(MacAddress n, const Frame& f, bool response) {
    Node& src = nodes_[n];
    if (src.tx_id) throw SimulatorError("node " + src.spec.name + " started a second concurrent frame");
    src.lock.reset();

    ActiveTx tx{next_tx_id_++, n, f, response, std::vector<double>(nodes_.size(), 0.0)};
    const double p_tx_w = dbm_to_watt(src.thr.tx_power_dbm);
    const auto& ch = radio_.channel;
    for (MacAddress r = 0; r < nodes_.size(); ++r) {
        if (r == n) continue;
        Node& rx = nodes_[r];
        double fading = ch.fading ? sample_fading(ch.m_shape, rx.fading_rng) : 1.0;
        fading *= sample_shadowing(ch.shadowing_sigma_db, rx.fading_rng);
        tx.rx_w[r] = p_tx_w * gain_[n][r] * fading;
    }

    for (MacAddress r = 0; r < nodes_.size(); ++r) {
        if (r == n) continue;
        Node& rx = nodes_[r];
        const double other = incident_power(r);
        const double p = tx.rx_w[r];
        if (rx.lock) {
            rx.lock->max_interference_w = std::max(rx.lock->max_interference_w, other + p - rx.lock->p_w);
        } else if (!rx.tx_id &&
                   decode_gate(p, other, n0_w_, rx.thr.rst_dbm, radio_.reception, radio_.capture_sinr_db)) {
            rx.lock = Lock{tx.id, p, other};
        }
    }

    const std::uint64_t id = tx.id;
    active_.push_back(std::move(tx));
    src.tx_id = id;
    if (log_enabled_) log_.push_back(FrameLogRecord{sched_.now(), FrameLogRecord::Type::TxStart, f, n, FrameOutcome::Started});

    sched_.schedule_in(f.airtime, EventKind::FrameEnd, [this, id] { end_tx(id); });

    // The transmitter's own contention freezes at once; everyone else senses
    // the new energy through a carrier-sense check at this instant.
    evaluate_view(n);
    for (MacAddress r = 0; r < nodes_.size(); ++r) {
        if (r != n) request_cca_check(r);
    }
}

void WifiNetwork::end_tx(std::uint64_t id) {
    auto it = std::find_if(active_.begin(), active_.end(), [id](const ActiveTx& t) { return t.id == id; });
    if (it == active_.end()) throw SimulatorError("frame end for unknown transmission");
    const ActiveTx tx = std::move(*it);
    active_.erase(it);
    nodes_[tx.src].tx_id.reset();

    std::vector<std::pair<MacAddress, double>> decoded;
    for (MacAddress r = 0; r < nodes_.size(); ++r) {
        Node& rx = nodes_[r];
        if (!rx.lock || rx.lock->tx_id != id) continue;
        const Lock lock = *rx.lock;
        rx.lock.reset();
        if (decode_gate(lock.p_w, lock.max_interference_w, n0_w_, rx.thr.rst_dbm, radio_.reception,
                        radio_.capture_sinr_db)) {
            decoded.emplace_back(r, lock.p_w);
        }
    }
    const bool ok = std::any_of(decoded.begin(), decoded.end(),
                                [&](const auto& d) { return d.first == tx.frame.dst; });
    if (log_enabled_) {
        log_.push_back(FrameLogRecord{sched_.now(), FrameLogRecord::Type::TxEnd, tx.frame, tx.src,
                                      ok ? FrameOutcome::Received : FrameOutcome::Lost});
    }

    if (!tx.response) dispatch(tx.src, MacEvent{MacEventKind::TxEnd});
    for (const auto& [r, p] : decoded) handle_decoded(r, tx.frame, p);

    for (MacAddress r = 0; r < nodes_.size(); ++r) request_cca_check(r);
}

void WifiNetwork::handle_decoded(MacAddress r, const Frame& f, double p_w) {
    if (hooks_.frame_decoded) hooks_.frame_decoded(r, f, p_w);
    if (log_enabled_ && log_observers_.contains(r)) {
        log_.push_back(FrameLogRecord{sched_.now(), FrameLogRecord::Type::Rx, f, r, FrameOutcome::Received});
    }
    if (f.dst == r) {
        MacEvent ev{MacEventKind::RxFrame};
        ev.frame = f;
        dispatch(r, ev);
        return;
    }
    Node& node = nodes_[r];
    const SimTime before = node.mac.nav_until;
    nav_update(node.mac, f, r, sched_.now());
    if (node.mac.nav_until > before) {
        sched_.cancel(node.nav_timer);
        node.nav_timer = sched_.schedule(node.mac.nav_until, EventKind::TimerExpiry, [this, r] {
            nodes_[r].nav_timer = {};
            request_cca_check(r);
        });
        sched_.cancel(node.cca_check);
        node.cca_check = {};
        evaluate_view(r);
    }
}

void WifiNetwork::request_cca_check(MacAddress n) {
    Node& node = nodes_[n];
    if (sched_.pending(node.cca_check)) return;
    node.cca_check = sched_.schedule_in(SimTime{}, EventKind::CarrierSense, [this, n] {
        nodes_[n].cca_check = {};
        evaluate_view(n);
    });
}

void WifiNetwork::evaluate_view(MacAddress n) {
    Node& node = nodes_[n];
    const bool idle = view_idle(node, n);
    const bool nav = sched_.now() < node.mac.nav_until;
    if (idle == node.fsm_idle && (idle || nav == node.fsm_nav)) return;
    node.fsm_idle = idle;
    node.fsm_nav = nav;
    if (idle) {
        node.fsm_idle_since = sched_.now();
        dispatch(n, MacEvent{MacEventKind::MediumIdle});
    } else {
        dispatch(n, MacEvent{MacEventKind::MediumBusy});
    }
}

}  // namespace aista
