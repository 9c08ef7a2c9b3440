#include "aista/rlenv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aista {

namespace {

constexpr double lattice_tolerance_db = 1e-9;

std::vector<double> axis(const Range& r, int l) {
    if (r.max < r.min) throw std::invalid_argument("lattice bounds: max below min");
    if (r.max == r.min) return {r.min};
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(l) + 1);
    const double step = (r.max - r.min) / l;
    for (int i = 0; i <= l; ++i) v.push_back(i == l ? r.max : r.min + i * step);
    return v;
}

std::optional<std::size_t> axis_index(const std::vector<double>& ax, double v) {
    for (std::size_t i = 0; i < ax.size(); ++i) {
        if (std::abs(ax[i] - v) <= lattice_tolerance_db) return i;
    }
    return std::nullopt;
}

double clip10(double v) { return std::clamp(v, 0.0, 10.0); }

}  // namespace

ActionLattice::ActionLattice(const ThresholdBounds& bounds, int l) : l_(l) {
    if (l < 1) throw std::invalid_argument("lattice granularity must be >= 1");
    axes_ = {axis(bounds.cst, l), axis(bounds.rst, l), axis(bounds.tx_power, l)};
    points_.reserve(axes_[0].size() * axes_[1].size() * axes_[2].size());
    for (double c : axes_[0]) {
        for (double r : axes_[1]) {
            for (double p : axes_[2]) points_.push_back(ActionPoint{c, r, p});
        }
    }
}

std::optional<std::size_t> ActionLattice::index_of(const ActionPoint& a) const {
    const auto i = axis_index(axes_[0], a.cst_dbm);
    const auto j = axis_index(axes_[1], a.rst_dbm);
    const auto k = axis_index(axes_[2], a.power_dbm);
    if (!i || !j || !k) return std::nullopt;
    return (*i * axes_[1].size() + *j) * axes_[2].size() + *k;
}

std::vector<ActionPoint> action_lattice(const ThresholdBounds& bounds, int l) {
    return ActionLattice(bounds, l).points();
}

void apply_action(WifiNetwork& net, MacAddress node, const ActionPoint& a, const ActionLattice& lattice) {
    if (!net.spec(node).ai) throw std::invalid_argument("apply_action: node " + net.spec(node).name + " is a legacy device");
    const auto idx = lattice.index_of(a);
    if (!idx) throw std::invalid_argument("apply_action: point is not on the action lattice");
    net.set_thresholds(node, lattice.point(*idx).thresholds());
}

void QosTargets::validate() const {
    if (!(s_min_mbps > 0 && d_max_ms > 0 && j_max_ms > 0 && ploss_max > 0)) {
        throw std::invalid_argument("QoS targets must be positive");
    }
}

void RewardWeights::validate() const {
    if (!(w_s >= 0 && w_d >= 0 && w_j >= 0 && w_ploss >= 0)) {
        throw std::invalid_argument("reward weights must be non-negative");
    }
}

RewardBreakdown compute_reward(const QosSummary& s, const FairnessReport& f, const QosTargets& targets,
                               const RewardWeights& w) {
    RewardBreakdown r;
    r.zeta_s = std::max(0.0, targets.s_min_mbps - s.throughput_bps / 1e6);
    r.zeta_d = std::max(0.0, s.avg_delay_ms - targets.d_max_ms);
    r.zeta_j = std::max(0.0, s.jitter_ms - targets.j_max_ms);
    r.zeta_ploss = std::max(0.0, (s.loss_rate - targets.ploss_max) * 100.0);
    r.reward = f.f - (w.w_s * r.zeta_s + w.w_d * r.zeta_d + w.w_j * r.zeta_j + w.w_ploss * r.zeta_ploss);
    return r;
}

StateVec build_state(const QosSummary& s, const FairnessReport& f, const QosTargets& targets) {
    StateVec v;
    v.f = f.f;
    v.s_norm = clip10(s.throughput_bps / 1e6 / targets.s_min_mbps);
    v.d_norm = clip10(s.avg_delay_ms / targets.d_max_ms);
    v.j_norm = clip10(s.jitter_ms / targets.j_max_ms);
    v.ploss_norm = clip10(s.loss_rate / targets.ploss_max);
    return v;
}

MacAddress find_ai_sta(const std::vector<NodeSpec>& nodes) {
    std::optional<MacAddress> ai;
    for (MacAddress i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].ai) continue;
        if (ai) throw std::invalid_argument("more than one AI-STA declared");
        ai = i;
    }
    if (!ai) throw std::invalid_argument("no AI-STA declared");
    const NodeSpec& n = nodes[*ai];
    if (n.role != NodeRole::Sta || !n.ap) throw std::invalid_argument("the AI-STA must be an associated station");
    if (*n.ap >= nodes.size() || nodes[*n.ap].role != NodeRole::Ap) {
        throw std::invalid_argument("the AI-STA is associated with a node that is not an AP");
    }
    return *ai;
}

namespace {

std::vector<MacAddress> own_bss_stations(const std::vector<NodeSpec>& nodes, MacAddress ap) {
    std::vector<MacAddress> keys;
    for (MacAddress i = 0; i < nodes.size(); ++i) {
        if (nodes[i].role == NodeRole::Sta && nodes[i].ap == ap) keys.push_back(i);
    }
    return keys;
}

}  // namespace

AiStaEnv::AiStaEnv(SimulationConfig cfg)
    : cfg_(std::move(cfg)),
      lattice_(cfg_.bounds, cfg_.lattice_l),
      ai_(find_ai_sta(cfg_.nodes)),
      ai_ap_(*cfg_.nodes[ai_].ap),
      keys_(own_bss_stations(cfg_.nodes, ai_ap_)),
      table_(ai_ap_, keys_, SimTime{}) {
    cfg_.targets.validate();
    cfg_.weights.validate();
    if (cfg_.epoch_len <= SimTime{}) throw std::invalid_argument("epoch length must be positive");
    if (!cfg_.bounds.contains(cfg_.ai_initial)) throw std::invalid_argument("initial AI-STA thresholds out of bounds");

    net_ = std::make_unique<WifiNetwork>(sched_, cfg_.nodes, cfg_.radio, cfg_.timings, cfg_.legacy_thresholds,
                                         cfg_.seed);
    net_->set_thresholds(ai_, cfg_.ai_initial);
    if (cfg_.record_frames) {
        net_->enable_frame_log(true);
        net_->log_observer(ai_);
    }

    const std::int64_t cts_us = cts_airtime(cfg_.timings).ceil_us();
    const std::int64_t sifs_us = cfg_.timings.sifs.ceil_us();
    WifiNetwork::Hooks hooks;
    hooks.frame_decoded = [this, cts_us, sifs_us](MacAddress observer, const Frame& f, double rx_w) {
        if (observer != ai_) return;
        if (f.kind == FrameKind::Rts || f.kind == FrameKind::Cts) {
            process_control_frame(table_, f, cts_us, sifs_us);
        } else if (f.src == ai_ap_) {
            rssi_.push_back(watt_to_dbm(rx_w));
        }
    };
    hooks.data_received = [this](MacAddress, const Frame& f) {
        if (ledger_.tracked(f.packet_id)) ledger_.record_receive(f.packet_id, sched_.now());
    };
    hooks.packet_dropped = [this](MacAddress, const Packet& p, mac_action::DropReason) {
        if (ledger_.tracked(p.id)) ledger_.record_drop(p.id, sched_.now());
    };
    net_->set_hooks(hooks);

    traffic_ = std::make_unique<TrafficGenerator>(sched_, cfg_.seed, [this](const FlowAssignment& flow, std::uint32_t bytes) {
        const std::uint64_t id = next_packet_id_++;
        if (flow.tracked) ledger_.record_send(id, sched_.now(), bytes, flow.direction);
        net_->enqueue(flow.src, Packet{id, flow.dst, bytes, sched_.now()});
    });
    std::optional<FlowAssignment> up, down;
    for (const FlowAssignment& f : cfg_.flows) {
        if (f.src >= cfg_.nodes.size() || f.dst >= cfg_.nodes.size() || f.src == f.dst) {
            throw std::invalid_argument("flow endpoints must be distinct existing nodes");
        }
        if (f.tracked && !cfg_.trace.empty()) {
            (f.direction == FlowDirection::Uplink ? up : down) = f;
            continue;
        }
        traffic_->add_flow(f);
    }
    if (!cfg_.trace.empty()) {
        if (!up) up = FlowAssignment{ai_, ai_ap_, BurstModel{}, FlowDirection::Uplink, true};
        if (!down) down = FlowAssignment{ai_ap_, ai_, BurstModel{}, FlowDirection::Downlink, true};
        traffic_->add_trace(cfg_.trace, *up, *down);
    }
}

EpochResult AiStaEnv::step(std::size_t action) {
    const ActionPoint& a = lattice_.point(action);
    apply_action(*net_, ai_, a, lattice_);
    return advance(a.thresholds(), action);
}

EpochResult AiStaEnv::step_thresholds(const Thresholds& t) {
    if (!cfg_.bounds.contains(t)) throw std::invalid_argument("step_thresholds: thresholds out of bounds");
    net_->set_thresholds(ai_, t);
    return advance(t, std::nullopt);
}

EpochResult AiStaEnv::advance(const Thresholds& t, std::optional<std::size_t> action) {
    EpochResult r;
    r.epoch = epochs_done_;
    r.start = cfg_.epoch_len * static_cast<std::int64_t>(epochs_done_);
    r.end = r.start + cfg_.epoch_len;
    r.applied = t;
    r.action = action;

    sched_.run_until(r.end);

    r.fairness = jain_index(table_);
    r.durations = table_.entries();
    r.provisional = window_summary(ledger_.records(), r.start, r.end, r.end, PendingPolicy::Exclude);
    r.state = build_state(r.provisional, r.fairness, cfg_.targets);
    r.reward = compute_reward(r.provisional, r.fairness, cfg_.targets, cfg_.weights);
    r.ap_rssi_dbm = std::move(rssi_);
    rssi_.clear();
    reset_window(table_, r.end);
    ++epochs_done_;
    return r;
}

void AiStaEnv::drain() {
    sched_.run_until(cfg_.epoch_len * static_cast<std::int64_t>(epochs_done_ + 1));
}

QosSummary AiStaEnv::finalized_summary(std::size_t epoch) const {
    if (epoch >= epochs_done_) throw std::out_of_range("finalized_summary: epoch not yet simulated");
    const SimTime start = cfg_.epoch_len * static_cast<std::int64_t>(epoch);
    const SimTime end = start + cfg_.epoch_len;
    const SimTime as_of = std::min(end + cfg_.epoch_len, sched_.now());
    return window_summary(ledger_.records(), start, end, as_of, PendingPolicy::CountLost);
}

}  // namespace aista
