#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "aista/channel.hpp"
#include "aista/dcf.hpp"
#include "aista/engine.hpp"

namespace aista {

enum class NodeRole : std::uint8_t { Ap, Sta };

struct NodeSpec {
    std::string name;
    NodeRole role = NodeRole::Sta;
    Position pos{};
    std::optional<MacAddress> ap;  ///< association, STAs only
    bool ai = false;
    bool operator==(const NodeSpec&) const = default;
};

struct RadioConfig {
    ChannelParams channel{};
    ReceptionModel reception = ReceptionModel::PowerThreshold;
    double capture_sinr_db = 10.0;
    bool operator==(const RadioConfig&) const = default;
};

enum class FrameOutcome : std::uint8_t { Started, Received, Lost };

/// One line of the frame trace: transmission start/end, plus decode events at
/// observer nodes.
struct FrameLogRecord {
    enum class Type : std::uint8_t { TxStart, TxEnd, Rx };
    SimTime time{};
    Type type = Type::TxStart;
    Frame frame{};
    MacAddress observer = 0;
    FrameOutcome outcome = FrameOutcome::Started;
};

const char* to_string(FrameLogRecord::Type t);
const char* to_string(FrameOutcome o);

/// All nodes of one simulation sharing a single medium. Owns the per-node DCF
/// state, carrier sense, reception locking and SINR-based decoding.
class WifiNetwork {
public:
    struct Hooks {
        std::function<void(MacAddress observer, const Frame&, double rx_power_w)> frame_decoded;
        std::function<void(MacAddress receiver, const Frame&)> data_received;
        std::function<void(MacAddress sender, const Packet&)> packet_delivered;
        std::function<void(MacAddress sender, const Packet&, mac_action::DropReason)> packet_dropped;
    };

    WifiNetwork(Scheduler& sched, std::vector<NodeSpec> nodes, RadioConfig radio, MacTimings timings,
                Thresholds defaults, std::uint64_t seed);

    std::size_t size() const { return nodes_.size(); }
    const NodeSpec& spec(MacAddress n) const { return nodes_.at(n).spec; }
    const MacState& mac_state(MacAddress n) const { return nodes_.at(n).mac; }
    const Thresholds& thresholds(MacAddress n) const { return nodes_.at(n).thr; }
    const MacTimings& timings() const { return timings_; }
    const RadioConfig& radio() const { return radio_; }
    bool transmitting(MacAddress n) const { return nodes_.at(n).tx_id.has_value(); }
    double incident_power(MacAddress n) const;

    void set_thresholds(MacAddress n, const Thresholds& t);
    void enqueue(MacAddress src, Packet p);
    void set_hooks(Hooks h) { hooks_ = std::move(h); }

    /// Replaces the backoff draw of one node (test hook).
    void set_backoff_source(MacAddress n, std::function<int(int cw)> fn);

    void enable_frame_log(bool on) { log_enabled_ = on; }
    /// Decode events at this node are written to the frame log.
    void log_observer(MacAddress n) { log_observers_.insert(n); }
    const std::vector<FrameLogRecord>& frame_log() const { return log_; }
    void clear_frame_log() { log_.clear(); }

private:
    struct Lock {
        std::uint64_t tx_id;
        double p_w;
        double max_interference_w;
    };
    struct Node {
        NodeSpec spec;
        Thresholds thr;
        MacState mac;
        Rng mac_rng;
        Rng fading_rng;
        std::function<int(int)> backoff_override;
        EventHandle timer;
        EventHandle response_timer;
        EventHandle nav_timer;
        EventHandle cca_check;
        std::optional<std::uint64_t> tx_id;
        std::optional<Lock> lock;
        bool fsm_idle = true;
        bool fsm_nav = false;
        SimTime fsm_idle_since{};
    };
    struct ActiveTx {
        std::uint64_t id;
        MacAddress src;
        Frame frame;
        bool response;
        std::vector<double> rx_w;
    };

    void dispatch(MacAddress n, const MacEvent& ev);
    void execute(MacAddress n, std::vector<MacAction> actions);
    void start_tx(MacAddress n, const Frame& f, bool response);
    void end_tx(std::uint64_t id);
    void handle_decoded(MacAddress r, const Frame& f, double p_w);
    void request_cca_check(MacAddress n);
    void evaluate_view(MacAddress n);
    bool view_idle(const Node& node, MacAddress n) const;

    Scheduler& sched_;
    RadioConfig radio_;
    MacTimings timings_;
    double n0_w_;
    std::vector<Node> nodes_;
    std::vector<std::vector<double>> gain_;  ///< path gain, [tx][rx]
    std::vector<ActiveTx> active_;
    std::uint64_t next_tx_id_ = 1;
    std::unordered_set<std::uint64_t> delivered_ids_;
    Hooks hooks_;
    bool log_enabled_ = false;
    std::unordered_set<MacAddress> log_observers_;
    std::vector<FrameLogRecord> log_;
};

}  // namespace aista
