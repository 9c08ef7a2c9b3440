#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "aista/channel.hpp"
#include "aista/dcf.hpp"
#include "aista/engine.hpp"
#include "aista/fairness.hpp"
#include "aista/metrics.hpp"
#include "aista/network.hpp"
#include "aista/traffic.hpp"

namespace aista {

/// One (CST, RST, Tx power) triple in dBm.
struct ActionPoint {
    double cst_dbm = 0.0;
    double rst_dbm = 0.0;
    double power_dbm = 0.0;

    Thresholds thresholds() const { return Thresholds{cst_dbm, rst_dbm, power_dbm}; }
    bool operator==(const ActionPoint&) const = default;
};

/// The discretized action space: (l+1)^3 points, lexicographic in (cst, rst, power).
class ActionLattice {
public:
    ActionLattice(const ThresholdBounds& bounds, int l);

    std::size_t size() const { return points_.size(); }
    int granularity() const { return l_; }
    const ActionPoint& point(std::size_t index) const { return points_.at(index); }
    std::optional<std::size_t> index_of(const ActionPoint& a) const;
    bool contains(const ActionPoint& a) const { return index_of(a).has_value(); }
    const std::vector<ActionPoint>& points() const { return points_; }

private:
    int l_;
    std::array<std::vector<double>, 3> axes_;
    std::vector<ActionPoint> points_;
};

std::vector<ActionPoint> action_lattice(const ThresholdBounds& bounds, int l);

/// Replaces the AI-STA thresholds; only on-lattice points are accepted.
void apply_action(WifiNetwork& net, MacAddress node, const ActionPoint& a, const ActionLattice& lattice);

struct QosTargets {
    double s_min_mbps = 1.5;
    double d_max_ms = 5.0;
    double j_max_ms = 2.0;
    double ploss_max = 0.001;  ///< fraction (0.1 %)

    void validate() const;
    bool operator==(const QosTargets&) const = default;
};

struct RewardWeights {
    double w_s = 1.0;
    double w_d = 10.0;
    double w_j = 10.0;
    double w_ploss = 0.1;

    void validate() const;
    bool operator==(const RewardWeights&) const = default;
};

/// Penalties in Mb/s, ms, ms and percent.
struct RewardBreakdown {
    double reward = 0.0;
    double zeta_s = 0.0;
    double zeta_d = 0.0;
    double zeta_j = 0.0;
    double zeta_ploss = 0.0;
};

RewardBreakdown compute_reward(const QosSummary& s, const FairnessReport& f, const QosTargets& targets,
                               const RewardWeights& w);

struct StateVec {
    static constexpr std::size_t dim = 5;
    double f = 1.0;
    double s_norm = 0.0;
    double d_norm = 0.0;
    double j_norm = 0.0;
    double ploss_norm = 0.0;

    std::vector<double> values() const { return {f, s_norm, d_norm, j_norm, ploss_norm}; }
    bool operator==(const StateVec&) const = default;
};

/// Metrics normalized by their targets, each clipped to [0, 10].
StateVec build_state(const QosSummary& s, const FairnessReport& f, const QosTargets& targets);

/// Everything needed to instantiate one simulation.
struct SimulationConfig {
    std::vector<NodeSpec> nodes;
    RadioConfig radio{};
    MacTimings timings{};
    Thresholds legacy_thresholds{};
    Thresholds ai_initial{};
    ThresholdBounds bounds{};
    std::vector<FlowAssignment> flows;
    std::vector<TraceEntry> trace;  ///< replaces the tracked AI-STA flows when non-empty
    SimTime epoch_len = SimTime::ms(100);
    QosTargets targets{};
    RewardWeights weights{};
    int lattice_l = 1;
    std::uint64_t seed = 1;
    bool record_frames = false;
};

struct EpochResult {
    std::size_t epoch = 0;
    SimTime start{};
    SimTime end{};
    Thresholds applied{};
    std::optional<std::size_t> action;
    StateVec state{};
    RewardBreakdown reward{};
    FairnessReport fairness{};
    QosSummary provisional{};  ///< in-flight packets excluded; feeds state and reward
    std::map<MacAddress, std::int64_t> durations;
    std::vector<double> ap_rssi_dbm;  ///< decoded DATA/ACK from the own AP at the AI-STA
};

/// The AI-STA's decision process over a running network. Each step applies
/// the thresholds, advances one epoch and closes the fairness and QoS windows.
class AiStaEnv {
public:
    explicit AiStaEnv(SimulationConfig cfg);

    static StateVec initial_state() { return StateVec{1.0, 0.0, 0.0, 0.0, 0.0}; }

    EpochResult step(std::size_t action);
    /// Off-lattice thresholds for the baselines; must lie within the bounds.
    EpochResult step_thresholds(const Thresholds& t);

    /// Summary of a completed epoch with every packet whose fate is still open
    /// at the end of the following epoch counted as lost.
    QosSummary finalized_summary(std::size_t epoch) const;

    /// Runs one more epoch length without a decision so the last epoch can be
    /// finalized like the others.
    void drain();

    std::size_t epochs_done() const { return epochs_done_; }
    const ActionLattice& lattice() const { return lattice_; }
    const SimulationConfig& config() const { return cfg_; }
    MacAddress ai() const { return ai_; }
    MacAddress ai_ap() const { return ai_ap_; }
    const std::vector<MacAddress>& table_keys() const { return keys_; }
    const PacketLedger& ledger() const { return ledger_; }
    const WifiNetwork& network() const { return *net_; }
    const Scheduler& scheduler() const { return sched_; }

private:
    EpochResult advance(const Thresholds& t, std::optional<std::size_t> action);

    SimulationConfig cfg_;
    ActionLattice lattice_;
    MacAddress ai_ = 0;
    MacAddress ai_ap_ = 0;
    std::vector<MacAddress> keys_;
    Scheduler sched_;
    std::unique_ptr<WifiNetwork> net_;
    std::unique_ptr<TrafficGenerator> traffic_;
    PacketLedger ledger_;
    DurationTable table_;
    std::vector<double> rssi_;
    std::uint64_t next_packet_id_ = 1;
    std::size_t epochs_done_ = 0;
};

/// Finds the single AI-STA; throws unless there is exactly one and it is associated.
MacAddress find_ai_sta(const std::vector<NodeSpec>& nodes);

}  // namespace aista
