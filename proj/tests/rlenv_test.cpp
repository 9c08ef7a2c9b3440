#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

#include "aista/rlenv.hpp"

using namespace aista;

namespace {

QosSummary met() {
    QosSummary s;
    s.throughput_bps = 2e6;
    s.avg_delay_ms = 3.0;
    s.jitter_ms = 1.0;
    s.loss_rate = 0.0;
    s.sent = 100;
    s.received = 100;
    return s;
}

FairnessReport fair(double f) {
    FairnessReport r;
    r.f = f;
    return r;
}

SimulationConfig small_config() {
    SimulationConfig c;
    c.nodes = {
        NodeSpec{"ap0", NodeRole::Ap, {0, 0}, std::nullopt, false},
        NodeSpec{"ai", NodeRole::Sta, {5, 0}, MacAddress{0}, true},
        NodeSpec{"sta1", NodeRole::Sta, {0, 6}, MacAddress{0}, false},
    };
    c.flows = {
        FlowAssignment{1, 0, BurstModel{SimTime::us(16'667), 3000, 500, 1500, std::nullopt}, FlowDirection::Uplink, true},
        FlowAssignment{0, 1, BurstModel{SimTime::us(16'667), 8000, 1000, 1500, std::nullopt}, FlowDirection::Downlink, true},
        FlowAssignment{0, 2, BurstModel{SimTime::us(16'667), 8000, 1000, 1500, std::nullopt}, FlowDirection::Downlink, false},
    };
    c.seed = 42;
    return c;
}

}  // namespace

TEST(ActionLattice, DefaultBoundsGiveEightCorners) {
    const ActionLattice lat(ThresholdBounds{}, 1);
    ASSERT_EQ(lat.size(), 8u);
    const std::vector<ActionPoint> expected = {
        {-100, -110, 10}, {-100, -110, 30}, {-100, -30, 10}, {-100, -30, 30},
        {-20, -110, 10},  {-20, -110, 30},  {-20, -30, 10},  {-20, -30, 30},
    };
    EXPECT_EQ(lat.points(), expected);
}

TEST(ActionLattice, MidpointAndSize) {
    ThresholdBounds b;
    b.cst = {0, 10};
    b.rst = {-50, -50};
    b.tx_power = {10, 10};
    const ActionLattice lat(b, 2);
    ASSERT_EQ(lat.size(), 3u);
    EXPECT_EQ(lat.point(1).cst_dbm, 5.0);
    for (int l = 1; l <= 4; ++l) {
        EXPECT_EQ(ActionLattice(ThresholdBounds{}, l).size(), static_cast<std::size_t>((l + 1) * (l + 1) * (l + 1)));
    }
    EXPECT_THROW(ActionLattice(ThresholdBounds{}, 0), std::invalid_argument);
}

TEST(ActionLattice, IndexRoundTripAndBounds) {
    const ThresholdBounds b{};
    for (int l = 1; l <= 5; ++l) {
        const ActionLattice lat(b, l);
        for (std::size_t i = 0; i < lat.size(); ++i) {
            ASSERT_EQ(lat.index_of(lat.point(i)), i);
            EXPECT_TRUE(b.contains(lat.point(i).thresholds()));
        }
    }
    const ActionLattice lat(b, 1);
    EXPECT_FALSE(lat.contains(ActionPoint{-82, -101, 16}));
}

TEST(ApplyAction, SetsThresholdsAndRejectsLegacyOrOffLattice) {
    Scheduler sched;
    SimulationConfig c = small_config();
    WifiNetwork net(sched, c.nodes, c.radio, c.timings, Thresholds{}, 1);
    ThresholdBounds b;
    b.cst = {-82, -82};
    b.rst = {-101, -101};
    b.tx_power = {16, 16};
    const ActionLattice lat(b, 1);
    ASSERT_EQ(lat.size(), 1u);
    apply_action(net, 1, lat.point(0), lat);
    EXPECT_EQ(net.thresholds(1), (Thresholds{-82, -101, 16}));
    apply_action(net, 1, lat.point(0), lat);
    EXPECT_EQ(net.thresholds(1), (Thresholds{-82, -101, 16}));

    const ActionLattice full(ThresholdBounds{}, 1);
    EXPECT_THROW(apply_action(net, 2, full.point(0), full), std::invalid_argument);
    EXPECT_THROW(apply_action(net, 1, ActionPoint{-82, -101, 16}, full), std::invalid_argument);
    apply_action(net, 1, full.point(7), full);
    EXPECT_EQ(net.thresholds(1), (Thresholds{-20, -30, 30}));
    EXPECT_EQ(net.thresholds(2), Thresholds{});
}

TEST(Reward, AllTargetsMet) {
    const auto r = compute_reward(met(), fair(0.9), QosTargets{}, RewardWeights{});
    EXPECT_EQ(r.reward, 0.9);
    EXPECT_EQ(r.zeta_s, 0.0);
    EXPECT_EQ(r.zeta_d, 0.0);
    EXPECT_EQ(r.zeta_j, 0.0);
    EXPECT_EQ(r.zeta_ploss, 0.0);
}

TEST(Reward, DelayPenaltyExample) {
    QosSummary s = met();
    s.avg_delay_ms = 7.0;
    const auto r = compute_reward(s, fair(0.9), QosTargets{}, RewardWeights{});
    EXPECT_DOUBLE_EQ(r.zeta_d, 2.0);
    EXPECT_NEAR(r.reward, -19.1, 1e-12);
}

TEST(Reward, ThroughputPenaltyExample) {
    QosSummary s = met();
    s.throughput_bps = 1.0e6;
    const auto r = compute_reward(s, fair(0.9), QosTargets{}, RewardWeights{});
    EXPECT_DOUBLE_EQ(r.zeta_s, 0.5);
    EXPECT_NEAR(r.reward, 0.4, 1e-12);
}

TEST(Reward, LossPenaltyIsInPercent) {
    QosSummary s = met();
    s.loss_rate = 0.011;
    const auto r = compute_reward(s, fair(1.0), QosTargets{}, RewardWeights{});
    EXPECT_NEAR(r.zeta_ploss, 1.0, 1e-12);
    EXPECT_NEAR(r.reward, 1.0 - 0.1, 1e-12);
}

TEST(Reward, NeverAboveFairness) {
    Rng rng(3, 9);
    for (int i = 0; i < 2000; ++i) {
        QosSummary s;
        s.throughput_bps = rng.uniform() * 4e6;
        s.avg_delay_ms = rng.uniform() * 10;
        s.jitter_ms = rng.uniform() * 4;
        s.loss_rate = rng.uniform() * 0.01;
        const double f = rng.uniform();
        const auto r = compute_reward(s, fair(f), QosTargets{}, RewardWeights{});
        EXPECT_LE(r.reward, f);
        EXPECT_GE(r.zeta_s, 0.0);
        EXPECT_GE(r.zeta_d, 0.0);
        EXPECT_GE(r.zeta_j, 0.0);
        EXPECT_GE(r.zeta_ploss, 0.0);
    }
}

TEST(State, AtTargetIsFixedPoint) {
    QosSummary s;
    s.throughput_bps = 1.5e6;
    s.avg_delay_ms = 5.0;
    s.jitter_ms = 2.0;
    s.loss_rate = 0.001;
    const StateVec v = build_state(s, fair(0.8), QosTargets{});
    EXPECT_EQ(v.f, 0.8);
    EXPECT_DOUBLE_EQ(v.s_norm, 1.0);
    EXPECT_DOUBLE_EQ(v.d_norm, 1.0);
    EXPECT_DOUBLE_EQ(v.j_norm, 1.0);
    EXPECT_DOUBLE_EQ(v.ploss_norm, 1.0);
}

TEST(State, ScalesAndClips) {
    QosSummary s;
    s.throughput_bps = 3.0e6;
    s.avg_delay_ms = 500.0;
    const StateVec v = build_state(s, fair(1.0), QosTargets{});
    EXPECT_DOUBLE_EQ(v.s_norm, 2.0);
    EXPECT_EQ(v.d_norm, 10.0);
    EXPECT_EQ(v.ploss_norm, 0.0);
    EXPECT_EQ(AiStaEnv::initial_state(), (StateVec{1, 0, 0, 0, 0}));
}

TEST(Env, ZeroTrafficEpoch) {
    SimulationConfig c = small_config();
    c.flows.clear();
    AiStaEnv env(c);
    const EpochResult r = env.step(0);
    EXPECT_EQ(r.state.f, 1.0);
    EXPECT_EQ(r.state.s_norm, 0.0);
    EXPECT_EQ(r.provisional.sent, 0u);
    EXPECT_DOUBLE_EQ(r.reward.zeta_s, 1.5);
    EXPECT_DOUBLE_EQ(r.reward.reward, 1.0 - 1.5);
}

TEST(Env, SameSeedAndActionsReproduce) {
    auto trajectory = [] {
        AiStaEnv env(small_config());
        std::vector<std::pair<StateVec, double>> out;
        for (std::size_t k = 0; k < 20; ++k) {
            const auto r = env.step(k % 8);
            out.emplace_back(r.state, r.reward.reward);
        }
        return out;
    };
    const auto a = trajectory();
    const auto b = trajectory();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].first, b[i].first);
        EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i].second), std::bit_cast<std::uint64_t>(b[i].second));
    }
}

TEST(Env, EpochsAdvanceByEpochLength) {
    AiStaEnv env(small_config());
    for (std::size_t k = 0; k < 5; ++k) {
        const auto r = env.step(k);
        EXPECT_EQ(r.epoch, k);
        EXPECT_EQ(r.start, SimTime::ms(100 * static_cast<std::int64_t>(k)));
        EXPECT_EQ(r.end, r.start + SimTime::ms(100));
        EXPECT_EQ(env.scheduler().now(), r.end);
        EXPECT_EQ(r.action, k);
        EXPECT_EQ(r.applied, env.lattice().point(k).thresholds());
        EXPECT_GE(r.state.f, 0.0);
        EXPECT_LE(r.state.f, 1.0);
    }
    EXPECT_EQ(env.epochs_done(), 5u);
    EXPECT_THROW(env.finalized_summary(5), std::out_of_range);
}

TEST(Env, ThresholdStepsRespectBounds) {
    AiStaEnv env(small_config());
    EXPECT_THROW(env.step_thresholds(Thresholds{-10, -101, 16}), std::invalid_argument);
    const auto r = env.step_thresholds(Thresholds{-82, -101, 16});
    EXPECT_FALSE(r.action.has_value());
    EXPECT_EQ(env.network().thresholds(env.ai()), (Thresholds{-82, -101, 16}));
}

TEST(Env, FinalizedCountsLateArrivalsAsReceived) {
    AiStaEnv env(small_config());
    for (int k = 0; k < 6; ++k) env.step(0);
    for (std::size_t k = 0; k + 1 < 6; ++k) {
        const QosSummary f = env.finalized_summary(k);
        EXPECT_GT(f.sent, 0u);
        EXPECT_LE(f.received, f.sent);
    }
}

TEST(FindAiSta, RequiresExactlyOne) {
    auto nodes = small_config().nodes;
    EXPECT_EQ(find_ai_sta(nodes), 1u);
    nodes[2].ai = true;
    EXPECT_THROW(find_ai_sta(nodes), std::invalid_argument);
    nodes[1].ai = nodes[2].ai = false;
    EXPECT_THROW(find_ai_sta(nodes), std::invalid_argument);
}
