#include <gtest/gtest.h>

#include <map>

#include "aista/network.hpp"

using namespace aista;

namespace {

RadioConfig clean_radio() {
    RadioConfig r;
    r.channel.fading = false;
    return r;
}

NodeSpec ap(const std::string& name, double x, double y) { return NodeSpec{name, NodeRole::Ap, {x, y}, std::nullopt, false}; }
NodeSpec sta(const std::string& name, double x, double y, MacAddress a) { return NodeSpec{name, NodeRole::Sta, {x, y}, a, false}; }

struct Delivery {
    MacAddress sender;
    std::uint64_t id;
    SimTime at;
};

}  // namespace

TEST(Network, SingleLinkGoldenTiming) {
    MacTimings t;
    for (int draw : {0, 1, 5, 15}) {
        Scheduler s;
        WifiNetwork net(s, {ap("ap", 0, 0), sta("sta", 5, 0, 0)}, clean_radio(), t, Thresholds{}, 1);
        net.set_backoff_source(1, [draw](int) { return draw; });
        std::vector<Delivery> done;
        SimTime received_at{};
        WifiNetwork::Hooks h;
        h.packet_delivered = [&](MacAddress n, const Packet& p) { done.push_back({n, p.id, s.now()}); };
        h.data_received = [&](MacAddress, const Frame&) { received_at = s.now(); };
        net.set_hooks(h);
        net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
        s.run_until(SimTime::ms(5));
        ASSERT_EQ(done.size(), 1u);
        // DIFS 34 us + draw * 9 us + RTS 26667 + CTS 24667 + DATA 531334 + ACK 24667 + 3 * SIFS 16000 ns.
        const std::int64_t oracle = 34'000 + draw * 9'000 + 26'667 + 24'667 + 531'334 + 24'667 + 48'000;
        EXPECT_EQ(done[0].at.count(), oracle) << "draw " << draw;
        EXPECT_EQ(done[0].at, t.difs + t.slot * draw + exchange_duration(1500, t));
        EXPECT_EQ(received_at, done[0].at - ack_airtime(t) - t.sifs);
        EXPECT_EQ(net.mac_state(1).cw, t.cw_min);
        EXPECT_EQ(net.mac_state(1).phase, MacPhase::Idle);
    }
}

TEST(Network, DrawnBackoffGoldenTiming) {
    MacTimings t;
    Scheduler s;
    WifiNetwork net(s, {ap("ap", 0, 0), sta("sta", 3, 4, 0)}, clean_radio(), t, Thresholds{}, 77);
    Rng mirror(77, streams::mac(1));
    const int draw = next_backoff(t.cw_min, mirror);
    SimTime at{};
    WifiNetwork::Hooks h;
    h.packet_delivered = [&](MacAddress, const Packet&) { at = s.now(); };
    net.set_hooks(h);
    net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
    s.run_until(SimTime::ms(5));
    EXPECT_EQ(at, t.difs + t.slot * draw + exchange_duration(1500, t));
}

TEST(Network, EqualBackoffCollidesThenRetriesWithDoubledWindow) {
    MacTimings t;
    Scheduler s;
    WifiNetwork net(s, {ap("ap", 0, 0), sta("a", 5, 0, 0), sta("b", -5, 0, 0)}, clean_radio(), t, Thresholds{}, 3);
    std::map<MacAddress, std::vector<int>> windows;
    const std::map<MacAddress, std::vector<int>> draws{{1, {4, 2}}, {2, {4, 9}}};
    for (MacAddress n : {1u, 2u}) {
        net.set_backoff_source(n, [&windows, &draws, n](int cw) {
            auto& w = windows[n];
            w.push_back(cw);
            return draws.at(n).at(std::min(w.size() - 1, draws.at(n).size() - 1));
        });
    }
    net.enable_frame_log(true);
    std::vector<Delivery> done;
    std::vector<std::uint64_t> dropped;
    WifiNetwork::Hooks h;
    h.packet_delivered = [&](MacAddress n, const Packet& p) { done.push_back({n, p.id, s.now()}); };
    h.packet_dropped = [&](MacAddress, const Packet& p, mac_action::DropReason) { dropped.push_back(p.id); };
    net.set_hooks(h);
    net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
    net.enqueue(2, Packet{2, 0, 1500, SimTime{}});
    s.run_until(SimTime::ms(10));

    // The first RTS pair starts at the same instant and neither is answered.
    const auto& log = net.frame_log();
    ASSERT_GE(log.size(), 4u);
    EXPECT_EQ(log[0].type, FrameLogRecord::Type::TxStart);
    EXPECT_EQ(log[1].type, FrameLogRecord::Type::TxStart);
    EXPECT_EQ(log[0].time, log[1].time);
    EXPECT_EQ(log[0].time, t.difs + t.slot * 4);
    EXPECT_EQ(log[2].outcome, FrameOutcome::Lost);
    EXPECT_EQ(log[3].outcome, FrameOutcome::Lost);

    EXPECT_EQ(windows[1], (std::vector<int>{15, 31}));
    EXPECT_EQ(windows[2].at(1), 31);
    ASSERT_EQ(done.size(), 2u);
    EXPECT_EQ(done[0].sender, 1u);
    EXPECT_EQ(done[1].sender, 2u);
    EXPECT_TRUE(dropped.empty());
    EXPECT_EQ(net.mac_state(1).cw, t.cw_min);
    EXPECT_EQ(net.mac_state(2).cw, t.cw_min);
}

TEST(Network, CaptureLetsStrongFrameThrough) {
    MacTimings t;
    Scheduler s;
    // "near" is 20 dB stronger at the AP than "far".
    WifiNetwork net(s, {ap("ap", 0, 0), sta("near", 2, 0, 0), sta("far", -2 * std::pow(10.0, 20.0 / 30.0), 0, 0)},
                    clean_radio(), t, Thresholds{}, 3);
    net.set_backoff_source(1, [](int) { return 3; });
    net.set_backoff_source(2, [](int) { return 3; });
    net.enable_frame_log(true);
    net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
    net.enqueue(2, Packet{2, 0, 1500, SimTime{}});
    s.run_until(SimTime::ms(1));
    const auto& log = net.frame_log();
    ASSERT_GE(log.size(), 4u);
    std::map<MacAddress, FrameOutcome> first_rts;
    for (const auto& r : log) {
        if (r.type == FrameLogRecord::Type::TxEnd && r.frame.kind == FrameKind::Rts && !first_rts.contains(r.frame.src)) {
            first_rts[r.frame.src] = r.outcome;
        }
    }
    EXPECT_EQ(first_rts[1], FrameOutcome::Received);
    EXPECT_EQ(first_rts[2], FrameOutcome::Lost);
}

TEST(Network, OverhearingSetsNav) {
    MacTimings t;
    Scheduler s;
    WifiNetwork net(s, {ap("ap", 0, 0), sta("tx", 5, 0, 0), sta("other", 0, 5, 0)}, clean_radio(), t, Thresholds{}, 3);
    net.set_backoff_source(1, [](int) { return 0; });
    net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
    s.run_until(t.difs + rts_airtime(t));
    EXPECT_EQ(net.mac_state(2).nav_until, t.difs + rts_airtime(t) + SimTime::us(rts_duration_us(1500, t)));
    EXPECT_EQ(net.mac_state(0).nav_until, SimTime{});
}

TEST(Network, HiddenNodesCollideAtAp) {
    MacTimings t;
    Scheduler s;
    // The two stations cannot sense each other but both reach the AP.
    Thresholds thr;
    thr.cst_dbm = -30.0;
    WifiNetwork net(s, {ap("ap", 0, 0), sta("a", 30, 0, 0), sta("b", -30, 0, 0)}, clean_radio(), t, thr, 3);
    net.set_backoff_source(1, [](int) { return 0; });
    net.set_backoff_source(2, [](int) { return 1; });
    net.enable_frame_log(true);
    net.enqueue(1, Packet{1, 0, 1500, SimTime{}});
    net.enqueue(2, Packet{2, 0, 1500, SimTime{}});
    s.run_until(SimTime::us(100));
    const auto& log = net.frame_log();
    int lost = 0;
    for (const auto& r : log) {
        if (r.type == FrameLogRecord::Type::TxEnd && r.outcome == FrameOutcome::Lost) ++lost;
    }
    EXPECT_EQ(lost, 2);
}

TEST(Network, RandomLoadKeepsInvariants) {
    MacTimings t;
    RadioConfig radio;
    Scheduler s;
    std::vector<NodeSpec> nodes{ap("ap0", 0, 0), ap("ap1", 25, 0)};
    for (int i = 0; i < 4; ++i) nodes.push_back(sta("s" + std::to_string(i), 3.0 * i - 4.0, 2.0, 0));
    for (int i = 0; i < 2; ++i) nodes.push_back(sta("o" + std::to_string(i), 25.0 + 3.0 * i, -3.0, 1));
    WifiNetwork net(s, nodes, radio, t, Thresholds{}, 5);
    Rng traffic(5, 99);
    std::uint64_t next_id = 1;
    std::size_t delivered = 0, dropped = 0, received = 0;
    WifiNetwork::Hooks h;
    h.packet_delivered = [&](MacAddress, const Packet&) { ++delivered; };
    h.packet_dropped = [&](MacAddress, const Packet&, mac_action::DropReason) { ++dropped; };
    h.data_received = [&](MacAddress, const Frame&) { ++received; };
    net.set_hooks(h);
    for (int step = 0; step < 2000; ++step) {
        const SimTime until = s.now() + SimTime::us(500);
        if (traffic.uniform() < 0.5) {
            const auto src = static_cast<MacAddress>(traffic.uniform_int(0, nodes.size() - 1));
            MacAddress dst = nodes[src].role == NodeRole::Ap ? (src == 0 ? 2 : 6) : *nodes[src].ap;
            net.enqueue(src, Packet{next_id++, dst, static_cast<std::uint32_t>(traffic.uniform_int(200, 1500)), s.now()});
        }
        ASSERT_NO_THROW(s.run_until(until));
        for (MacAddress n = 0; n < net.size(); ++n) {
            const auto& m = net.mac_state(n);
            ASSERT_GE(m.cw, t.cw_min);
            ASSERT_LE(m.cw, t.cw_max);
            ASSERT_EQ((m.cw + 1) & m.cw, 0);
            ASSERT_LE(m.retry_count, t.retry_limit);
        }
    }
    EXPECT_GT(delivered, 0u);
    EXPECT_GE(received, delivered);
    EXPECT_LE(delivered + dropped, next_id - 1);
}

TEST(Network, ReplayIsBitIdentical) {
    auto run = [] {
        Scheduler s;
        s.enable_log(true);
        MacTimings t;
        std::vector<NodeSpec> nodes{ap("ap0", 0, 0), sta("a", 4, 0, 0), sta("b", 0, 6, 0), ap("ap1", 20, 0), sta("c", 22, 1, 3)};
        WifiNetwork net(s, nodes, RadioConfig{}, t, Thresholds{}, 1234);
        net.enable_frame_log(true);
        for (int i = 0; i < 30; ++i) {
            net.enqueue(static_cast<MacAddress>(i % 5), Packet{static_cast<std::uint64_t>(i + 1),
                                                              static_cast<MacAddress>(i % 5 == 0 ? 1 : (i % 5 == 3 ? 4 : (i % 5 == 4 ? 3 : 0))),
                                                              1200, SimTime{}});
        }
        s.run_until(SimTime::ms(50));
        std::vector<std::tuple<std::int64_t, int, std::uint32_t, int>> frames;
        for (const auto& r : net.frame_log()) frames.emplace_back(r.time.count(), static_cast<int>(r.type), r.frame.src, static_cast<int>(r.outcome));
        return std::make_pair(s.log(), frames);
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    EXPECT_FALSE(a.second.empty());
}
