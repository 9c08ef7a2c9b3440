#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "aista/fairness.hpp"

using namespace aista;

namespace {

Frame control(FrameKind k, MacAddress src, MacAddress dst, std::int64_t dur, std::uint64_t exchange) {
    Frame f;
    f.kind = k;
    f.src = src;
    f.dst = dst;
    f.duration_us = dur;
    f.exchange = exchange;
    return f;
}

double brute_jain(const std::vector<double>& t) {
    long double s = 0, q = 0;
    for (double v : t) {
        s += v;
        q += static_cast<long double>(v) * v;
    }
    if (s == 0) return 1.0;
    return static_cast<double>(s * s / (t.size() * q));
}

}  // namespace

TEST(DurationTable, RtsBranchCreditsReceiver) {
    const std::vector<MacAddress> stas{2, 3, 4};
    DurationTable t(0, stas);
    process_control_frame(t, control(FrameKind::Rts, 0, 2, 300, 1), 25, 16);
    EXPECT_EQ(t.duration_us(2), 300);
    EXPECT_EQ(t.duration_us(3), 0);
}

TEST(DurationTable, CtsBranchAddsAirtimeAndSifs) {
    const std::vector<MacAddress> stas{2, 3};
    DurationTable t(0, stas);
    process_control_frame(t, control(FrameKind::Cts, 0, 3, 300, 1), 28, 16);
    EXPECT_EQ(t.duration_us(3), 344);
}

TEST(DurationTable, UnknownKeyAndForeignSenderIgnored) {
    const std::vector<MacAddress> stas{2, 3};
    DurationTable t(0, stas);
    const DurationTable before = t;
    process_control_frame(t, control(FrameKind::Rts, 0, 9, 300, 1), 25, 16);
    EXPECT_EQ(t, before);
    process_control_frame(t, control(FrameKind::Rts, 5, 2, 300, 2), 25, 16);
    EXPECT_EQ(t.entries(), before.entries());
}

TEST(DurationTable, SecondControlFrameOfExchangeIgnored) {
    const std::vector<MacAddress> stas{2};
    DurationTable t(0, stas);
    process_control_frame(t, control(FrameKind::Rts, 0, 2, 629, 77), 25, 16);
    process_control_frame(t, control(FrameKind::Cts, 0, 2, 588, 77), 25, 16);
    EXPECT_EQ(t.duration_us(2), 629);
    process_control_frame(t, control(FrameKind::Rts, 0, 2, 629, 78), 25, 16);
    EXPECT_EQ(t.duration_us(2), 1258);
}

TEST(DurationTable, RejectsDataFrames) {
    const std::vector<MacAddress> stas{2};
    DurationTable t(0, stas);
    EXPECT_THROW(process_control_frame(t, control(FrameKind::Data, 0, 2, 41, 1), 25, 16), std::invalid_argument);
    EXPECT_THROW(process_control_frame(t, control(FrameKind::Ack, 0, 2, 0, 1), 25, 16), std::invalid_argument);
}

TEST(DurationTable, ResetKeepsKeys) {
    const std::vector<MacAddress> stas{2, 3};
    DurationTable t(0, stas);
    process_control_frame(t, control(FrameKind::Rts, 0, 2, 300, 1), 25, 16);
    reset_window(t, SimTime::ms(100));
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.duration_us(2), 0);
    EXPECT_EQ(t.window_start(), SimTime::ms(100));
    const DurationTable once = t;
    reset_window(t, SimTime::ms(100));
    EXPECT_EQ(t, once);
    EXPECT_EQ(jain_index(t).f, 1.0);
}

TEST(Jain, Examples) {
    EXPECT_DOUBLE_EQ(jain_index(std::vector<double>{1, 1, 1, 1}).f, 1.0);
    EXPECT_DOUBLE_EQ(jain_index(std::vector<double>{1, 0, 0, 0}).f, 0.25);
    EXPECT_DOUBLE_EQ(jain_index(std::vector<double>{3, 1}).f, 0.8);
    EXPECT_EQ(jain_index(std::vector<double>{0, 0, 0}).f, 1.0);
    EXPECT_THROW(jain_index(std::vector<double>{}), std::invalid_argument);
}

TEST(Jain, SharesSumToOne) {
    const auto r = jain_index(std::vector<double>{5, 3, 2});
    EXPECT_EQ(r.n, 3u);
    double s = 0;
    for (double v : r.per_station_share) s += v;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(r.per_station_share[0], 0.5);
}

TEST(Jain, PropertiesOnRandomVectors) {
    Rng rng(2025, 1);
    for (int c = 0; c < 10'000; ++c) {
        const int n = static_cast<int>(rng.uniform_int(1, 14));
        std::vector<double> t(n);
        for (auto& v : t) v = rng.uniform() < 0.2 ? 0.0 : std::floor(rng.uniform() * 5000.0);
        const double f = jain_index(t).f;
        ASSERT_GE(f, 1.0 / n);
        ASSERT_LE(f, 1.0);
        EXPECT_NEAR(f, brute_jain(t), 1e-12 * brute_jain(t));
        const double k = 0.001 + 1000.0 * rng.uniform();
        std::vector<double> scaled(t);
        for (auto& v : scaled) v *= k;
        EXPECT_NEAR(jain_index(scaled).f, f, 1e-12 * f);
        std::vector<double> perm(t);
        std::reverse(perm.begin(), perm.end());
        std::rotate(perm.begin(), perm.begin() + (n / 2), perm.end());
        EXPECT_NEAR(jain_index(perm).f, f, 1e-12 * f);
    }
}
