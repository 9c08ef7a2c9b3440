#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aista/channel.hpp"

using namespace aista;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ChannelParams table_defaults() { return ChannelParams{}; }

}  // namespace

TEST(Units, DbmToWatt) {
    EXPECT_DOUBLE_EQ(dbm_to_watt(0.0), 1e-3);
    EXPECT_LT(rel(dbm_to_watt(-100.0), 1e-13), 1e-12);
    // 10^1.6 mW by repeated multiplication: 10 * 10^0.6, 10^0.6 = exp(0.6 ln 10).
    const double oracle = 10.0 * std::exp(0.6 * std::log(10.0)) * 1e-3;
    EXPECT_NEAR(dbm_to_watt(16.0), 3.981e-2, 1e-5);
    EXPECT_LT(rel(dbm_to_watt(16.0), oracle), 1e-12);
}

TEST(Units, RoundTrip) {
    for (double p = -120.0; p <= 40.0; p += 0.37) {
        EXPECT_LT(rel(watt_to_dbm(dbm_to_watt(p)), p), 1e-12) << p;
    }
}

TEST(PathGain, SpotValues) {
    const auto p = table_defaults();
    EXPECT_EQ(path_gain(1.0, p), 1.0);
    EXPECT_EQ(path_gain(2.0, p), 0.125);
    EXPECT_LT(rel(path_gain(10.0, p), 1e-3), 1e-15);
}

TEST(PathGain, ClampsBelowReferenceAndRejectsNonPositive) {
    const auto p = table_defaults();
    EXPECT_EQ(path_gain(0.2, p), 1.0);
    EXPECT_THROW(path_gain(0.0, p), std::invalid_argument);
    EXPECT_THROW(path_gain(-1.0, p), std::invalid_argument);
}

TEST(PathGain, MonotoneDecreasing) {
    for (double alpha : {2.0, 3.0, 4.0}) {
        ChannelParams p;
        p.alpha = alpha;
        double prev = path_gain(1.0, p);
        for (double d = 1.05; d < 200.0; d *= 1.05) {
            const double g = path_gain(d, p);
            ASSERT_LT(g, prev);
            ASSERT_GT(g, 0.0);
            prev = g;
        }
    }
}

TEST(ChannelParams, Validation) {
    ChannelParams p;
    EXPECT_NO_THROW(p.validate());
    p.alpha = 4.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.m_shape = 0.8;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.d0_m = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

class FadingMoments : public ::testing::TestWithParam<double> {};

TEST_P(FadingMoments, UnitMeanAndInverseShapeVariance) {
    const double m = GetParam();
    Rng rng(2024, streams::fading(1));
    const int n = 1'000'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = sample_fading(m, rng);
        ASSERT_GT(z, 0.0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    EXPECT_NEAR(mean, 1.0, 0.01);
    EXPECT_NEAR(var, 1.0 / m, 0.02 / m);
}

INSTANTIATE_TEST_SUITE_P(Shapes, FadingMoments, ::testing::Values(1.0, 1.5, 2.0));

TEST(Fading, ShapeOneIsExponentialKs) {
    Rng rng(11, streams::fading(0));
    const int n = 1'000'000;
    std::vector<double> z(n);
    for (auto& v : z) v = sample_fading(1.0, rng);
    std::sort(z.begin(), z.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = 1.0 - std::exp(-z[i]);
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LT(d, 0.002);
}

TEST(Fading, SubUnitShapeUsesBoost) {
    Rng rng(3, 3);
    const int n = 400'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = sample_fading(0.5, rng);
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 1.0, 0.01);
    EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 2.0, 0.06);
    EXPECT_THROW(sample_fading(0.4, rng), std::invalid_argument);
}

TEST(ReceivedPower, Examples) {
    const auto p = table_defaults();
    EXPECT_DOUBLE_EQ(received_power(0.0, 1.0, 1.0, p), 1e-3);
    const double at10 = received_power(16.0, 10.0, 1.0, p);
    EXPECT_NEAR(at10, 3.981e-5, 1e-8);
    EXPECT_LT(rel(at10, dbm_to_watt(16.0) * path_gain(10.0, p)), 1e-15);
    EXPECT_LT(rel(received_power(16.0, 10.0, 0.5, p), at10 / 2.0), 1e-15);
}

TEST(ReceivedPower, LinearInEachFactor) {
    const auto p = table_defaults();
    Rng rng(8, 8);
    for (int i = 0; i < 1000; ++i) {
        const double tx = -10.0 + 40.0 * rng.uniform();
        const double d = 1.0 + 80.0 * rng.uniform();
        const double h = 0.01 + 3.0 * rng.uniform();
        const double c = 0.1 + 5.0 * rng.uniform();
        const LinkSample s = link_sample(tx, d, h, p);
        EXPECT_EQ(s.rx_power_w, dbm_to_watt(tx) * s.path_gain * s.fading_gain);
        EXPECT_LT(rel(received_power(tx, d, c * h, p), c * received_power(tx, d, h, p)), 1e-12);
        const double tx_scaled = watt_to_dbm(c * dbm_to_watt(tx));
        EXPECT_LT(rel(received_power(tx_scaled, d, h, p), c * received_power(tx, d, h, p)), 1e-12);
    }
}

TEST(Interference, SumsAndIsOrderIndependent) {
    const auto p = table_defaults();
    EXPECT_EQ(aggregate_interference({}, p), 0.0);

    // 1e-9 W each: -60 dBm at d0 with unit fading.
    std::vector<InterfererSample> two{{-60.0, 1.0, 1.0}, {-60.0, 1.0, 1.0}};
    EXPECT_LT(rel(aggregate_interference(two, p), 2e-9), 1e-12);

    Rng rng(4, 4);
    std::vector<InterfererSample> xs;
    for (int i = 0; i < 12; ++i) xs.push_back({10.0 + 20.0 * rng.uniform(), 1.0 + 50.0 * rng.uniform(), rng.uniform()});
    const double base = aggregate_interference(xs, p);
    auto shuffled = xs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 5, shuffled.end());
    EXPECT_LT(rel(aggregate_interference(shuffled, p), base), 1e-15);

    std::span<const InterfererSample> all(xs);
    EXPECT_LT(rel(aggregate_interference(all.first(4), p) + aggregate_interference(all.subspan(4), p), base), 1e-15);
}

TEST(Sinr, Examples) {
    EXPECT_LT(rel(sinr(1e-9, 0.0, 1e-13), 1e4), 1e-12);
    EXPECT_NEAR(sinr(1e-9, 1e-9, 1e-20), 1.0, 1e-9);
    EXPECT_LT(rel(sinr(2e-9, 0.0, 2e-13), 1e4), 1e-12);
}

TEST(CarrierSense, ThresholdIsInclusive) {
    EXPECT_TRUE(carrier_sense_busy(dbm_to_watt(-80.0), -82.0));
    EXPECT_FALSE(carrier_sense_busy(dbm_to_watt(-90.0), -82.0));
    EXPECT_TRUE(carrier_sense_busy(dbm_to_watt(-82.0), -82.0));
}

TEST(DecodeGate, PowerMode) {
    const double n0 = dbm_to_watt(-100.0);
    const double p = dbm_to_watt(-95.0);
    // Interference plus noise 20 dB under the signal.
    const double i_plus_n = p / 100.0;
    EXPECT_TRUE(decode_gate(p, i_plus_n - n0 / 1e3, n0 / 1e3, -101.0, ReceptionModel::PowerThreshold, 10.0));
    EXPECT_FALSE(decode_gate(dbm_to_watt(-105.0), 0.0, 1e-30, -101.0, ReceptionModel::PowerThreshold, 10.0));
    // Power passes, capture fails.
    EXPECT_FALSE(decode_gate(p, dbm_to_watt(-97.0), n0, -101.0, ReceptionModel::PowerThreshold, 10.0));
}

TEST(DecodeGate, SinrMode) {
    const double n0 = 1e-13;
    const double p5db = db_to_linear(5.0) * n0;
    EXPECT_FALSE(decode_gate(p5db, 0.0, n0, 10.0, ReceptionModel::SinrThreshold, 0.0));
    EXPECT_TRUE(decode_gate(db_to_linear(12.0) * n0, 0.0, n0, 10.0, ReceptionModel::SinrThreshold, 0.0));
}

TEST(DecodeGate, MonotoneInReceivedPower) {
    Rng rng(6, 6);
    const double n0 = dbm_to_watt(-100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double i = dbm_to_watt(-110.0 + 40.0 * rng.uniform());
        const double rst = -110.0 + 30.0 * rng.uniform();
        bool decoded = false;
        for (double dbm = -120.0; dbm <= -30.0; dbm += 0.25) {
            const bool d = decode_gate(dbm_to_watt(dbm), i, n0, rst, ReceptionModel::PowerThreshold, 10.0);
            ASSERT_FALSE(decoded && !d);
            decoded = d;
        }
    }
}

TEST(ReceptionModel, Parse) {
    EXPECT_EQ(parse_reception_model("power"), ReceptionModel::PowerThreshold);
    EXPECT_EQ(parse_reception_model("sinr"), ReceptionModel::SinrThreshold);
    EXPECT_THROW(parse_reception_model("snr"), std::invalid_argument);
}
