#include <gtest/gtest.h>

#include "aista/baselines.hpp"

using namespace aista;

TEST(Dsc, UpdateExamples) {
    const DscConfig cfg;
    EXPECT_EQ(dsc_update(-60.0, cfg), -85.0);
    EXPECT_EQ(dsc_update(-90.0, cfg), -100.0);
    EXPECT_EQ(dsc_update(10.0, cfg), -20.0);
}

TEST(Dsc, OutputBoundedAndMonotone) {
    const DscConfig cfg;
    double prev = dsc_update(-200.0, cfg);
    for (double rssi = -200.0; rssi <= 50.0; rssi += 0.25) {
        const double c = dsc_update(rssi, cfg);
        EXPECT_GE(c, cfg.cst_bounds.min);
        EXPECT_LE(c, cfg.cst_bounds.max);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(Dsc, HoldsWithoutObservation) {
    DscController dsc(DscConfig{}, Thresholds{});
    EXPECT_EQ(dsc.next({}), Thresholds{});
    const std::vector<double> one{-60.0};
    const Thresholds t = dsc.next(one);
    EXPECT_EQ(t.cst_dbm, -85.0);
    EXPECT_EQ(t.rst_dbm, -101.0);
    EXPECT_EQ(t.tx_power_dbm, 16.0);
    EXPECT_EQ(dsc.next({}), t);
}

TEST(Dsc, SmoothsInDecibels) {
    DscController dsc(DscConfig{}, Thresholds{});
    const std::vector<double> samples{-60.0, -70.0};
    dsc.next(samples);
    EXPECT_DOUBLE_EQ(*dsc.smoothed_rssi(), 0.9 * -60.0 + 0.1 * -70.0);
    EXPECT_DOUBLE_EQ(dsc.current().cst_dbm, 0.9 * -60.0 + 0.1 * -70.0 - 25.0);
}

TEST(Dsc, UpdatesOncePerPeriod) {
    DscConfig cfg;
    cfg.update_period = 3;
    DscController dsc(cfg, Thresholds{});
    const std::vector<double> s{-50.0};
    EXPECT_EQ(dsc.next(s).cst_dbm, -82.0);
    EXPECT_EQ(dsc.next(s).cst_dbm, -82.0);
    EXPECT_EQ(dsc.next(s).cst_dbm, -75.0);
}

TEST(Dsc, SameStreamSameTrace) {
    auto trace = [] {
        DscController dsc(DscConfig{}, Thresholds{});
        Rng rng(5, 5);
        std::vector<double> out;
        for (int k = 0; k < 200; ++k) {
            std::vector<double> s;
            for (int i = 0; i < 3; ++i) s.push_back(-70.0 + 10.0 * rng.normal());
            out.push_back(dsc.next(s).cst_dbm);
        }
        return out;
    };
    EXPECT_EQ(trace(), trace());
}

TEST(Dsc, ConfigValidation) {
    DscConfig c;
    c.margin_db = 0;
    EXPECT_THROW(DscController(c, Thresholds{}), std::invalid_argument);
    c = DscConfig{};
    c.update_period = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = DscConfig{};
    c.rssi_smoothing = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Static, AlwaysLegacyDefaults) {
    for (int k = 0; k < 500; ++k) EXPECT_EQ(static_controller(), (ActionPoint{-82.0, -101.0, 16.0}));
    EXPECT_EQ(static_controller().thresholds(), Thresholds{});
}
