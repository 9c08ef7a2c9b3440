#pragma once

#include <cmath>
#include <span>
#include <string>

#include "aista/engine.hpp"

namespace aista {

/// Path-loss, fading and noise parameters shared by every link.
struct ChannelParams {
    double alpha = 3.0;          ///< path-loss exponent, [2, 4]
    double d0_m = 1.0;           ///< reference distance
    double n0_dbm = -100.0;      ///< noise floor
    double m_shape = 1.0;        ///< Nakagami shape, [1, 2]
    bool fading = true;
    double shadowing_sigma_db = 0.0;  ///< log-normal shadowing, off by default

    void validate() const;
    bool operator==(const ChannelParams&) const = default;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

/// Carrier-sense threshold, receiver-sensitivity threshold and transmit power.
struct Thresholds {
    double cst_dbm = -82.0;
    double rst_dbm = -101.0;
    double tx_power_dbm = 16.0;
    bool operator==(const Thresholds&) const = default;
};

struct Range {
    double min = 0.0;
    double max = 0.0;
    bool contains(double v) const { return v >= min && v <= max; }
    bool operator==(const Range&) const = default;
};

struct ThresholdBounds {
    Range cst{-100.0, -20.0};
    Range rst{-110.0, -30.0};
    Range tx_power{10.0, 30.0};

    bool contains(const Thresholds& t) const {
        return cst.contains(t.cst_dbm) && rst.contains(t.rst_dbm) &&
               tx_power.contains(t.tx_power_dbm);
    }
    bool operator==(const ThresholdBounds&) const = default;
};

struct LinkSample {
    double tx_power_dbm = 0.0;
    double path_gain = 1.0;
    double fading_gain = 1.0;
    double rx_power_w = 0.0;
};

enum class ReceptionModel {
    PowerThreshold,  ///< RST is a power level plus a capture SINR
    SinrThreshold,   ///< RST read as an SINR ratio in dB
};

ReceptionModel parse_reception_model(const std::string& s);
const char* to_string(ReceptionModel m);

inline double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Deterministic attenuation (d/d0)^-alpha, clamped to 1 below d0.
double path_gain(double d_m, const ChannelParams& p);

/// |h|^2 ~ Gamma(shape m, rate m): unit mean, variance 1/m.
double sample_fading(double m_shape, Rng& rng);

/// Log-normal shadowing gain; 1 when sigma is 0.
double sample_shadowing(double sigma_db, Rng& rng);

double received_power(double tx_power_dbm, double d_m, double fading, const ChannelParams& p);
LinkSample link_sample(double tx_power_dbm, double d_m, double fading, const ChannelParams& p);

struct InterfererSample {
    double tx_power_dbm;
    double distance_m;
    double fading;
};

/// Sum of received powers; the intended transmitter must not be in the list.
double aggregate_interference(std::span<const InterfererSample> interferers,
                              const ChannelParams& p);

inline double sinr(double p_rx_w, double interference_w, double n0_w) {
    return p_rx_w / (interference_w + n0_w);
}

inline bool carrier_sense_busy(double i_total_w, double cst_dbm) {
    return i_total_w >= dbm_to_watt(cst_dbm);
}

bool decode_gate(double p_rx_w, double interference_w, double n0_w, double rst_dbm,
                 ReceptionModel mode, double capture_sinr_db);

}  // namespace aista
