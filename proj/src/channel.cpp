#include "aista/channel.hpp"

#include <stdexcept>

namespace aista {

void ChannelParams::validate() const {
    if (!(alpha >= 2.0 && alpha <= 4.0)) throw std::invalid_argument("alpha must lie in [2, 4]");
    if (!(d0_m > 0.0)) throw std::invalid_argument("d0_m must be positive");
    if (!(m_shape >= 1.0 && m_shape <= 2.0)) throw std::invalid_argument("nakagami_m must lie in [1, 2]");
    if (!std::isfinite(n0_dbm)) throw std::invalid_argument("n0_dbm must be finite");
    if (!(shadowing_sigma_db >= 0.0)) throw std::invalid_argument("shadowing_sigma_db must be >= 0");
}

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

ReceptionModel parse_reception_model(const std::string& s) {
    if (s == "power") return ReceptionModel::PowerThreshold;
    if (s == "sinr") return ReceptionModel::SinrThreshold;
    throw std::invalid_argument("unknown reception model '" + s + "' (expected power|sinr)");
}

const char* to_string(ReceptionModel m) {
    return m == ReceptionModel::PowerThreshold ? "power" : "sinr";
}

double path_gain(double d_m, const ChannelParams& p) {
    if (!(d_m > 0.0)) throw std::invalid_argument("path_gain: distance must be positive");
    if (d_m <= p.d0_m) return 1.0;
    return std::pow(d_m / p.d0_m, -p.alpha);
}

namespace {

// Marsaglia & Tsang, valid for shape >= 1; unit scale.
double gamma_unit_scale(double shape, Rng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample_fading(double m_shape, Rng& rng) {
    if (!(m_shape >= 0.5)) throw std::invalid_argument("sample_fading: shape must be >= 0.5");
    double g;
    if (m_shape >= 1.0) {
        g = gamma_unit_scale(m_shape, rng);
    } else {
        // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
        const double boosted = gamma_unit_scale(m_shape + 1.0, rng);
        double u;
        do {
            u = rng.uniform();
        } while (u == 0.0);
        g = boosted * std::pow(u, 1.0 / m_shape);
    }
    return g / m_shape;
}

double sample_shadowing(double sigma_db, Rng& rng) {
    if (sigma_db == 0.0) return 1.0;
    return db_to_linear(sigma_db * rng.normal());
}

double received_power(double tx_power_dbm, double d_m, double fading, const ChannelParams& p) {
    return dbm_to_watt(tx_power_dbm) * path_gain(d_m, p) * fading;
}

LinkSample link_sample(double tx_power_dbm, double d_m, double fading, const ChannelParams& p) {
    LinkSample s;
    s.tx_power_dbm = tx_power_dbm;
    s.path_gain = path_gain(d_m, p);
    s.fading_gain = fading;
    s.rx_power_w = dbm_to_watt(tx_power_dbm) * s.path_gain * s.fading_gain;
    return s;
}

double aggregate_interference(std::span<const InterfererSample> interferers,
                              const ChannelParams& p) {
    double total = 0.0;
    for (const auto& x : interferers) total += received_power(x.tx_power_dbm, x.distance_m, x.fading, p);
    return total;
}

bool decode_gate(double p_rx_w, double interference_w, double n0_w, double rst_dbm,
                 ReceptionModel mode, double capture_sinr_db) {
    const double gamma = sinr(p_rx_w, interference_w, n0_w);
    switch (mode) {
    case ReceptionModel::PowerThreshold:
        return p_rx_w >= dbm_to_watt(rst_dbm) && gamma >= db_to_linear(capture_sinr_db);
    case ReceptionModel::SinrThreshold:
        return gamma >= db_to_linear(rst_dbm);
    }
    return false;
}

}  // namespace aista
