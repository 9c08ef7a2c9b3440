#pragma once

#include <optional>
#include <span>

#include "aista/channel.hpp"
#include "aista/rlenv.hpp"

namespace aista {

struct DscConfig {
    double margin_db = 25.0;
    int update_period = 1;         ///< epochs
    double rssi_smoothing = 0.1;   ///< EWMA weight of a new sample, dB domain
    Range cst_bounds{-100.0, -20.0};

    void validate() const;
    bool operator==(const DscConfig&) const = default;
};

/// CST = smoothed RSSI - margin, clamped to the CST bounds.
double dsc_update(double smoothed_rssi_dbm, const DscConfig& cfg);

/// Dynamic sensitivity control: tracks the RSSI of the associated AP and sets
/// the CST a fixed margin below it. RST and power stay at their base values.
class DscController {
public:
    DscController(DscConfig cfg, Thresholds base);

    /// Feeds one epoch of RSSI samples and returns the thresholds for the next epoch.
    Thresholds next(std::span<const double> rssi_dbm);

    const Thresholds& current() const { return current_; }
    std::optional<double> smoothed_rssi() const { return smoothed_; }

private:
    DscConfig cfg_;
    Thresholds current_;
    std::optional<double> smoothed_;
    bool observed_in_period_ = false;
    int epochs_in_period_ = 0;
};

/// The legacy operating point (-82, -101, 16) dBm.
ActionPoint static_controller();

}  // namespace aista
