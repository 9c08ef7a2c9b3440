#include "aista/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace aista {

void DscConfig::validate() const {
    if (!(margin_db > 0.0)) throw std::invalid_argument("dsc margin must be positive");
    if (update_period < 1) throw std::invalid_argument("dsc update period must be >= 1");
    if (!(rssi_smoothing > 0.0 && rssi_smoothing <= 1.0)) throw std::invalid_argument("dsc smoothing must lie in (0, 1]");
    if (cst_bounds.max < cst_bounds.min) throw std::invalid_argument("dsc cst bounds are inverted");
}

double dsc_update(double smoothed_rssi_dbm, const DscConfig& cfg) {
    return std::clamp(smoothed_rssi_dbm - cfg.margin_db, cfg.cst_bounds.min, cfg.cst_bounds.max);
}

DscController::DscController(DscConfig cfg, Thresholds base) : cfg_(cfg), current_(base) {
    cfg_.validate();
}

Thresholds DscController::next(std::span<const double> rssi_dbm) {
    for (double x : rssi_dbm) {
        smoothed_ = smoothed_ ? (1.0 - cfg_.rssi_smoothing) * *smoothed_ + cfg_.rssi_smoothing * x : x;
        observed_in_period_ = true;
    }
    if (++epochs_in_period_ >= cfg_.update_period) {
        if (observed_in_period_) current_.cst_dbm = dsc_update(*smoothed_, cfg_);
        epochs_in_period_ = 0;
        observed_in_period_ = false;
    }
    return current_;
}

ActionPoint static_controller() {
    return ActionPoint{-82.0, -101.0, 16.0};
}

}  // namespace aista
