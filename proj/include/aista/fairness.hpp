#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "aista/dcf.hpp"
#include "aista/engine.hpp"

namespace aista {

/// Channel-occupation time per station of the observer's own BSS, built only
/// from RTS/CTS frames sent by the associated AP.
class DurationTable {
public:
    DurationTable(MacAddress ap, std::span<const MacAddress> stations, SimTime window_start = {});

    MacAddress ap() const { return ap_; }
    SimTime window_start() const { return window_start_; }
    const std::map<MacAddress, std::int64_t>& entries() const { return entries_; }
    std::int64_t duration_us(MacAddress sta) const { return entries_.at(sta); }
    std::size_t size() const { return entries_.size(); }

    bool operator==(const DurationTable&) const = default;

private:
    friend DurationTable& process_control_frame(DurationTable&, const Frame&, std::int64_t, std::int64_t);
    friend DurationTable& reset_window(DurationTable&, SimTime);

    MacAddress ap_;
    SimTime window_start_;
    std::map<MacAddress, std::int64_t> entries_;
    std::uint64_t last_exchange_ = 0;
    bool has_last_exchange_ = false;
};

/// Credits the receive address of an AP-originated RTS or CTS:
///   RTS: += duration
///   CTS: += cts_airtime + sifs + duration
/// Frames not sent by the AP, unknown keys, and a second control frame of the
/// same exchange leave the table unchanged. Non-control frames throw.
DurationTable& process_control_frame(DurationTable& table, const Frame& frame, std::int64_t cts_airtime_us,
                                     std::int64_t sifs_us);

DurationTable& reset_window(DurationTable& table, SimTime now);

struct FairnessReport {
    double f = 1.0;
    std::size_t n = 0;
    std::vector<double> per_station_share;
};

/// Jain's index (sum T)^2 / (n * sum T^2); an all-zero window counts as
/// perfectly fair.
FairnessReport jain_index(std::span<const double> durations);
FairnessReport jain_index(const DurationTable& table);

}  // namespace aista
