#include "aista/fairness.hpp"

#include <algorithm>
#include <stdexcept>

namespace aista {

DurationTable::DurationTable(MacAddress ap, std::span<const MacAddress> stations, SimTime window_start)
    : ap_(ap), window_start_(window_start) {
    for (MacAddress s : stations) entries_.emplace(s, 0);
}

DurationTable& process_control_frame(DurationTable& table, const Frame& frame, std::int64_t cts_airtime_us,
                                     std::int64_t sifs_us) {
    if (frame.kind != FrameKind::Rts && frame.kind != FrameKind::Cts) {
        throw std::invalid_argument("process_control_frame: only RTS and CTS frames are accounted");
    }
    if (frame.src != table.ap_) return table;
    if (table.has_last_exchange_ && table.last_exchange_ == frame.exchange) return table;
    auto it = table.entries_.find(frame.dst);
    if (it == table.entries_.end()) return table;
    if (frame.kind == FrameKind::Rts) {
        it->second += frame.duration_us;
    } else {
        it->second += cts_airtime_us + sifs_us + frame.duration_us;
    }
    table.last_exchange_ = frame.exchange;
    table.has_last_exchange_ = true;
    return table;
}

DurationTable& reset_window(DurationTable& table, SimTime now) {
    for (auto& [key, value] : table.entries_) value = 0;
    table.window_start_ = now;
    table.has_last_exchange_ = false;
    return table;
}

FairnessReport jain_index(std::span<const double> durations) {
    if (durations.empty()) throw std::invalid_argument("jain_index: empty table");
    FairnessReport r;
    r.n = durations.size();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double t : durations) {
        sum += t;
        sum_sq += t * t;
    }
    r.per_station_share.reserve(r.n);
    if (sum <= 0.0) {
        r.f = 1.0;
        r.per_station_share.assign(r.n, 0.0);
        return r;
    }
    const double n = static_cast<double>(r.n);
    r.f = std::clamp((sum * sum) / (n * sum_sq), 1.0 / n, 1.0);
    for (double t : durations) r.per_station_share.push_back(t / sum);
    return r;
}

FairnessReport jain_index(const DurationTable& table) {
    std::vector<double> t;
    t.reserve(table.size());
    for (const auto& [key, us] : table.entries()) t.push_back(static_cast<double>(us));
    return jain_index(t);
}

}  // namespace aista
