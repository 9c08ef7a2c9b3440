#include "aista/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aista {

const char* to_string(FlowDirection d) {
    return d == FlowDirection::Uplink ? "uplink" : "downlink";
}

void PacketLedger::record_send(std::uint64_t id, SimTime t, std::uint32_t bytes, FlowDirection flow) {
    if (index_.contains(id)) throw std::invalid_argument("record_send: duplicate packet id");
    index_.emplace(id, records_.size());
    records_.push_back(PacketRecord{id, t, std::nullopt, std::nullopt, bytes, flow});
}

void PacketLedger::record_receive(std::uint64_t id, SimTime t) {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("record_receive: packet was never sent");
    PacketRecord& r = records_[it->second];
    if (r.recv_time) throw std::invalid_argument("record_receive: duplicate receive");
    if (t < r.send_time) throw std::invalid_argument("record_receive: receive precedes send");
    r.recv_time = t;
}

void PacketLedger::record_drop(std::uint64_t id, SimTime t) {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("record_drop: packet was never sent");
    PacketRecord& r = records_[it->second];
    if (r.recv_time || r.drop_time) return;
    r.drop_time = t;
}

QosSummary window_summary(std::span<const PacketRecord> records, SimTime start, SimTime end, SimTime as_of,
                          PendingPolicy pending) {
    if (end <= start) throw std::invalid_argument("window_summary: empty window span");
    QosSummary s;
    s.start = start;
    s.end = end;

    struct Arrival {
        SimTime recv;
        std::uint64_t id;
        double delay_ms;
    };
    std::vector<Arrival> arrivals;
    double bits = 0.0;
    for (const PacketRecord& r : records) {
        if (r.send_time < start || r.send_time >= end) continue;
        const bool received = r.recv_time && *r.recv_time <= as_of;
        const bool dropped = !received && r.drop_time && *r.drop_time <= as_of;
        if (!received && !dropped && pending == PendingPolicy::Exclude) continue;
        ++s.sent;
        if (!received) continue;
        ++s.received;
        bits += 8.0 * r.bytes;
        arrivals.push_back(Arrival{*r.recv_time, r.id, (*r.recv_time - r.send_time).millis()});
    }
    if (s.sent == 0) return s;

    s.throughput_bps = bits / (end - start).seconds();
    s.loss_rate = static_cast<double>(s.sent - s.received) / static_cast<double>(s.sent);
    if (arrivals.empty()) return s;

    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
        return a.recv != b.recv ? a.recv < b.recv : a.id < b.id;
    });
    double delay_sum = 0.0;
    double jitter_sum = 0.0;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        delay_sum += arrivals[i].delay_ms;
        if (i > 0) jitter_sum += std::abs(arrivals[i].delay_ms - arrivals[i - 1].delay_ms);
    }
    s.avg_delay_ms = delay_sum / static_cast<double>(arrivals.size());
    if (arrivals.size() > 1) s.jitter_ms = jitter_sum / static_cast<double>(arrivals.size() - 1);
    return s;
}

}  // namespace aista
