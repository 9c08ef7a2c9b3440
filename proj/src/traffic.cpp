#include "aista/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aista {

void BurstModel::validate() const {
    if (frame_interval <= SimTime{}) throw std::invalid_argument("burst interval must be positive");
    if (packet_mtu == 0) throw std::invalid_argument("packet mtu must be positive");
    if (burst_bytes_jitter > burst_bytes_mean) throw std::invalid_argument("burst jitter exceeds the mean");
    if (start_offset && *start_offset < SimTime{}) throw std::invalid_argument("negative start offset");
}

std::vector<std::uint32_t> fragment(std::uint32_t bytes, std::uint32_t mtu) {
    if (mtu == 0) throw std::invalid_argument("fragment: mtu must be positive");
    std::vector<std::uint32_t> out;
    out.reserve(bytes / mtu + 1);
    while (bytes > mtu) {
        out.push_back(mtu);
        bytes -= mtu;
    }
    if (bytes > 0) out.push_back(bytes);
    return out;
}

Burst next_burst(const BurstModel& model, Rng& rng, SimTime now) {
    std::int64_t size = model.burst_bytes_mean;
    if (model.burst_bytes_jitter > 0) {
        const std::int64_t j = model.burst_bytes_jitter;
        size += rng.uniform_int(-j, j);
    }
    Burst b;
    b.fire_time = now + model.frame_interval;
    b.sizes = fragment(static_cast<std::uint32_t>(std::max<std::int64_t>(size, 1)), model.packet_mtu);
    return b;
}

std::vector<TraceEntry> load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path);
    std::vector<TraceEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string t, b, d;
        if (!std::getline(ss, t, ',') || !std::getline(ss, b, ',') || !std::getline(ss, d)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected time_ms,bytes,direction");
        }
        if (lineno == 1 && t == "time_ms") continue;
        d.erase(std::remove_if(d.begin(), d.end(), [](unsigned char c) { return std::isspace(c); }), d.end());
        TraceEntry e;
        e.time = SimTime(static_cast<std::int64_t>(std::llround(std::stod(t) * 1e6)));
        e.bytes = static_cast<std::uint32_t>(std::stoul(b));
        if (d == "uplink") {
            e.direction = FlowDirection::Uplink;
        } else if (d == "downlink") {
            e.direction = FlowDirection::Downlink;
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": direction must be uplink|downlink");
        }
        out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(), [](const TraceEntry& a, const TraceEntry& b) { return a.time < b.time; });
    return out;
}

TrafficGenerator::TrafficGenerator(Scheduler& sched, std::uint64_t seed, Sink sink)
    : sched_(sched), seed_(seed), sink_(std::move(sink)) {}

void TrafficGenerator::add_flow(const FlowAssignment& flow) {
    flow.model.validate();
    sources_.push_back(Source{flow, Rng(seed_, streams::traffic(flow.src, flow.dst))});
    const std::size_t idx = sources_.size() - 1;
    Source& s = sources_.back();
    SimTime offset;
    if (s.flow.model.start_offset) {
        offset = *s.flow.model.start_offset;
    } else {
        offset = SimTime(s.rng.uniform_int(0, s.flow.model.frame_interval.count() - 1));
    }
    sched_.schedule(sched_.now() + offset, EventKind::TrafficArrival, [this, idx] { fire(idx); });
}

void TrafficGenerator::fire(std::size_t idx) {
    Source& s = sources_[idx];
    const Burst b = next_burst(s.flow.model, s.rng, sched_.now());
    ++bursts_;
    const FlowAssignment flow = s.flow;
    for (std::uint32_t bytes : b.sizes) sink_(flow, bytes);
    sched_.schedule(b.fire_time, EventKind::TrafficArrival, [this, idx] { fire(idx); });
}

void TrafficGenerator::add_trace(const std::vector<TraceEntry>& trace, const FlowAssignment& uplink,
                                 const FlowAssignment& downlink) {
    for (const TraceEntry& e : trace) {
        const FlowAssignment& flow = e.direction == FlowDirection::Uplink ? uplink : downlink;
        const auto sizes = fragment(e.bytes, flow.model.packet_mtu);
        sched_.schedule(std::max(e.time, sched_.now()), EventKind::TrafficArrival, [this, flow, sizes] {
            ++bursts_;
            for (std::uint32_t bytes : sizes) sink_(flow, bytes);
        });
    }
}

}  // namespace aista
