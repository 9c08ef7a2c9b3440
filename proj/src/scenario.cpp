#include "aista/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aista {

using json = nlohmann::ordered_json;

ControllerKind parse_controller(const std::string& s) {
    if (s == "dqn") return ControllerKind::Dqn;
    if (s == "dsc") return ControllerKind::Dsc;
    if (s == "static") return ControllerKind::Static;
    throw std::invalid_argument("unknown controller '" + s + "' (expected dqn|dsc|static)");
}

const char* to_string(ControllerKind c) {
    switch (c) {
    case ControllerKind::Dqn: return "dqn";
    case ControllerKind::Dsc: return "dsc";
    case ControllerKind::Static: return "static";
    }
    return "?";
}

namespace {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reads keys of one JSON object and remembers which were consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section child(const char* key) {
        used_.insert(key);
        static const json empty = json::object();
        return Section(j_.contains(key) ? j_.at(key) : empty, path_ + key + ".");
    }

    const json* raw(const char* key) {
        used_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void number(const char* key, double& out) {
        if (const json* v = raw(key)) {
            if (!v->is_number()) throw ConfigError(where(key) + "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(where(key) + "must be finite");
        }
    }

    template <class Int>
    void integer(const char* key, Int& out, std::int64_t lo, std::int64_t hi) {
        if (const json* v = raw(key)) {
            if (!v->is_number_integer()) throw ConfigError(where(key) + "expected an integer");
            const auto x = v->get<std::int64_t>();
            if (x < lo || x > hi) {
                throw ConfigError(where(key) + "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            }
            out = static_cast<Int>(x);
        }
    }

    void seed(const char* key, std::uint64_t& out) {
        if (const json* v = raw(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(where(key) + "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void boolean(const char* key, bool& out) {
        if (const json* v = raw(key)) {
            if (!v->is_boolean()) throw ConfigError(where(key) + "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const char* key, std::string& out) {
        if (const json* v = raw(key)) {
            if (!v->is_string()) throw ConfigError(where(key) + "expected a string");
            out = v->get<std::string>();
        }
    }

    /// Microsecond value stored as exact nanoseconds.
    void micros(const char* key, SimTime& out) {
        double us = static_cast<double>(out.count()) / 1e3;
        number(key, us);
        if (us < 0) throw ConfigError(where(key) + "must be >= 0");
        out = SimTime(std::llround(us * 1e3));
    }

    void range(const char* key, Range& out) {
        if (const json* v = raw(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
                throw ConfigError(where(key) + "expected [min, max]");
            }
            out = Range{(*v)[0].get<double>(), (*v)[1].get<double>()};
            if (out.max < out.min) throw ConfigError(where(key) + "max below min");
        }
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.contains(key)) throw ConfigError("unknown configuration key '" + path_ + key + "'");
        }
    }

    std::string where(const char* key = nullptr) const {
        return "config " + (key ? path_ + key : (path_.empty() ? std::string("root") : path_)) + ": ";
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

void read_burst(Section sec, BurstModel& m) {
    sec.micros("interval_us", m.frame_interval);
    sec.integer("burst_bytes_mean", m.burst_bytes_mean, 0, 1'000'000'000);
    sec.integer("burst_bytes_jitter", m.burst_bytes_jitter, 0, 1'000'000'000);
    sec.integer("mtu_bytes", m.packet_mtu, 1, 65'535);
    if (sec.has("start_offset_us")) {
        SimTime t{};
        sec.micros("start_offset_us", t);
        m.start_offset = t;
    }
    sec.finish();
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(sec.where() + e.what());
    }
}

json burst_json(const BurstModel& m) {
    json j;
    j["interval_us"] = m.frame_interval.count() / 1e3;
    j["burst_bytes_mean"] = m.burst_bytes_mean;
    j["burst_bytes_jitter"] = m.burst_bytes_jitter;
    j["mtu_bytes"] = m.packet_mtu;
    if (m.start_offset) j["start_offset_us"] = m.start_offset->count() / 1e3;
    return j;
}

NodeRole parse_role(const std::string& s, const std::string& where) {
    if (s == "ap") return NodeRole::Ap;
    if (s == "sta") return NodeRole::Sta;
    throw ConfigError(where + "role must be ap or sta");
}

std::vector<NodeSpec> read_nodes(const json& arr) {
    if (!arr.is_array()) throw ConfigError("config topology.nodes: expected an array");
    std::vector<NodeSpec> nodes;
    std::vector<std::string> ap_names;
    std::map<std::string, MacAddress> index;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Section sec(arr[i], "topology.nodes[" + std::to_string(i) + "].");
        NodeSpec n;
        std::string role = "sta";
        std::string ap;
        sec.string("name", n.name);
        sec.string("role", role);
        sec.number("x_m", n.pos.x);
        sec.number("y_m", n.pos.y);
        sec.string("ap", ap);
        sec.boolean("ai", n.ai);
        sec.finish();
        if (n.name.empty()) n.name = "node" + std::to_string(i);
        if (index.contains(n.name)) throw ConfigError(sec.where() + "duplicate node name '" + n.name + "'");
        n.role = parse_role(role, sec.where("role"));
        index[n.name] = static_cast<MacAddress>(i);
        ap_names.push_back(ap);
        nodes.push_back(n);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "config topology.nodes[" + std::to_string(i) + "]: ";
        if (nodes[i].role == NodeRole::Ap) {
            if (!ap_names[i].empty()) throw ConfigError(where + "an AP cannot be associated");
            if (nodes[i].ai) throw ConfigError(where + "an AP cannot be the AI-STA");
            continue;
        }
        auto it = index.find(ap_names[i]);
        if (it == index.end() || nodes[it->second].role != NodeRole::Ap) {
            throw ConfigError(where + "station must name the AP it is associated with");
        }
        nodes[i].ap = it->second;
    }
    return nodes;
}

json nodes_json(const std::vector<NodeSpec>& nodes) {
    json arr = json::array();
    for (const NodeSpec& n : nodes) {
        json j;
        j["name"] = n.name;
        j["role"] = n.role == NodeRole::Ap ? "ap" : "sta";
        j["x_m"] = n.pos.x;
        j["y_m"] = n.pos.y;
        if (n.ap) j["ap"] = nodes.at(*n.ap).name;
        if (n.ai) j["ai"] = true;
        arr.push_back(j);
    }
    return arr;
}

Scenario from_json(const json& root) {
    Scenario s;
    Section top(root, "");
    top.seed("seed", s.seed);
    top.integer("epochs", s.epochs, 1, 100'000'000);
    double epoch_ms = s.epoch_len.count() / 1e6;
    top.number("epoch_ms", epoch_ms);
    if (!(epoch_ms > 0)) throw ConfigError(top.where("epoch_ms") + "must be positive");
    s.epoch_len = SimTime(std::llround(epoch_ms * 1e6));
    std::string controller = to_string(s.controller);
    top.string("controller", controller);
    try {
        s.controller = parse_controller(controller);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(top.where("controller") + e.what());
    }
    top.integer("final_k", s.final_k, 1, 100'000'000);
    top.integer("lattice_l", s.lattice_l, 1, 1000);

    {
        Section t = top.child("topology");
        auto& tp = s.topology;
        if (const json* nodes = t.raw("nodes")) {
            tp.nodes = read_nodes(*nodes);
            tp.ap_count = 0;
            tp.sta_count = 0;
            for (const auto& n : *tp.nodes) ++(n.role == NodeRole::Ap ? tp.ap_count : tp.sta_count);
        }
        t.integer("ap_count", tp.ap_count, 1, 1000);
        t.integer("sta_count", tp.sta_count, 1, 10000);
        t.integer("obss_sta_count", tp.obss_sta_count, 0, 1000);
        t.number("bss_radius_m", tp.bss_radius_m);
        t.number("obss_min_m", tp.obss_min_m);
        t.number("obss_max_m", tp.obss_max_m);
        t.finish();
    }
    {
        Section c = top.child("channel");
        auto& ch = s.radio.channel;
        c.number("alpha", ch.alpha);
        c.number("d0_m", ch.d0_m);
        c.number("n0_dbm", ch.n0_dbm);
        c.number("nakagami_m", ch.m_shape);
        c.boolean("fading", ch.fading);
        c.number("shadowing_sigma_db", ch.shadowing_sigma_db);
        std::string mode = to_string(s.radio.reception);
        c.string("reception_model", mode);
        try {
            s.radio.reception = parse_reception_model(mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(c.where("reception_model") + e.what());
        }
        c.number("capture_sinr_db", s.radio.capture_sinr_db);
        c.finish();
    }
    {
        Section m = top.child("mac");
        auto& t = s.timings;
        m.micros("slot_us", t.slot);
        m.micros("sifs_us", t.sifs);
        m.micros("difs_us", t.difs);
        m.micros("preamble_us", t.preamble);
        m.micros("cts_timeout_us", t.cts_timeout);
        m.micros("ack_timeout_us", t.ack_timeout);
        m.integer("cw_min", t.cw_min, 1, 1 << 20);
        m.integer("cw_max", t.cw_max, 1, 1 << 20);
        m.integer("retry_limit", t.retry_limit, 0, 1000);
        m.integer("rts_threshold_bytes", t.rts_threshold_bytes, 0, 1'000'000);
        double control = t.control_rate.kbps / 1e3, data = t.data_rate.kbps / 1e3;
        m.number("control_rate_mbps", control);
        m.number("data_rate_mbps", data);
        if (!(control > 0 && data > 0)) throw ConfigError(m.where() + "rates must be positive");
        t.control_rate = Rate::mbps(control);
        t.data_rate = Rate::mbps(data);
        m.integer("queue_capacity", t.queue_capacity, 1, 100'000'000);
        m.finish();
    }
    {
        Section th = top.child("thresholds");
        th.number("cst_dbm", s.defaults.cst_dbm);
        th.number("rst_dbm", s.defaults.rst_dbm);
        th.number("tx_power_dbm", s.defaults.tx_power_dbm);
        th.range("cst_range_dbm", s.bounds.cst);
        th.range("rst_range_dbm", s.bounds.rst);
        th.range("tx_power_range_dbm", s.bounds.tx_power);
        th.finish();
    }
    {
        Section q = top.child("qos");
        q.number("s_min_mbps", s.targets.s_min_mbps);
        q.number("d_max_ms", s.targets.d_max_ms);
        q.number("j_max_ms", s.targets.j_max_ms);
        q.number("ploss_max_fraction", s.targets.ploss_max);
        q.finish();
    }
    {
        Section r = top.child("reward");
        r.number("w_s", s.weights.w_s);
        r.number("w_d", s.weights.w_d);
        r.number("w_j", s.weights.w_j);
        r.number("w_ploss", s.weights.w_ploss);
        r.finish();
    }
    {
        Section a = top.child("agent");
        auto& ag = s.agent;
        a.number("gamma", ag.gamma);
        a.number("lr", ag.lr);
        a.number("epsilon", ag.epsilon);
        a.integer("batch", ag.batch, 1, 1'000'000);
        a.integer("buffer_capacity", ag.buffer_capacity, 1, 100'000'000);
        a.integer("sync_period", ag.sync_period, 1, 100'000'000);
        a.number("grad_clip", ag.grad_clip);
        if (const json* h = a.raw("hidden")) {
            if (!h->is_array()) throw ConfigError(a.where("hidden") + "expected an array of layer widths");
            ag.hidden.clear();
            for (const auto& v : *h) {
                if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
                    throw ConfigError(a.where("hidden") + "layer widths must be positive integers");
                }
                ag.hidden.push_back(v.get<std::size_t>());
            }
        }
        a.finish();
    }
    {
        Section d = top.child("dsc");
        d.number("margin_db", s.dsc.margin_db);
        d.integer("update_period_epochs", s.dsc.update_period, 1, 1'000'000);
        d.number("rssi_smoothing", s.dsc.rssi_smoothing);
        d.range("cst_range_dbm", s.dsc.cst_bounds);
        d.finish();
    }
    {
        Section tr = top.child("traffic");
        read_burst(tr.child("ai_uplink"), s.traffic.ai_uplink);
        read_burst(tr.child("ai_downlink"), s.traffic.ai_downlink);
        read_burst(tr.child("legacy_downlink"), s.traffic.legacy_downlink);
        read_burst(tr.child("obss_downlink"), s.traffic.obss_downlink);
        if (tr.has("trace_csv")) {
            std::string path;
            tr.string("trace_csv", path);
            s.traffic.trace_csv = path;
        }
        tr.finish();
    }
    top.finish();
    s.validate();
    return s;
}

}  // namespace

void Scenario::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("invalid scenario: " + m); };
    if (epochs == 0) fail("epochs must be >= 1");
    if (epoch_len <= SimTime{}) fail("epoch length must be positive");
    if (final_k == 0) fail("final_k must be >= 1");
    if (lattice_l < 1) fail("lattice_l must be >= 1");
    try {
        radio.channel.validate();
        timings.validate();
        targets.validate();
        weights.validate();
        agent.validate();
        dsc.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (!bounds.contains(defaults)) fail("default thresholds lie outside their ranges");
    if (!(radio.capture_sinr_db >= 0.0)) fail("capture SINR must be >= 0 dB");
    const auto& t = topology;
    if (t.nodes) {
        try {
            find_ai_sta(*t.nodes);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        int aps = 0, stas = 0;
        for (const auto& n : *t.nodes) ++(n.role == NodeRole::Ap ? aps : stas);
        if (aps != t.ap_count || stas != t.sta_count) fail("ap_count/sta_count disagree with the node list");
    } else {
        if (t.ap_count < 1) fail("ap_count must be >= 1");
        if (t.sta_count < 1 + t.obss_sta_count * (t.ap_count - 1)) {
            fail("sta_count leaves no station for the AI-STA's BSS");
        }
        if (!(t.bss_radius_m >= 1.0)) fail("bss_radius_m must be >= 1");
        if (!(t.obss_min_m > 0.0 && t.obss_max_m >= t.obss_min_m)) fail("need 0 < obss_min_m <= obss_max_m");
    }
}

Scenario parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text.empty() ? std::string("{}") : json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (root.is_null()) root = json::object();
    return from_json(root);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) text = "{}";
    return parse_scenario(text);
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["seed"] = s.seed;
    j["epochs"] = s.epochs;
    j["epoch_ms"] = s.epoch_len.count() / 1e6;
    j["controller"] = to_string(s.controller);
    j["final_k"] = s.final_k;
    j["lattice_l"] = s.lattice_l;

    json& t = j["topology"];
    t["ap_count"] = s.topology.ap_count;
    t["sta_count"] = s.topology.sta_count;
    t["obss_sta_count"] = s.topology.obss_sta_count;
    t["bss_radius_m"] = s.topology.bss_radius_m;
    t["obss_min_m"] = s.topology.obss_min_m;
    t["obss_max_m"] = s.topology.obss_max_m;
    if (s.topology.nodes) t["nodes"] = nodes_json(*s.topology.nodes);

    json& c = j["channel"];
    c["alpha"] = s.radio.channel.alpha;
    c["d0_m"] = s.radio.channel.d0_m;
    c["n0_dbm"] = s.radio.channel.n0_dbm;
    c["nakagami_m"] = s.radio.channel.m_shape;
    c["fading"] = s.radio.channel.fading;
    c["shadowing_sigma_db"] = s.radio.channel.shadowing_sigma_db;
    c["reception_model"] = to_string(s.radio.reception);
    c["capture_sinr_db"] = s.radio.capture_sinr_db;

    json& m = j["mac"];
    const auto& tm = s.timings;
    m["slot_us"] = tm.slot.count() / 1e3;
    m["sifs_us"] = tm.sifs.count() / 1e3;
    m["difs_us"] = tm.difs.count() / 1e3;
    m["preamble_us"] = tm.preamble.count() / 1e3;
    m["cts_timeout_us"] = tm.cts_timeout.count() / 1e3;
    m["ack_timeout_us"] = tm.ack_timeout.count() / 1e3;
    m["cw_min"] = tm.cw_min;
    m["cw_max"] = tm.cw_max;
    m["retry_limit"] = tm.retry_limit;
    m["rts_threshold_bytes"] = tm.rts_threshold_bytes;
    m["control_rate_mbps"] = tm.control_rate.kbps / 1e3;
    m["data_rate_mbps"] = tm.data_rate.kbps / 1e3;
    m["queue_capacity"] = tm.queue_capacity;

    json& th = j["thresholds"];
    th["cst_dbm"] = s.defaults.cst_dbm;
    th["rst_dbm"] = s.defaults.rst_dbm;
    th["tx_power_dbm"] = s.defaults.tx_power_dbm;
    th["cst_range_dbm"] = {s.bounds.cst.min, s.bounds.cst.max};
    th["rst_range_dbm"] = {s.bounds.rst.min, s.bounds.rst.max};
    th["tx_power_range_dbm"] = {s.bounds.tx_power.min, s.bounds.tx_power.max};

    json& q = j["qos"];
    q["s_min_mbps"] = s.targets.s_min_mbps;
    q["d_max_ms"] = s.targets.d_max_ms;
    q["j_max_ms"] = s.targets.j_max_ms;
    q["ploss_max_fraction"] = s.targets.ploss_max;

    json& r = j["reward"];
    r["w_s"] = s.weights.w_s;
    r["w_d"] = s.weights.w_d;
    r["w_j"] = s.weights.w_j;
    r["w_ploss"] = s.weights.w_ploss;

    json& a = j["agent"];
    a["gamma"] = s.agent.gamma;
    a["lr"] = s.agent.lr;
    a["epsilon"] = s.agent.epsilon;
    a["batch"] = s.agent.batch;
    a["buffer_capacity"] = s.agent.buffer_capacity;
    a["sync_period"] = s.agent.sync_period;
    a["grad_clip"] = s.agent.grad_clip;
    a["hidden"] = s.agent.hidden;

    json& d = j["dsc"];
    d["margin_db"] = s.dsc.margin_db;
    d["update_period_epochs"] = s.dsc.update_period;
    d["rssi_smoothing"] = s.dsc.rssi_smoothing;
    d["cst_range_dbm"] = {s.dsc.cst_bounds.min, s.dsc.cst_bounds.max};

    json& tr = j["traffic"];
    tr["ai_uplink"] = burst_json(s.traffic.ai_uplink);
    tr["ai_downlink"] = burst_json(s.traffic.ai_downlink);
    tr["legacy_downlink"] = burst_json(s.traffic.legacy_downlink);
    tr["obss_downlink"] = burst_json(s.traffic.obss_downlink);
    if (s.traffic.trace_csv) tr["trace_csv"] = *s.traffic.trace_csv;

    return j.dump(2) + "\n";
}

namespace {

Position random_in_disk(const Position& c, double radius, Rng& rng) {
    const double r = 1.0 + (radius - 1.0) * std::sqrt(rng.uniform());
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    return Position{c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

}  // namespace

std::vector<NodeSpec> build_topology(const Scenario& s) {
    if (s.topology.nodes) return *s.topology.nodes;
    const auto& t = s.topology;
    Rng rng(s.seed, streams::topology(0));
    std::vector<NodeSpec> nodes;
    std::vector<Position> ap_pos;
    nodes.push_back(NodeSpec{"ap0", NodeRole::Ap, {0.0, 0.0}, std::nullopt, false});
    ap_pos.push_back({0.0, 0.0});
    for (int k = 1; k < t.ap_count; ++k) {
        const double d = t.obss_min_m + (t.obss_max_m - t.obss_min_m) * rng.uniform();
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        const Position p{d * std::cos(a), d * std::sin(a)};
        nodes.push_back(NodeSpec{"ap" + std::to_string(k), NodeRole::Ap, p, std::nullopt, false});
        ap_pos.push_back(p);
    }
    const int own = t.sta_count - t.obss_sta_count * (t.ap_count - 1);
    int sta_index = 0;
    for (int i = 0; i < own; ++i) {
        nodes.push_back(NodeSpec{i == 0 ? "ai-sta" : "sta" + std::to_string(sta_index), NodeRole::Sta,
                                 random_in_disk(ap_pos[0], t.bss_radius_m, rng), MacAddress{0}, i == 0});
        if (i > 0) ++sta_index;
    }
    for (int k = 1; k < t.ap_count; ++k) {
        for (int i = 0; i < t.obss_sta_count; ++i) {
            nodes.push_back(NodeSpec{"sta" + std::to_string(sta_index++), NodeRole::Sta,
                                     random_in_disk(ap_pos[k], t.bss_radius_m, rng), static_cast<MacAddress>(k), false});
        }
    }
    return nodes;
}

SimulationConfig build_simulation(const Scenario& s) {
    s.validate();
    SimulationConfig c;
    c.nodes = build_topology(s);
    c.radio = s.radio;
    c.timings = s.timings;
    c.legacy_thresholds = s.defaults;
    c.ai_initial = s.defaults;
    c.bounds = s.bounds;
    c.epoch_len = s.epoch_len;
    c.targets = s.targets;
    c.weights = s.weights;
    c.lattice_l = s.lattice_l;
    c.seed = s.seed;
    if (s.traffic.trace_csv) c.trace = load_trace_csv(*s.traffic.trace_csv);

    const MacAddress ai = find_ai_sta(c.nodes);
    const MacAddress ai_ap = *c.nodes[ai].ap;
    c.flows.push_back(FlowAssignment{ai, ai_ap, s.traffic.ai_uplink, FlowDirection::Uplink, true});
    c.flows.push_back(FlowAssignment{ai_ap, ai, s.traffic.ai_downlink, FlowDirection::Downlink, true});
    for (MacAddress n = 0; n < c.nodes.size(); ++n) {
        if (n != ai && c.nodes[n].role == NodeRole::Sta && c.nodes[n].ap == ai_ap) {
            c.flows.push_back(FlowAssignment{ai_ap, n, s.traffic.legacy_downlink, FlowDirection::Downlink, false});
        }
    }
    Rng pick(s.seed, streams::topology(1));
    for (MacAddress a = 0; a < c.nodes.size(); ++a) {
        if (a == ai_ap || c.nodes[a].role != NodeRole::Ap) continue;
        std::vector<MacAddress> members;
        for (MacAddress n = 0; n < c.nodes.size(); ++n) {
            if (c.nodes[n].role == NodeRole::Sta && c.nodes[n].ap == a) members.push_back(n);
        }
        if (members.empty()) continue;
        const auto chosen = members[static_cast<std::size_t>(pick.uniform_int(0, static_cast<std::int64_t>(members.size()) - 1))];
        c.flows.push_back(FlowAssignment{a, chosen, s.traffic.obss_downlink, FlowDirection::Downlink, false});
    }
    return c;
}

}  // namespace aista
