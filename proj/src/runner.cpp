#include "aista/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "aista/baselines.hpp"
#include "aista/dqn.hpp"
#include "aista/rlenv.hpp"

namespace aista {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MetricMeans mean_of(const std::vector<EpochRow>& rows, std::size_t first, std::size_t last) {
    MetricMeans m;
    last = std::min(last, rows.size());
    for (std::size_t i = first; i < last; ++i) {
        const EpochRow& r = rows[i];
        m.fairness += r.fairness;
        m.throughput_bps += r.qos.throughput_bps;
        m.avg_delay_ms += r.qos.avg_delay_ms;
        m.jitter_ms += r.qos.jitter_ms;
        m.loss_rate += r.qos.loss_rate;
        m.reward += r.reward;
        ++m.epochs;
    }
    if (m.epochs > 0) {
        const double n = static_cast<double>(m.epochs);
        m.fairness /= n;
        m.throughput_bps /= n;
        m.avg_delay_ms /= n;
        m.jitter_ms /= n;
        m.loss_rate /= n;
        m.reward /= n;
    }
    return m;
}

namespace {

/// Adapts the simulation to the agent interface and keeps every epoch result.
class EnvAdapter : public Environment {
public:
    explicit EnvAdapter(AiStaEnv& env) : env_(env) {}

    std::size_t state_dim() const override { return StateVec::dim; }
    std::size_t action_count() const override { return env_.lattice().size(); }
    std::vector<double> reset() override { return AiStaEnv::initial_state().values(); }
    Feedback step(std::size_t action) override {
        results.push_back(env_.step(action));
        const EpochResult& r = results.back();
        return Feedback{r.state.values(), r.reward.reward};
    }

    std::vector<EpochResult> results;

private:
    AiStaEnv& env_;
};

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
    SimulationConfig cfg = build_simulation(s);
    cfg.record_frames = opt.write_frames;
    AiStaEnv env(cfg);

    std::vector<EpochResult> results;
    results.reserve(s.epochs);
    std::unique_ptr<DqnAgent> agent;

    switch (s.controller) {
    case ControllerKind::Dqn: {
        if (opt.checkpoint_in) {
            agent = std::make_unique<DqnAgent>(load_checkpoint(*opt.checkpoint_in, s.seed));
            if (agent->main_net().input_dim() != StateVec::dim || agent->main_net().output_dim() != env.lattice().size()) {
                throw std::invalid_argument("checkpoint network shape does not match the scenario");
            }
        } else {
            agent = std::make_unique<DqnAgent>(StateVec::dim, env.lattice().size(), s.agent, s.seed);
        }
        EnvAdapter adapter(env);
        train_loop(adapter, *agent, s.epochs);
        results = std::move(adapter.results);
        break;
    }
    case ControllerKind::Dsc: {
        DscController dsc(s.dsc, s.defaults);
        Thresholds t = s.defaults;
        for (std::size_t k = 0; k < s.epochs; ++k) {
            results.push_back(env.step_thresholds(t));
            t = dsc.next(results.back().ap_rssi_dbm);
        }
        break;
    }
    case ControllerKind::Static: {
        const Thresholds t = static_controller().thresholds();
        for (std::size_t k = 0; k < s.epochs; ++k) results.push_back(env.step_thresholds(t));
        break;
    }
    }
    env.drain();

    RunResult out;
    out.rows.reserve(results.size());
    for (const EpochResult& r : results) {
        EpochRow row;
        row.epoch = r.epoch;
        row.qos = env.finalized_summary(r.epoch);
        row.fairness = r.fairness.f;
        row.applied = r.applied;
        row.reward = r.reward.reward;
        row.action = r.action;
        if (opt.on_epoch) opt.on_epoch(row);
        out.rows.push_back(row);
    }
    out.all = mean_of(out.rows, 0, out.rows.size());
    const std::size_t k = std::min(s.final_k, out.rows.size());
    out.final = mean_of(out.rows, out.rows.size() - k, out.rows.size());
    out.packets = env.ledger().records();
    if (opt.write_frames) out.frames = env.network().frame_log();

    if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);
    if (opt.checkpoint_out && agent) save_checkpoint(*opt.checkpoint_out, *agent);
    if (!opt.out_dir.empty()) {
        const fs::path dir(opt.out_dir);
        write_text_file((dir / "config.json").string(), serialize_scenario(s));
        write_text_file((dir / "epochs.csv").string(), epochs_csv(out.rows));
        write_text_file((dir / "summary.csv").string(), summary_csv(out));
        write_text_file((dir / "packets.csv").string(), packets_csv(out.packets));
        if (opt.write_frames) write_text_file((dir / "frames.csv").string(), frames_csv(out.frames));
    }
    return out;
}

std::string epochs_csv(const std::vector<EpochRow>& rows) {
    std::string s =
        "epoch,throughput_bps,avg_delay_ms,jitter_ms,loss_rate,fairness,cst_dbm,rst_dbm,power_dbm,reward,sent,"
        "received,action\n";
    for (const EpochRow& r : rows) {
        s += std::to_string(r.epoch) + ',' + format_double(r.qos.throughput_bps) + ',' +
             format_double(r.qos.avg_delay_ms) + ',' + format_double(r.qos.jitter_ms) + ',' +
             format_double(r.qos.loss_rate) + ',' + format_double(r.fairness) + ',' +
             format_double(r.applied.cst_dbm) + ',' + format_double(r.applied.rst_dbm) + ',' +
             format_double(r.applied.tx_power_dbm) + ',' + format_double(r.reward) + ',' +
             std::to_string(r.qos.sent) + ',' + std::to_string(r.qos.received) + ',' +
             (r.action ? std::to_string(*r.action) : std::string()) + '\n';
    }
    return s;
}

namespace {

constexpr const char* summary_header = "scope,epochs,fairness,throughput_bps,avg_delay_ms,jitter_ms,loss_rate,reward\n";

std::string summary_line(const char* scope, const MetricMeans& m) {
    return std::string(scope) + ',' + std::to_string(m.epochs) + ',' + format_double(m.fairness) + ',' +
           format_double(m.throughput_bps) + ',' + format_double(m.avg_delay_ms) + ',' +
           format_double(m.jitter_ms) + ',' + format_double(m.loss_rate) + ',' + format_double(m.reward) + '\n';
}

std::string opt_ns(const std::optional<SimTime>& t) { return t ? std::to_string(t->count()) : std::string(); }

}  // namespace

std::string summary_csv(const RunResult& r) {
    return summary_header + summary_line("all", r.all) + summary_line("final", r.final);
}

std::string packets_csv(const std::vector<PacketRecord>& packets) {
    std::string s = "id,flow,bytes,send_ns,recv_ns,drop_ns\n";
    for (const PacketRecord& p : packets) {
        s += std::to_string(p.id) + ',' + to_string(p.flow) + ',' + std::to_string(p.bytes) + ',' +
             std::to_string(p.send_time.count()) + ',' + opt_ns(p.recv_time) + ',' + opt_ns(p.drop_time) + '\n';
    }
    return s;
}

std::string frames_csv(const std::vector<FrameLogRecord>& frames) {
    std::string s = "time_ns,type,kind,src,dst,duration_us,payload_bytes,exchange,packet_id,observer,outcome\n";
    for (const FrameLogRecord& r : frames) {
        s += std::to_string(r.time.count()) + ',' + to_string(r.type) + ',' + to_string(r.frame.kind) + ',' +
             std::to_string(r.frame.src) + ',' + std::to_string(r.frame.dst) + ',' +
             std::to_string(r.frame.duration_us) + ',' + std::to_string(r.frame.payload_bytes) + ',' +
             std::to_string(r.frame.exchange) + ',' + std::to_string(r.frame.packet_id) + ',' +
             std::to_string(r.observer) + ',' + to_string(r.outcome) + '\n';
    }
    return s;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

struct SummaryFile {
    MetricMeans all;
    MetricMeans final;
};

double parse_num(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw std::runtime_error(where + ": bad number '" + s + "'");
    return v;
}

SummaryFile read_summary(const std::string& dir) {
    const std::string path = (fs::path(dir) / "summary.csv").string();
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    if (line + '\n' != summary_header) throw std::runtime_error(path + ": unexpected summary schema");
    SummaryFile f;
    bool have_all = false, have_final = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = split(line, ',');
        if (c.size() != 8) throw std::runtime_error(path + ": expected 8 columns");
        MetricMeans m;
        m.epochs = static_cast<std::size_t>(parse_num(c[1], path));
        m.fairness = parse_num(c[2], path);
        m.throughput_bps = parse_num(c[3], path);
        m.avg_delay_ms = parse_num(c[4], path);
        m.jitter_ms = parse_num(c[5], path);
        m.loss_rate = parse_num(c[6], path);
        m.reward = parse_num(c[7], path);
        if (c[0] == "all") {
            f.all = m;
            have_all = true;
        } else if (c[0] == "final") {
            f.final = m;
            have_final = true;
        } else {
            throw std::runtime_error(path + ": unknown scope '" + c[0] + "'");
        }
    }
    if (!have_all || !have_final) throw std::runtime_error(path + ": missing all/final rows");
    return f;
}

std::size_t count_epoch_rows(const std::string& dir) {
    const std::string path = (fs::path(dir) / "epochs.csv").string();
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    if (line.rfind("epoch,throughput_bps,", 0) != 0) throw std::runtime_error(path + ": unexpected epochs schema");
    std::size_t n = 0;
    while (std::getline(in, line)) n += !line.empty();
    return n;
}

}  // namespace

Comparison compare_runs(const std::vector<std::string>& dirs) {
    if (dirs.size() < 2) throw std::invalid_argument("compare needs at least two run directories");
    std::vector<SummaryFile> files;
    std::size_t epochs = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const std::size_t n = count_epoch_rows(dirs[i]);
        SummaryFile f = read_summary(dirs[i]);
        if (f.all.epochs != n) throw std::runtime_error(dirs[i] + ": summary and epochs.csv disagree");
        if (i == 0) epochs = n;
        if (n != epochs) {
            throw std::runtime_error("epoch counts differ: " + dirs[0] + " has " + std::to_string(epochs) + ", " +
                                     dirs[i] + " has " + std::to_string(n));
        }
        files.push_back(f);
    }
    Comparison c;
    c.runs = dirs;
    using Field = double MetricMeans::*;
    const std::pair<const char*, Field> metrics[] = {
        {"fairness", &MetricMeans::fairness},     {"throughput_bps", &MetricMeans::throughput_bps},
        {"avg_delay_ms", &MetricMeans::avg_delay_ms}, {"jitter_ms", &MetricMeans::jitter_ms},
        {"loss_rate", &MetricMeans::loss_rate},   {"reward", &MetricMeans::reward},
    };
    for (const char* scope : {"all", "final"}) {
        for (const auto& [name, field] : metrics) {
            ComparisonRow row;
            row.scope = scope;
            row.metric = name;
            for (const SummaryFile& f : files) {
                const MetricMeans& m = std::string(scope) == "all" ? f.all : f.final;
                row.values.push_back(m.*field);
            }
            for (double v : row.values) row.deltas.push_back(v - row.values.front());
            c.rows.push_back(row);
        }
    }
    return c;
}

std::string comparison_csv(const Comparison& c) {
    std::string s = "scope,metric";
    for (std::size_t i = 0; i < c.runs.size(); ++i) s += ",run" + std::to_string(i);
    for (std::size_t i = 1; i < c.runs.size(); ++i) s += ",delta" + std::to_string(i);
    s += '\n';
    for (const ComparisonRow& r : c.rows) {
        s += r.scope + ',' + r.metric;
        for (double v : r.values) s += ',' + format_double(v);
        for (std::size_t i = 1; i < r.deltas.size(); ++i) s += ',' + format_double(r.deltas[i]);
        s += '\n';
    }
    return s;
}

std::string comparison_table(const Comparison& c) {
    std::string s;
    for (std::size_t i = 0; i < c.runs.size(); ++i) s += "run" + std::to_string(i) + " = " + c.runs[i] + '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-6s %-15s", "scope", "metric");
    s += buf;
    for (std::size_t i = 0; i < c.runs.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %14s", ("run" + std::to_string(i)).c_str());
        s += buf;
    }
    for (std::size_t i = 1; i < c.runs.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %14s", ("delta" + std::to_string(i)).c_str());
        s += buf;
    }
    s += '\n';
    for (const ComparisonRow& r : c.rows) {
        std::snprintf(buf, sizeof buf, "%-6s %-15s", r.scope.c_str(), r.metric.c_str());
        s += buf;
        for (double v : r.values) {
            std::snprintf(buf, sizeof buf, " %14.6g", v);
            s += buf;
        }
        for (std::size_t i = 1; i < r.deltas.size(); ++i) {
            std::snprintf(buf, sizeof buf, " %+14.6g", r.deltas[i]);
            s += buf;
        }
        s += '\n';
    }
    return s;
}

}  // namespace aista
