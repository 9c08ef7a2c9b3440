#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "aista/runner.hpp"
#include "aista/scenario.hpp"

namespace fs = std::filesystem;
using namespace aista;

namespace {

struct RunFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::string out = "run";
    std::size_t seeds = 1;
    std::optional<std::string> trace;
    std::optional<std::string> checkpoint;
    std::optional<std::string> controller;
    bool frames = false;
    bool quiet = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_controller) {
    cmd->add_option("config", f.config, "Scenario JSON file (defaults when omitted)");
    cmd->add_option("--seed", f.seed, "Override the scenario seed");
    cmd->add_option("--epochs", f.epochs, "Override the number of epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "Output run directory")->capture_default_str();
    cmd->add_option("--seeds", f.seeds, "Run this many consecutive seeds in parallel")->check(CLI::PositiveNumber);
    cmd->add_option("--trace", f.trace, "Replay AI-STA traffic from a time_ms,bytes,direction CSV");
    cmd->add_option("--checkpoint", f.checkpoint, "Initial DQN agent checkpoint");
    if (with_controller) cmd->add_option("--controller", f.controller, "dqn | dsc | static");
    cmd->add_flag("--frames", f.frames, "Also write frames.csv");
    cmd->add_flag("--quiet", f.quiet, "No per-run summary on stdout");
}

Scenario resolve(const RunFlags& f, bool force_dqn) {
    Scenario s = f.config.empty() ? Scenario{} : load_scenario(f.config);
    if (f.seed) s.seed = *f.seed;
    if (f.epochs) s.epochs = *f.epochs;
    if (f.trace) s.traffic.trace_csv = *f.trace;
    if (f.controller) s.controller = parse_controller(*f.controller);
    if (force_dqn) s.controller = ControllerKind::Dqn;
    s.validate();
    return s;
}

void print_summary(const std::string& label, const RunResult& r) {
    std::printf("%s: F=%.4f S=%.3f Mb/s D=%.3f ms J=%.3f ms loss=%.4f reward=%.4f (final %zu: F=%.4f S=%.3f Mb/s)\n",
                label.c_str(), r.all.fairness, r.all.throughput_bps / 1e6, r.all.avg_delay_ms, r.all.jitter_ms,
                r.all.loss_rate, r.all.reward, r.final.epochs, r.final.fairness, r.final.throughput_bps / 1e6);
}

int run_command(const RunFlags& f, bool train) {
    const Scenario base = resolve(f, train);
    auto options_for = [&](const std::string& dir) {
        RunOptions o;
        o.out_dir = dir;
        o.write_frames = f.frames;
        o.checkpoint_in = f.checkpoint;
        if (base.controller == ControllerKind::Dqn) o.checkpoint_out = (fs::path(dir) / "agent.ckpt").string();
        return o;
    };
    if (f.seeds == 1) {
        const RunResult r = run_scenario(base, options_for(f.out));
        if (!f.quiet) print_summary(f.out, r);
        return 0;
    }

    std::vector<std::optional<RunResult>> results(f.seeds);
    std::vector<std::string> errors(f.seeds);
    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (std::size_t i = next++; i < f.seeds; i = next++) {
            Scenario s = base;
            s.seed = base.seed + i;
            const std::string dir = (fs::path(f.out) / ("seed_" + std::to_string(s.seed))).string();
            try {
                RunResult r = run_scenario(s, options_for(dir));
                r.packets.clear();
                r.frames.clear();
                if (!f.quiet) {
                    std::lock_guard lock(io);
                    print_summary(dir, r);
                }
                results[i] = std::move(r);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(f.seeds, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int rc = 0;
    std::string merged = "seed,scope,epochs,fairness,throughput_bps,avg_delay_ms,jitter_ms,loss_rate,reward\n";
    for (std::size_t i = 0; i < f.seeds; ++i) {
        if (!results[i]) {
            std::fprintf(stderr, "seed %llu failed: %s\n", static_cast<unsigned long long>(base.seed + i),
                         errors[i].c_str());
            rc = 1;
            continue;
        }
        for (const auto& [scope, m] : {std::pair{"all", results[i]->all}, std::pair{"final", results[i]->final}}) {
            merged += std::to_string(base.seed + i) + ',' + scope + ',' + std::to_string(m.epochs) + ',' +
                      format_double(m.fairness) + ',' + format_double(m.throughput_bps) + ',' +
                      format_double(m.avg_delay_ms) + ',' + format_double(m.jitter_ms) + ',' +
                      format_double(m.loss_rate) + ',' + format_double(m.reward) + '\n';
        }
    }
    fs::create_directories(f.out);
    write_text_file((fs::path(f.out) / "seeds.csv").string(), merged);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event 802.11 simulator with a DQN-controlled AI station"};
    app.require_subcommand(1);

    RunFlags sim_flags, train_flags;
    auto* sim = app.add_subcommand("simulate", "Run the scenario's controller and write a run directory");
    add_run_flags(sim, sim_flags, true);
    auto* train = app.add_subcommand("train", "Run the DQN controller and save its checkpoint");
    add_run_flags(train, train_flags, false);

    std::vector<std::string> dirs;
    std::string cmp_out;
    auto* cmp = app.add_subcommand("compare", "Compare the summaries of run directories");
    cmp->add_option("dirs", dirs, "Run directories")->required()->expected(2, -1);
    cmp->add_option("--out", cmp_out, "Write comparison.csv here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return run_command(sim_flags, false);
        if (*train) return run_command(train_flags, true);
        if (*cmp) {
            const Comparison c = compare_runs(dirs);
            std::fputs(comparison_table(c).c_str(), stdout);
            if (!cmp_out.empty()) write_text_file(cmp_out, comparison_csv(c));
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
