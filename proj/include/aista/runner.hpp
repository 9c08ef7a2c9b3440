#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aista/channel.hpp"
#include "aista/metrics.hpp"
#include "aista/network.hpp"
#include "aista/scenario.hpp"

namespace aista {

/// One per-epoch CSV row; QoS is the finalized view of the epoch.
struct EpochRow {
    std::size_t epoch = 0;
    QosSummary qos{};
    double fairness = 1.0;
    Thresholds applied{};
    double reward = 0.0;
    std::optional<std::size_t> action;
};

struct MetricMeans {
    std::size_t epochs = 0;
    double fairness = 0.0;
    double throughput_bps = 0.0;
    double avg_delay_ms = 0.0;
    double jitter_ms = 0.0;
    double loss_rate = 0.0;
    double reward = 0.0;
};

MetricMeans mean_of(const std::vector<EpochRow>& rows, std::size_t first, std::size_t last);

struct RunOptions {
    std::string out_dir;                      ///< empty: nothing is written
    bool write_frames = false;                ///< frames.csv with the AI-STA's view
    std::optional<std::string> checkpoint_in;   ///< initial DQN agent
    std::optional<std::string> checkpoint_out;  ///< DQN agent after the run
    std::function<void(const EpochRow&)> on_epoch;
};

struct RunResult {
    std::vector<EpochRow> rows;
    MetricMeans all{};
    MetricMeans final{};
    std::vector<PacketRecord> packets;
    std::vector<FrameLogRecord> frames;
};

/// Runs the scenario's controller for `epochs` epochs. When `out_dir` is set,
/// writes config.json, epochs.csv, summary.csv, packets.csv and optionally
/// frames.csv and a checkpoint.
RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

std::string format_double(double v);
std::string epochs_csv(const std::vector<EpochRow>& rows);
std::string summary_csv(const RunResult& r);
std::string packets_csv(const std::vector<PacketRecord>& packets);
std::string frames_csv(const std::vector<FrameLogRecord>& frames);

struct ComparisonRow {
    std::string scope;   ///< all | final
    std::string metric;
    std::vector<double> values;  ///< one per run
    std::vector<double> deltas;  ///< value - first run's value
};

struct Comparison {
    std::vector<std::string> runs;
    std::vector<ComparisonRow> rows;
};

/// Side-by-side means of run directories; throws on unreadable directories or
/// mismatched epoch counts.
Comparison compare_runs(const std::vector<std::string>& dirs);
std::string comparison_csv(const Comparison& c);
std::string comparison_table(const Comparison& c);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace aista
