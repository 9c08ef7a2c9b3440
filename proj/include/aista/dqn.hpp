#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aista/engine.hpp"

namespace aista {

/// Dense network with rectifier hidden layers and a linear output layer.
/// Parameters live in one flat vector: per layer, the weight matrix
/// (row-major, out x in) followed by the bias vector.
class QNetwork {
public:
    QNetwork() = default;
    /// Zero-initialized. `layers` = {input, hidden..., output}.
    explicit QNetwork(std::vector<std::size_t> layers);

    /// Weights and biases uniform in +-1/sqrt(fan_in).
    void initialize(Rng& rng);

    const std::vector<std::size_t>& layers() const { return layers_; }
    std::size_t input_dim() const { return layers_.front(); }
    std::size_t output_dim() const { return layers_.back(); }
    std::size_t parameter_count() const { return params_.size(); }
    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    std::vector<double> forward(std::span<const double> x) const;

    /// Gradient of dot(upstream, forward(x)) with respect to every parameter.
    std::vector<double> backward(std::span<const double> x, std::span<const double> upstream) const;

    bool operator==(const QNetwork&) const = default;

private:
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
    std::size_t bias_offset(std::size_t layer) const {
        return offsets_[layer] + layers_[layer] * layers_[layer + 1];
    }
    void forward_all(std::span<const double> x, std::vector<std::vector<double>>& pre,
                     std::vector<std::vector<double>>& act) const;

    std::vector<std::size_t> layers_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

struct Transition {
    std::vector<double> s;
    std::size_t a = 0;
    double r = 0.0;
    std::vector<double> s_next;
    bool operator==(const Transition&) const = default;
};

struct AgentConfig {
    double gamma = 0.8;
    double lr = 0.001;
    double epsilon = 0.1;
    std::size_t batch = 32;
    std::size_t buffer_capacity = 5000;
    std::size_t sync_period = 100;
    std::vector<std::size_t> hidden{64, 64};
    double grad_clip = 10.0;  ///< max L2 norm of one update; 0 disables

    void validate() const;
    bool operator==(const AgentConfig&) const = default;
};

/// r + gamma * max_a q_target(s_next, a).
double td_target(const Transition& tr, const QNetwork& target, double gamma);

struct TrainStats {
    double loss = 0.0;        ///< before the update
    double grad_norm = 0.0;   ///< before clipping
    bool clipped = false;
};

/// One SGD step on the mean squared TD error of the batch. Only the chosen
/// action's output receives gradient; the target network is read-only.
/// Throws std::runtime_error on a non-finite loss or parameters.
TrainStats train_step(QNetwork& net, const QNetwork& target, std::span<const Transition> batch, double gamma,
                      double lr, double grad_clip);

/// Epsilon-greedy; argmax ties go to the lowest index.
std::size_t select_action(std::span<const double> q, double epsilon, Rng& rng);

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition tr);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// i-th oldest transition.
    const Transition& at(std::size_t i) const;
    /// Uniform draw without replacement; empty while fewer than `batch` are stored.
    std::optional<std::vector<Transition>> sample(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  ///< index of the oldest entry once full
    std::vector<Transition> data_;
};

void sync_target(const QNetwork& net, QNetwork& target);

/// The decision problem the agent interacts with.
class Environment {
public:
    struct Feedback {
        std::vector<double> next_state;
        double reward = 0.0;
    };
    virtual ~Environment() = default;
    virtual std::size_t state_dim() const = 0;
    virtual std::size_t action_count() const = 0;
    virtual std::vector<double> reset() = 0;
    virtual Feedback step(std::size_t action) = 0;
};

class DqnAgent {
public:
    DqnAgent(std::size_t state_dim, std::size_t action_count, AgentConfig cfg, std::uint64_t seed);

    std::size_t act(std::span<const double> state);
    /// Stores the transition, trains when the buffer is warm, syncs the target
    /// network every sync_period iterations.
    std::optional<TrainStats> observe(Transition tr);

    const AgentConfig& config() const { return cfg_; }
    const QNetwork& main_net() const { return main_; }
    const QNetwork& target_net() const { return target_; }
    QNetwork& main_net() { return main_; }
    QNetwork& target_net() { return target_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    std::uint64_t iteration() const { return iteration_; }
    void set_iteration(std::uint64_t i) { iteration_ = i; }

private:
    AgentConfig cfg_;
    QNetwork main_;
    QNetwork target_;
    ReplayBuffer buffer_;
    Rng rng_;
    std::uint64_t iteration_ = 0;
};

struct LoopRecord {
    std::uint64_t iteration = 0;
    std::size_t action = 0;
    double reward = 0.0;
    std::optional<TrainStats> train;
};

struct LoopSummary {
    std::size_t transitions = 0;
    std::size_t train_steps = 0;
};

/// Online interaction: observe, act, step, store, learn.
LoopSummary train_loop(Environment& env, DqnAgent& agent, std::size_t steps,
                       const std::function<void(const LoopRecord&)>& on_step = {});

/// Text checkpoint with hex-float parameters so reloads are bit-exact.
void save_checkpoint(const std::string& path, const DqnAgent& agent);
/// Restores networks, config and iteration count into a fresh agent.
DqnAgent load_checkpoint(const std::string& path, std::uint64_t seed);

}  // namespace aista
