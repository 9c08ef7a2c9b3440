#include "aista/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aista {

QNetwork::QNetwork(std::vector<std::size_t> layers) : layers_(std::move(layers)) {
    if (layers_.size() < 2) throw std::invalid_argument("QNetwork needs an input and an output layer");
    for (std::size_t n : layers_) {
        if (n == 0) throw std::invalid_argument("QNetwork layer sizes must be positive");
    }
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        offsets_.push_back(total);
        total += layers_[l] * layers_[l + 1] + layers_[l + 1];
    }
    params_.assign(total, 0.0);
}

void QNetwork::initialize(Rng& rng) {
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layers_[l]));
        const std::size_t end = bias_offset(l) + layers_[l + 1];
        for (std::size_t i = weight_offset(l); i < end; ++i) params_[i] = bound * (2.0 * rng.uniform() - 1.0);
    }
}

void QNetwork::forward_all(std::span<const double> x, std::vector<std::vector<double>>& pre,
                           std::vector<std::vector<double>>& act) const {
    if (x.size() != input_dim()) {
        throw std::invalid_argument("QNetwork: input has " + std::to_string(x.size()) + " values, expected " +
                                    std::to_string(input_dim()));
    }
    const std::size_t n_layers = layers_.size() - 1;
    pre.resize(n_layers);
    act.resize(n_layers + 1);
    act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = layers_[l];
        const std::size_t out = layers_[l + 1];
        const double* w = params_.data() + weight_offset(l);
        const double* b = params_.data() + bias_offset(l);
        pre[l].assign(out, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            const double* row = w + o * in;
            for (std::size_t i = 0; i < in; ++i) z += row[i] * act[l][i];
            pre[l][o] = z;
        }
        act[l + 1] = pre[l];
        if (l + 1 < n_layers) {
            for (double& v : act[l + 1]) v = std::max(v, 0.0);
        }
    }
}

std::vector<double> QNetwork::forward(std::span<const double> x) const {
    std::vector<std::vector<double>> pre, act;
    forward_all(x, pre, act);
    return act.back();
}

std::vector<double> QNetwork::backward(std::span<const double> x, std::span<const double> upstream) const {
    if (upstream.size() != output_dim()) throw std::invalid_argument("QNetwork::backward: upstream size mismatch");
    std::vector<std::vector<double>> pre, act;
    forward_all(x, pre, act);
    std::vector<double> grad(params_.size(), 0.0);
    std::vector<double> delta(upstream.begin(), upstream.end());
    for (std::size_t l = layers_.size() - 1; l-- > 0;) {
        const std::size_t in = layers_[l];
        const std::size_t out = layers_[l + 1];
        if (l + 1 < layers_.size() - 1) {
            for (std::size_t o = 0; o < out; ++o) {
                if (pre[l][o] <= 0.0) delta[o] = 0.0;
            }
        }
        double* gw = grad.data() + weight_offset(l);
        double* gb = grad.data() + bias_offset(l);
        const double* w = params_.data() + weight_offset(l);
        std::vector<double> prev(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            if (d == 0.0) continue;
            for (std::size_t i = 0; i < in; ++i) {
                gw[o * in + i] += d * act[l][i];
                prev[i] += d * w[o * in + i];
            }
        }
        delta = std::move(prev);
    }
    return grad;
}

void AgentConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
    if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (batch == 0 || batch > buffer_capacity) throw std::invalid_argument("need 1 <= batch <= buffer capacity");
    if (sync_period == 0) throw std::invalid_argument("sync period must be >= 1");
    if (!(grad_clip >= 0.0)) throw std::invalid_argument("gradient clip must be >= 0");
    for (std::size_t h : hidden) {
        if (h == 0) throw std::invalid_argument("hidden layer sizes must be positive");
    }
}

double td_target(const Transition& tr, const QNetwork& target, double gamma) {
    const auto q = target.forward(tr.s_next);
    return tr.r + gamma * *std::max_element(q.begin(), q.end());
}

TrainStats train_step(QNetwork& net, const QNetwork& target, std::span<const Transition> batch, double gamma,
                      double lr, double grad_clip) {
    if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
    const double n = static_cast<double>(batch.size());
    std::vector<double> grad(net.parameter_count(), 0.0);
    std::vector<double> upstream(net.output_dim(), 0.0);
    double loss = 0.0;
    for (const Transition& tr : batch) {
        if (tr.a >= net.output_dim()) throw std::invalid_argument("train_step: action index out of range");
        const double y = td_target(tr, target, gamma);
        const double q = net.forward(tr.s)[tr.a];
        const double err = q - y;
        loss += err * err / n;
        if (err == 0.0) continue;
        std::fill(upstream.begin(), upstream.end(), 0.0);
        upstream[tr.a] = 2.0 * err / n;
        const auto g = net.backward(tr.s, upstream);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
    }
    if (!std::isfinite(loss)) throw std::runtime_error("train_step: loss is not finite (training diverged)");

    TrainStats st;
    st.loss = loss;
    double sq = 0.0;
    for (double g : grad) sq += g * g;
    st.grad_norm = std::sqrt(sq);
    double scale = 1.0;
    if (grad_clip > 0.0 && st.grad_norm > grad_clip) {
        scale = grad_clip / st.grad_norm;
        st.clipped = true;
    }
    auto& p = net.parameters();
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] -= lr * scale * grad[i];
        if (!std::isfinite(p[i])) throw std::runtime_error("train_step: parameters became non-finite");
    }
    return st;
}

std::size_t select_action(std::span<const double> q, double epsilon, Rng& rng) {
    if (q.empty()) throw std::invalid_argument("select_action: no q-values");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("select_action: epsilon outside [0, 1]");
    if (rng.uniform() < epsilon) return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(q.size()) - 1));
    return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
    data_.reserve(capacity);
}

void ReplayBuffer::push(Transition tr) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(tr));
        return;
    }
    data_[head_] = std::move(tr);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
    return data_[(head_ + i) % data_.size()];
}

std::optional<std::vector<Transition>> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    if (data_.size() < batch || batch == 0) return std::nullopt;
    std::vector<std::size_t> idx(data_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Transition> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                 static_cast<std::int64_t>(idx.size()) - 1));
        std::swap(idx[i], idx[j]);
        out.push_back(data_[idx[i]]);
    }
    return out;
}

void sync_target(const QNetwork& net, QNetwork& target) {
    if (net.layers() != target.layers()) throw std::invalid_argument("sync_target: shape mismatch");
    target.parameters() = net.parameters();
}

namespace {

std::vector<std::size_t> shape(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
    std::vector<std::size_t> l{in};
    l.insert(l.end(), hidden.begin(), hidden.end());
    l.push_back(out);
    return l;
}

}  // namespace

DqnAgent::DqnAgent(std::size_t state_dim, std::size_t action_count, AgentConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      main_(shape(state_dim, cfg_.hidden, action_count)),
      target_(main_.layers()),
      buffer_(cfg_.buffer_capacity),
      rng_(seed, streams::agent) {
    cfg_.validate();
    Rng init(seed, streams::agent + 1);
    main_.initialize(init);
    sync_target(main_, target_);
}

std::size_t DqnAgent::act(std::span<const double> state) {
    const auto q = main_.forward(state);
    return select_action(q, cfg_.epsilon, rng_);
}

std::optional<TrainStats> DqnAgent::observe(Transition tr) {
    buffer_.push(std::move(tr));
    std::optional<TrainStats> stats;
    if (auto batch = buffer_.sample(cfg_.batch, rng_)) {
        stats = train_step(main_, target_, *batch, cfg_.gamma, cfg_.lr, cfg_.grad_clip);
    }
    ++iteration_;
    if (iteration_ % cfg_.sync_period == 0) sync_target(main_, target_);
    return stats;
}

LoopSummary train_loop(Environment& env, DqnAgent& agent, std::size_t steps,
                       const std::function<void(const LoopRecord&)>& on_step) {
    LoopSummary summary;
    std::vector<double> s = env.reset();
    for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t a = agent.act(s);
        Environment::Feedback fb = env.step(a);
        LoopRecord rec;
        rec.iteration = agent.iteration();
        rec.action = a;
        rec.reward = fb.reward;
        rec.train = agent.observe(Transition{s, a, fb.reward, fb.next_state});
        ++summary.transitions;
        if (rec.train) ++summary.train_steps;
        if (on_step) on_step(rec);
        s = std::move(fb.next_state);
    }
    return summary;
}

namespace {

constexpr const char* checkpoint_magic = "aista-dqn-checkpoint";
constexpr int checkpoint_version = 1;

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hex(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::runtime_error("checkpoint: bad number '" + s + "'");
    return v;
}

void write_params(std::ostream& out, const char* name, const QNetwork& net) {
    out << name << ' ' << net.parameter_count() << '\n';
    for (double p : net.parameters()) out << hex(p) << '\n';
}

void read_params(std::istream& in, const char* name, QNetwork& net) {
    std::string tag;
    std::size_t count = 0;
    if (!(in >> tag >> count) || tag != name || count != net.parameter_count()) {
        throw std::runtime_error(std::string("checkpoint: malformed ") + name + " section");
    }
    for (double& p : net.parameters()) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("checkpoint: truncated parameters");
        p = parse_hex(tok);
    }
}

}  // namespace

void save_checkpoint(const std::string& path, const DqnAgent& agent) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    const AgentConfig& c = agent.config();
    const auto& layers = agent.main_net().layers();
    out << checkpoint_magic << ' ' << checkpoint_version << '\n';
    out << "layers " << layers.size();
    for (auto n : layers) out << ' ' << n;
    out << '\n';
    out << "gamma " << hex(c.gamma) << "\nlr " << hex(c.lr) << "\nepsilon " << hex(c.epsilon) << "\nbatch " << c.batch
        << "\nbuffer_capacity " << c.buffer_capacity << "\nsync_period " << c.sync_period << "\ngrad_clip "
        << hex(c.grad_clip) << "\niteration " << agent.iteration() << '\n';
    write_params(out, "main", agent.main_net());
    write_params(out, "target", agent.target_net());
    if (!out) throw std::runtime_error("error writing checkpoint " + path);
}

DqnAgent load_checkpoint(const std::string& path, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    std::string magic, key, tok;
    int version = 0;
    if (!(in >> magic >> version) || magic != checkpoint_magic) throw std::runtime_error("not a checkpoint: " + path);
    if (version != checkpoint_version) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));

    std::size_t n_layers = 0;
    if (!(in >> key >> n_layers) || key != "layers" || n_layers < 2) throw std::runtime_error("checkpoint: bad layers");
    std::vector<std::size_t> layers(n_layers);
    for (auto& l : layers) in >> l;

    AgentConfig c;
    std::uint64_t iteration = 0;
    auto expect = [&](const char* name) {
        if (!(in >> key >> tok) || key != name) throw std::runtime_error(std::string("checkpoint: expected ") + name);
        return tok;
    };
    c.gamma = parse_hex(expect("gamma"));
    c.lr = parse_hex(expect("lr"));
    c.epsilon = parse_hex(expect("epsilon"));
    c.batch = std::stoull(expect("batch"));
    c.buffer_capacity = std::stoull(expect("buffer_capacity"));
    c.sync_period = std::stoull(expect("sync_period"));
    c.grad_clip = parse_hex(expect("grad_clip"));
    iteration = std::stoull(expect("iteration"));
    c.hidden.assign(layers.begin() + 1, layers.end() - 1);

    DqnAgent agent(layers.front(), layers.back(), c, seed);
    read_params(in, "main", agent.main_net());
    read_params(in, "target", agent.target_net());
    agent.set_iteration(iteration);
    return agent;
}

}  // namespace aista
