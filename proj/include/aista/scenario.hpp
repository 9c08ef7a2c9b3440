#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aista/baselines.hpp"
#include "aista/channel.hpp"
#include "aista/dcf.hpp"
#include "aista/dqn.hpp"
#include "aista/network.hpp"
#include "aista/rlenv.hpp"
#include "aista/traffic.hpp"

namespace aista {

enum class ControllerKind : std::uint8_t { Dqn, Dsc, Static };
ControllerKind parse_controller(const std::string& s);
const char* to_string(ControllerKind c);

/// Generated layout: the AI-STA's AP at the origin with its stations inside
/// `bss_radius_m`; the other APs on a ring between `obss_min_m` and
/// `obss_max_m`, each with `obss_sta_count` stations. The own BSS gets the
/// remaining stations and its first station is the AI-STA.
struct TopologyConfig {
    int ap_count = 5;
    int sta_count = 14;
    int obss_sta_count = 2;
    double bss_radius_m = 10.0;
    double obss_min_m = 20.0;
    double obss_max_m = 40.0;
    /// When set, used verbatim instead of the generated layout.
    std::optional<std::vector<NodeSpec>> nodes;

    bool operator==(const TopologyConfig&) const = default;
};

struct TrafficConfig {
    BurstModel ai_uplink{SimTime::us(16'667), 3000, 500, 1500, std::nullopt};
    BurstModel ai_downlink{SimTime::us(16'667), 8000, 1000, 1500, std::nullopt};
    BurstModel legacy_downlink{SimTime::us(16'667), 8000, 1000, 1500, std::nullopt};
    BurstModel obss_downlink{SimTime::us(16'667), 8000, 1000, 1500, std::nullopt};
    std::optional<std::string> trace_csv;

    bool operator==(const TrafficConfig&) const = default;
};

struct Scenario {
    std::uint64_t seed = 1;
    std::size_t epochs = 500;
    SimTime epoch_len = SimTime::ms(100);
    ControllerKind controller = ControllerKind::Dqn;
    TopologyConfig topology{};
    RadioConfig radio{};
    MacTimings timings{};
    Thresholds defaults{};
    ThresholdBounds bounds{};
    QosTargets targets{};
    RewardWeights weights{};
    AgentConfig agent{};
    int lattice_l = 1;
    DscConfig dsc{};
    TrafficConfig traffic{};
    std::size_t final_k = 100;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Parses a JSON scenario; missing keys take their defaults, unknown keys and
/// out-of-range values are errors.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

/// Node list of the scenario (generated or explicit).
std::vector<NodeSpec> build_topology(const Scenario& s);

/// Everything the simulation needs, including the traffic flows.
SimulationConfig build_simulation(const Scenario& s);

}  // namespace aista
