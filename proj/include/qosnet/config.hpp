#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosnet/net_core.hpp"

namespace qosnet {

// Parse or validation failure; the message names the offending key and the
// violated constraint.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PolicyKind { QosDistributed, CentralizedMaxweight, LeeStyle, DdrpcStyle };

const char* policy_name(PolicyKind kind);
PolicyKind policy_from_name(const std::string& name);

// Which deliveries feed the QoS violation flags: everything since slot zero,
// everything since the warmup boundary, or a sliding window of recent slots.
enum class QosWindow { Cumulative, AfterWarmup, Sliding };

struct TopologyConfig {
    int nodes = 0;
    std::uint64_t seed = 1;
    std::vector<Vec2> positions; // empty means seeded uniform placement
};

struct GossipConfig {
    bool exact = false;   // skip gossip, use exact network sums
    double delta = 0.2;   // relative error target
    double epsilon = 0.1; // failure probability target
    long long samples = 0; // direct override; 0 derives from (delta, epsilon)
    int rounds = 0;        // direct override; 0 derives from round_scale * ln(nodes)
    double round_scale = 10.0;
};

struct SchedulerConfig {
    double sigma = 0.999;
    double queue_cap = 1e5;
    double alpha2 = 0.1;
    double max_power = 1.0;
    GossipConfig gossip;
    int eta_lag = 0;
    QosWindow window = QosWindow::AfterWarmup;
    long long window_slots = 0; // sliding mode only
};

struct PolicyConfig {
    PolicyKind kind = PolicyKind::QosDistributed;
    double election_probability = 0.5; // lee_style
    double tx_probability = 0.5;       // ddrpc_style
    int power_levels = 5;              // centralized_maxweight
    int node_guard = 6;                // centralized_maxweight
};

struct RunConfig {
    long long slots = 200000; // measurement slots
    long long warmup = 10000;
    std::uint64_t seed = 1;
    double packet_size = 0.1;       // rate units per packet
    double stable_slope = 0.01;     // packets/slot
    double unstable_slope = 0.1;    // packets/slot
    bool record_deliveries = false; // keep the full delivery log in memory
};

struct SweepConfig {
    std::vector<double> rates; // multipliers on the configured arrival rates
    std::vector<std::uint64_t> seeds;
    std::vector<PolicyKind> policies;
};

// One row of the bound calculator table. The floor parameters derive beta1
// unless it is given directly; (beta, sigma) derive beta2 likewise.
struct BoundsRow {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    std::optional<double> beta1;
    std::optional<double> beta2;
    std::optional<int> nodes;
    std::optional<double> queue_cap;
    std::optional<double> alpha3;
    std::optional<double> beta3;
    std::optional<double> epsilon_ball;
    std::optional<double> beta;
    std::optional<double> sigma;
};

struct BoundsConfig {
    std::vector<BoundsRow> rows;
};

struct ExperimentConfig {
    TopologyConfig topology;
    ChannelParams channel;
    std::vector<FlowSpec> flows; // sorted by destination
    PolicyConfig policy;
    SchedulerConfig scheduler;
    RunConfig run;
    std::optional<SweepConfig> sweep;
    std::optional<BoundsConfig> bounds;
    std::string output_dir;
};

// Parses and validates the JSON experiment description. Unknown keys are
// rejected; every error message names the key and the violated constraint.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// Canonical JSON rendering; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

} // namespace qosnet
