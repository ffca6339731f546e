#include "qosnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace qosnet {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::QosDistributed: return "qos_distributed";
        case PolicyKind::CentralizedMaxweight: return "centralized_maxweight";
        case PolicyKind::LeeStyle: return "lee_style";
        case PolicyKind::DdrpcStyle: return "ddrpc_style";
    }
    return "unknown";
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "qos_distributed") return PolicyKind::QosDistributed;
    if (name == "centralized_maxweight") return PolicyKind::CentralizedMaxweight;
    if (name == "lee_style") return PolicyKind::LeeStyle;
    if (name == "ddrpc_style") return PolicyKind::DdrpcStyle;
    throw ConfigError("policy.kind: unknown policy '" + name +
                      "' (expected qos_distributed, centralized_maxweight, lee_style, or "
                      "ddrpc_style)");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path, "unknown key '" + it.key() + "'");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
}

long long as_int(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d) return static_cast<long long>(d);
    }
    fail(path, "must be an integer");
}

std::uint64_t as_seed(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<std::uint64_t>(v.get<long long>());
    }
    fail(path, "must be a nonnegative integer");
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
}

TopologyConfig parse_topology(const json& obj) {
    check_keys(obj, "topology", {"nodes", "seed", "positions"});
    TopologyConfig out;
    const json* nodes = find(obj, "nodes");
    const json* positions = find(obj, "positions");
    if ((nodes == nullptr) == (positions == nullptr)) {
        fail("topology", "exactly one of 'nodes' or 'positions' is required");
    }
    if (nodes != nullptr) {
        out.nodes = static_cast<int>(as_int(*nodes, "topology.nodes"));
        if (out.nodes < 2) fail("topology.nodes", "must be >= 2");
    } else {
        if (!positions->is_array() || positions->size() < 2) {
            fail("topology.positions", "must be an array of at least 2 [x, y] pairs");
        }
        int idx = 0;
        for (const auto& p : *positions) {
            const std::string path = "topology.positions[" + std::to_string(idx) + "]";
            if (!p.is_array() || p.size() != 2) fail(path, "must be an [x, y] pair");
            Vec2 v{as_double(p[0], path + "[0]"), as_double(p[1], path + "[1]")};
            if (v.x < 0.0 || v.x > 1.0 || v.y < 0.0 || v.y > 1.0) {
                fail(path, "coordinates must lie in [0, 1]");
            }
            out.positions.push_back(v);
            ++idx;
        }
        out.nodes = static_cast<int>(out.positions.size());
    }
    if (const json* seed = find(obj, "seed")) out.seed = as_seed(*seed, "topology.seed");
    return out;
}

ChannelParams parse_channel(const json& obj) {
    check_keys(obj, "channel", {"path_loss_exponent", "reference_gain", "noise", "fading"});
    ChannelParams out;
    if (const json* v = find(obj, "path_loss_exponent")) {
        out.path_loss_exponent = as_double(*v, "channel.path_loss_exponent");
        if (!(out.path_loss_exponent > 0.0)) fail("channel.path_loss_exponent", "must be > 0");
    }
    if (const json* v = find(obj, "reference_gain")) {
        out.reference_gain = as_double(*v, "channel.reference_gain");
        if (!(out.reference_gain > 0.0)) fail("channel.reference_gain", "must be > 0");
    }
    if (const json* v = find(obj, "noise")) {
        out.noise = as_double(*v, "channel.noise");
        if (!(out.noise > 0.0)) fail("channel.noise", "must be > 0");
    }
    if (const json* v = find(obj, "fading")) out.fading = as_bool(*v, "channel.fading");
    return out;
}

FlowSpec parse_flow(const json& obj, int index, int node_count) {
    const std::string path = "flows[" + std::to_string(index) + "]";
    check_keys(obj, path, {"destination", "sources", "qos", "theta"});
    FlowSpec out;
    const json* dest = find(obj, "destination");
    if (dest == nullptr) fail(path + ".destination", "is required");
    out.destination = static_cast<int>(as_int(*dest, path + ".destination"));
    if (out.destination < 0 || out.destination >= node_count) {
        fail(path + ".destination", "must be a node id in [0, " + std::to_string(node_count) +
                                        ")");
    }
    out.arrival_rate.assign(node_count, 0.0);
    const json* sources = find(obj, "sources");
    if (sources == nullptr || !sources->is_array() || sources->empty()) {
        fail(path + ".sources", "must be a nonempty array of {node, rate}");
    }
    int sidx = 0;
    for (const auto& s : *sources) {
        const std::string spath = path + ".sources[" + std::to_string(sidx) + "]";
        if (!s.is_object()) fail(spath, "must be an object {node, rate}");
        check_keys(s, spath, {"node", "rate"});
        const json* node = find(s, "node");
        const json* rate = find(s, "rate");
        if (node == nullptr || rate == nullptr) fail(spath, "needs both 'node' and 'rate'");
        const int id = static_cast<int>(as_int(*node, spath + ".node"));
        if (id < 0 || id >= node_count) {
            fail(spath + ".node", "must be a node id in [0, " + std::to_string(node_count) + ")");
        }
        if (id == out.destination) {
            fail(spath + ".node", "a flow's destination cannot be one of its sources");
        }
        const double r = as_double(*rate, spath + ".rate");
        if (!(r >= 0.0)) fail(spath + ".rate", "must be >= 0");
        if (out.arrival_rate[id] != 0.0) fail(spath + ".node", "duplicate source node");
        out.arrival_rate[id] = r;
        ++sidx;
    }
    const json* qos = find(obj, "qos");
    if (qos != nullptr) {
        if (!qos->is_object()) fail(path + ".qos", "must be an object");
        const json* type = find(*qos, "type");
        if (type == nullptr) fail(path + ".qos.type", "is required");
        const std::string t = as_string(*type, path + ".qos.type");
        if (t == "mean_delay") {
            check_keys(*qos, path + ".qos", {"type", "target"});
            const json* target = find(*qos, "target");
            if (target == nullptr) fail(path + ".qos.target", "is required");
            out.qos.kind = QosKind::MeanDelay;
            out.qos.mean_delay_target = as_double(*target, path + ".qos.target");
            if (!(out.qos.mean_delay_target > 0.0)) fail(path + ".qos.target", "must be > 0");
        } else if (t == "hard_deadline") {
            check_keys(*qos, path + ".qos", {"type", "deadline", "drop_ratio"});
            const json* deadline = find(*qos, "deadline");
            const json* ratio = find(*qos, "drop_ratio");
            if (deadline == nullptr) fail(path + ".qos.deadline", "is required");
            if (ratio == nullptr) fail(path + ".qos.drop_ratio", "is required");
            out.qos.kind = QosKind::HardDeadline;
            out.qos.deadline = as_double(*deadline, path + ".qos.deadline");
            out.qos.drop_ratio = as_double(*ratio, path + ".qos.drop_ratio");
            if (!(out.qos.deadline > 0.0)) fail(path + ".qos.deadline", "must be > 0");
            if (!(out.qos.drop_ratio > 0.0 && out.qos.drop_ratio < 1.0)) {
                fail(path + ".qos.drop_ratio", "must lie in (0, 1)");
            }
        } else {
            fail(path + ".qos.type", "must be 'mean_delay' or 'hard_deadline'");
        }
    }
    if (const json* theta = find(obj, "theta")) {
        if (qos == nullptr) fail(path + ".theta", "only valid when qos is set");
        out.theta = as_double(*theta, path + ".theta");
        if (!(out.theta > 1.0)) fail(path + ".theta", "must be > 1");
    }
    return out;
}

PolicyConfig parse_policy(const json& obj) {
    PolicyConfig out;
    const json* kind = find(obj, "kind");
    if (kind == nullptr) fail("policy.kind", "is required");
    out.kind = policy_from_name(as_string(*kind, "policy.kind"));
    switch (out.kind) {
        case PolicyKind::QosDistributed:
            check_keys(obj, "policy", {"kind"});
            break;
        case PolicyKind::LeeStyle:
            check_keys(obj, "policy", {"kind", "election_probability"});
            if (const json* v = find(obj, "election_probability")) {
                out.election_probability = as_double(*v, "policy.election_probability");
                if (!(out.election_probability >= 0.0 && out.election_probability <= 1.0)) {
                    fail("policy.election_probability", "must lie in [0, 1]");
                }
            }
            break;
        case PolicyKind::DdrpcStyle:
            check_keys(obj, "policy", {"kind", "tx_probability"});
            if (const json* v = find(obj, "tx_probability")) {
                out.tx_probability = as_double(*v, "policy.tx_probability");
                if (!(out.tx_probability >= 0.0 && out.tx_probability <= 1.0)) {
                    fail("policy.tx_probability", "must lie in [0, 1]");
                }
            }
            break;
        case PolicyKind::CentralizedMaxweight:
            check_keys(obj, "policy", {"kind", "power_levels", "node_guard"});
            if (const json* v = find(obj, "power_levels")) {
                out.power_levels = static_cast<int>(as_int(*v, "policy.power_levels"));
                if (out.power_levels < 2) fail("policy.power_levels", "must be >= 2");
            }
            if (const json* v = find(obj, "node_guard")) {
                out.node_guard = static_cast<int>(as_int(*v, "policy.node_guard"));
                if (out.node_guard < 2) fail("policy.node_guard", "must be >= 2");
            }
            break;
    }
    return out;
}

GossipConfig parse_gossip(const json& obj) {
    check_keys(obj, "scheduler.gossip",
               {"exact", "delta", "epsilon", "samples", "rounds", "round_scale"});
    GossipConfig out;
    if (const json* v = find(obj, "exact")) out.exact = as_bool(*v, "scheduler.gossip.exact");
    if (const json* v = find(obj, "delta")) {
        out.delta = as_double(*v, "scheduler.gossip.delta");
        if (!(out.delta > 0.0 && out.delta < 0.5)) {
            fail("scheduler.gossip.delta", "must lie in (0, 0.5)");
        }
    }
    if (const json* v = find(obj, "epsilon")) {
        out.epsilon = as_double(*v, "scheduler.gossip.epsilon");
        if (!(out.epsilon > 0.0 && out.epsilon < 0.5)) {
            fail("scheduler.gossip.epsilon", "must lie in (0, 0.5)");
        }
    }
    if (const json* v = find(obj, "samples")) {
        out.samples = as_int(*v, "scheduler.gossip.samples");
        if (out.samples < 0) fail("scheduler.gossip.samples", "must be >= 0");
    }
    if (const json* v = find(obj, "rounds")) {
        out.rounds = static_cast<int>(as_int(*v, "scheduler.gossip.rounds"));
        if (out.rounds < 0) fail("scheduler.gossip.rounds", "must be >= 0");
    }
    if (const json* v = find(obj, "round_scale")) {
        out.round_scale = as_double(*v, "scheduler.gossip.round_scale");
        if (!(out.round_scale > 0.0)) fail("scheduler.gossip.round_scale", "must be > 0");
    }
    return out;
}

SchedulerConfig parse_scheduler(const json& obj) {
    check_keys(obj, "scheduler",
               {"sigma", "queue_cap", "alpha2", "max_power", "gossip", "eta_lag", "qos_window",
                "window_slots"});
    SchedulerConfig out;
    if (const json* v = find(obj, "sigma")) {
        out.sigma = as_double(*v, "scheduler.sigma");
        if (!(out.sigma >= 0.0 && out.sigma <= 1.0)) fail("scheduler.sigma", "must lie in [0, 1]");
    }
    if (const json* v = find(obj, "queue_cap")) {
        out.queue_cap = as_double(*v, "scheduler.queue_cap");
        if (!(out.queue_cap >= 1.0)) fail("scheduler.queue_cap", "must be >= 1");
    }
    if (const json* v = find(obj, "alpha2")) {
        out.alpha2 = as_double(*v, "scheduler.alpha2");
        if (!(out.alpha2 > 0.0 && out.alpha2 < 1.0)) fail("scheduler.alpha2", "must lie in (0, 1)");
    }
    if (const json* v = find(obj, "max_power")) {
        out.max_power = as_double(*v, "scheduler.max_power");
        if (!(out.max_power > 0.0)) fail("scheduler.max_power", "must be > 0");
    }
    if (const json* v = find(obj, "gossip")) {
        if (!v->is_object()) fail("scheduler.gossip", "must be an object");
        out.gossip = parse_gossip(*v);
    }
    if (const json* v = find(obj, "eta_lag")) {
        out.eta_lag = static_cast<int>(as_int(*v, "scheduler.eta_lag"));
        if (out.eta_lag < 0) fail("scheduler.eta_lag", "must be >= 0");
    }
    if (const json* v = find(obj, "qos_window")) {
        const std::string w = as_string(*v, "scheduler.qos_window");
        if (w == "cumulative") {
            out.window = QosWindow::Cumulative;
        } else if (w == "after_warmup") {
            out.window = QosWindow::AfterWarmup;
        } else if (w == "sliding") {
            out.window = QosWindow::Sliding;
        } else {
            fail("scheduler.qos_window", "must be 'cumulative', 'after_warmup', or 'sliding'");
        }
    }
    if (const json* v = find(obj, "window_slots")) {
        out.window_slots = as_int(*v, "scheduler.window_slots");
        if (out.window_slots < 1) fail("scheduler.window_slots", "must be >= 1");
    }
    if (out.window == QosWindow::Sliding && out.window_slots < 1) {
        fail("scheduler.window_slots", "required when qos_window is 'sliding'");
    }
    return out;
}

RunConfig parse_run(const json& obj) {
    check_keys(obj, "run",
               {"slots", "warmup", "seed", "packet_size", "stable_slope", "unstable_slope",
                "record_deliveries"});
    RunConfig out;
    if (const json* v = find(obj, "slots")) {
        out.slots = as_int(*v, "run.slots");
        if (out.slots < 0) fail("run.slots", "must be >= 0");
    }
    if (const json* v = find(obj, "warmup")) {
        out.warmup = as_int(*v, "run.warmup");
        if (out.warmup < 0) fail("run.warmup", "must be >= 0");
    }
    if (const json* v = find(obj, "seed")) out.seed = as_seed(*v, "run.seed");
    if (const json* v = find(obj, "packet_size")) {
        out.packet_size = as_double(*v, "run.packet_size");
        if (!(out.packet_size > 0.0)) fail("run.packet_size", "must be > 0");
    }
    if (const json* v = find(obj, "stable_slope")) {
        out.stable_slope = as_double(*v, "run.stable_slope");
        if (!(out.stable_slope > 0.0)) fail("run.stable_slope", "must be > 0");
    }
    if (const json* v = find(obj, "unstable_slope")) {
        out.unstable_slope = as_double(*v, "run.unstable_slope");
    }
    if (!(out.unstable_slope > out.stable_slope)) {
        fail("run.unstable_slope", "must be > run.stable_slope");
    }
    if (const json* v = find(obj, "record_deliveries")) {
        out.record_deliveries = as_bool(*v, "run.record_deliveries");
    }
    return out;
}

SweepConfig parse_sweep(const json& obj, const RunConfig& run, const PolicyConfig& policy) {
    check_keys(obj, "sweep", {"rates", "seeds", "policies"});
    SweepConfig out;
    const json* rates = find(obj, "rates");
    if (rates == nullptr || !rates->is_array() || rates->empty()) {
        fail("sweep.rates", "must be a nonempty array of rate multipliers");
    }
    int i = 0;
    for (const auto& r : *rates) {
        const double v = as_double(r, "sweep.rates[" + std::to_string(i) + "]");
        if (!(v > 0.0)) fail("sweep.rates[" + std::to_string(i) + "]", "must be > 0");
        out.rates.push_back(v);
        ++i;
    }
    if (const json* seeds = find(obj, "seeds")) {
        if (!seeds->is_array() || seeds->empty()) {
            fail("sweep.seeds", "must be a nonempty array of seeds");
        }
        i = 0;
        for (const auto& s : *seeds) {
            out.seeds.push_back(as_seed(s, "sweep.seeds[" + std::to_string(i) + "]"));
            ++i;
        }
    } else {
        out.seeds.push_back(run.seed);
    }
    if (const json* pol = find(obj, "policies")) {
        if (!pol->is_array() || pol->empty()) {
            fail("sweep.policies", "must be a nonempty array of policy names");
        }
        i = 0;
        for (const auto& p : *pol) {
            out.policies.push_back(
                policy_from_name(as_string(p, "sweep.policies[" + std::to_string(i) + "]")));
            ++i;
        }
    } else {
        out.policies.push_back(policy.kind);
    }
    return out;
}

BoundsConfig parse_bounds(const json& obj) {
    check_keys(obj, "bounds", {"rows"});
    const json* rows = find(obj, "rows");
    if (rows == nullptr || !rows->is_array() || rows->empty()) {
        fail("bounds.rows", "must be a nonempty array");
    }
    BoundsConfig out;
    int i = 0;
    for (const auto& r : *rows) {
        const std::string path = "bounds.rows[" + std::to_string(i) + "]";
        if (!r.is_object()) fail(path, "must be an object");
        check_keys(r, path,
                   {"alpha1", "alpha2", "beta1", "beta2", "nodes", "queue_cap", "alpha3", "beta3",
                    "epsilon_ball", "beta", "sigma"});
        BoundsRow row;
        const json* a1 = find(r, "alpha1");
        const json* a2 = find(r, "alpha2");
        if (a1 == nullptr) fail(path + ".alpha1", "is required");
        if (a2 == nullptr) fail(path + ".alpha2", "is required");
        row.alpha1 = as_double(*a1, path + ".alpha1");
        row.alpha2 = as_double(*a2, path + ".alpha2");
        if (!(row.alpha1 >= 0.0 && row.alpha1 < 1.0)) fail(path + ".alpha1", "must lie in [0, 1)");
        if (!(row.alpha2 >= 0.0 && row.alpha2 < 1.0)) fail(path + ".alpha2", "must lie in [0, 1)");
        if (const json* v = find(r, "beta1")) {
            row.beta1 = as_double(*v, path + ".beta1");
            if (!(*row.beta1 > 0.0)) fail(path + ".beta1", "must be > 0");
        }
        if (const json* v = find(r, "beta2")) {
            row.beta2 = as_double(*v, path + ".beta2");
            if (!(*row.beta2 >= 0.0)) fail(path + ".beta2", "must be >= 0");
        }
        if (const json* v = find(r, "nodes")) {
            row.nodes = static_cast<int>(as_int(*v, path + ".nodes"));
            if (*row.nodes < 2) fail(path + ".nodes", "must be >= 2");
        }
        if (const json* v = find(r, "queue_cap")) {
            row.queue_cap = as_double(*v, path + ".queue_cap");
            if (!(*row.queue_cap >= 1.0)) fail(path + ".queue_cap", "must be >= 1");
        }
        if (const json* v = find(r, "alpha3")) row.alpha3 = as_double(*v, path + ".alpha3");
        if (const json* v = find(r, "beta3")) {
            row.beta3 = as_double(*v, path + ".beta3");
            if (!(*row.beta3 > 0.0 && *row.beta3 < 1.0)) fail(path + ".beta3", "must lie in (0, 1)");
        }
        if (const json* v = find(r, "epsilon_ball")) {
            row.epsilon_ball = as_double(*v, path + ".epsilon_ball");
            if (!(*row.epsilon_ball > 0.0)) fail(path + ".epsilon_ball", "must be > 0");
        }
        if (const json* v = find(r, "beta")) {
            row.beta = as_double(*v, path + ".beta");
            if (!(*row.beta >= 0.0 && *row.beta < 1.0)) fail(path + ".beta", "must lie in [0, 1)");
        }
        if (const json* v = find(r, "sigma")) {
            row.sigma = as_double(*v, path + ".sigma");
            if (!(*row.sigma >= 0.0 && *row.sigma <= 1.0)) {
                fail(path + ".sigma", "must lie in [0, 1]");
            }
        }
        const bool derives_beta1 = row.nodes && row.queue_cap && row.alpha3 && row.beta3 &&
                                   row.epsilon_ball;
        if (!row.beta1 && !derives_beta1) {
            fail(path, "needs 'beta1' or all of nodes, queue_cap, alpha3, beta3, epsilon_ball");
        }
        if (row.beta1 && derives_beta1) {
            fail(path, "give 'beta1' directly or its inputs, not both");
        }
        const bool derives_beta2 = row.beta && row.sigma;
        if (!row.beta2 && !derives_beta2) {
            fail(path, "needs 'beta2' or both of beta and sigma");
        }
        if (row.beta2 && derives_beta2) {
            fail(path, "give 'beta2' directly or its inputs, not both");
        }
        out.rows.push_back(row);
        ++i;
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1;
        size_t col = 1;
        const size_t limit = std::min(text.size(), static_cast<size_t>(e.byte));
        for (size_t i = 0; i + 1 <= limit && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("config: parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    check_keys(root, "config",
               {"topology", "channel", "flows", "policy", "scheduler", "run", "sweep", "bounds",
                "output"});

    ExperimentConfig out;
    const json* topo = find(root, "topology");
    if (topo == nullptr) throw ConfigError("topology: section is required");
    if (!topo->is_object()) throw ConfigError("topology: must be an object");
    out.topology = parse_topology(*topo);

    if (const json* ch = find(root, "channel")) {
        if (!ch->is_object()) throw ConfigError("channel: must be an object");
        out.channel = parse_channel(*ch);
    }

    const json* flows = find(root, "flows");
    if (flows == nullptr || !flows->is_array() || flows->empty()) {
        throw ConfigError("flows: must be a nonempty array");
    }
    int idx = 0;
    for (const auto& f : *flows) {
        if (!f.is_object()) fail("flows[" + std::to_string(idx) + "]", "must be an object");
        out.flows.push_back(parse_flow(f, idx, out.topology.nodes));
        ++idx;
    }
    std::sort(out.flows.begin(), out.flows.end(),
              [](const FlowSpec& a, const FlowSpec& b) { return a.destination < b.destination; });
    for (size_t f = 1; f < out.flows.size(); ++f) {
        if (out.flows[f].destination == out.flows[f - 1].destination) {
            fail("flows", "duplicate destination " + std::to_string(out.flows[f].destination));
        }
    }

    if (const json* pol = find(root, "policy")) {
        if (!pol->is_object()) throw ConfigError("policy: must be an object");
        out.policy = parse_policy(*pol);
    }
    if (const json* sched = find(root, "scheduler")) {
        if (!sched->is_object()) throw ConfigError("scheduler: must be an object");
        out.scheduler = parse_scheduler(*sched);
    }
    if (const json* run = find(root, "run")) {
        if (!run->is_object()) throw ConfigError("run: must be an object");
        out.run = parse_run(*run);
    }
    if (const json* sweep = find(root, "sweep")) {
        if (!sweep->is_object()) throw ConfigError("sweep: must be an object");
        out.sweep = parse_sweep(*sweep, out.run, out.policy);
    }
    if (const json* bounds = find(root, "bounds")) {
        if (!bounds->is_object()) throw ConfigError("bounds: must be an object");
        out.bounds = parse_bounds(*bounds);
    }
    if (const json* output = find(root, "output")) {
        if (!output->is_object()) throw ConfigError("output: must be an object");
        check_keys(*output, "output", {"dir"});
        if (const json* dir = find(*output, "dir")) {
            out.output_dir = as_string(*dir, "output.dir");
        }
    }
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    ojson root;
    ojson topo;
    if (!config.topology.positions.empty()) {
        ojson pos = ojson::array();
        for (const Vec2& v : config.topology.positions) {
            pos.push_back(ojson::array({v.x, v.y}));
        }
        topo["positions"] = pos;
    } else {
        topo["nodes"] = config.topology.nodes;
    }
    topo["seed"] = config.topology.seed;
    root["topology"] = topo;

    root["channel"] = {
        {"path_loss_exponent", config.channel.path_loss_exponent},
        {"reference_gain", config.channel.reference_gain},
        {"noise", config.channel.noise},
        {"fading", config.channel.fading},
    };

    ojson flows = ojson::array();
    for (const FlowSpec& f : config.flows) {
        ojson flow;
        flow["destination"] = f.destination;
        ojson sources = ojson::array();
        for (int i = 0; i < static_cast<int>(f.arrival_rate.size()); ++i) {
            if (f.arrival_rate[i] > 0.0) {
                sources.push_back({{"node", i}, {"rate", f.arrival_rate[i]}});
            }
        }
        flow["sources"] = sources;
        if (f.qos.kind == QosKind::MeanDelay) {
            flow["qos"] = {{"type", "mean_delay"}, {"target", f.qos.mean_delay_target}};
            flow["theta"] = f.theta;
        } else if (f.qos.kind == QosKind::HardDeadline) {
            flow["qos"] = {{"type", "hard_deadline"},
                           {"deadline", f.qos.deadline},
                           {"drop_ratio", f.qos.drop_ratio}};
            flow["theta"] = f.theta;
        }
        flows.push_back(flow);
    }
    root["flows"] = flows;

    ojson policy;
    policy["kind"] = policy_name(config.policy.kind);
    switch (config.policy.kind) {
        case PolicyKind::LeeStyle:
            policy["election_probability"] = config.policy.election_probability;
            break;
        case PolicyKind::DdrpcStyle:
            policy["tx_probability"] = config.policy.tx_probability;
            break;
        case PolicyKind::CentralizedMaxweight:
            policy["power_levels"] = config.policy.power_levels;
            policy["node_guard"] = config.policy.node_guard;
            break;
        case PolicyKind::QosDistributed:
            break;
    }
    root["policy"] = policy;

    ojson gossip;
    gossip["exact"] = config.scheduler.gossip.exact;
    gossip["delta"] = config.scheduler.gossip.delta;
    gossip["epsilon"] = config.scheduler.gossip.epsilon;
    gossip["samples"] = config.scheduler.gossip.samples;
    gossip["rounds"] = config.scheduler.gossip.rounds;
    gossip["round_scale"] = config.scheduler.gossip.round_scale;
    ojson sched;
    sched["sigma"] = config.scheduler.sigma;
    sched["queue_cap"] = config.scheduler.queue_cap;
    sched["alpha2"] = config.scheduler.alpha2;
    sched["max_power"] = config.scheduler.max_power;
    sched["gossip"] = gossip;
    sched["eta_lag"] = config.scheduler.eta_lag;
    sched["qos_window"] = config.scheduler.window == QosWindow::Cumulative ? "cumulative"
                          : config.scheduler.window == QosWindow::AfterWarmup
                              ? "after_warmup"
                              : "sliding";
    if (config.scheduler.window == QosWindow::Sliding) {
        sched["window_slots"] = config.scheduler.window_slots;
    }
    root["scheduler"] = sched;

    root["run"] = {
        {"slots", config.run.slots},
        {"warmup", config.run.warmup},
        {"seed", config.run.seed},
        {"packet_size", config.run.packet_size},
        {"stable_slope", config.run.stable_slope},
        {"unstable_slope", config.run.unstable_slope},
        {"record_deliveries", config.run.record_deliveries},
    };

    if (config.sweep) {
        ojson sweep;
        sweep["rates"] = config.sweep->rates;
        sweep["seeds"] = config.sweep->seeds;
        ojson pols = ojson::array();
        for (PolicyKind k : config.sweep->policies) pols.push_back(policy_name(k));
        sweep["policies"] = pols;
        root["sweep"] = sweep;
    }
    if (config.bounds) {
        ojson rows = ojson::array();
        for (const BoundsRow& r : config.bounds->rows) {
            ojson row;
            row["alpha1"] = r.alpha1;
            row["alpha2"] = r.alpha2;
            if (r.beta1) row["beta1"] = *r.beta1;
            if (r.beta2) row["beta2"] = *r.beta2;
            if (r.nodes) row["nodes"] = *r.nodes;
            if (r.queue_cap) row["queue_cap"] = *r.queue_cap;
            if (r.alpha3) row["alpha3"] = *r.alpha3;
            if (r.beta3) row["beta3"] = *r.beta3;
            if (r.epsilon_ball) row["epsilon_ball"] = *r.epsilon_ball;
            if (r.beta) row["beta"] = *r.beta;
            if (r.sigma) row["sigma"] = *r.sigma;
            rows.push_back(row);
        }
        root["bounds"] = {{"rows", rows}};
    }
    if (!config.output_dir.empty()) {
        root["output"] = {{"dir", config.output_dir}};
    }
    return root.dump(2) + "\n";
}

} // namespace qosnet
