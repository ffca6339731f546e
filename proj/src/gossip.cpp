#include "qosnet/gossip.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qosnet {

GossipState init_gossip(const std::vector<double>& values, int samples, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("gossip.samples: must be >= 1");
    const int n = static_cast<int>(values.size());
    if (n < 1) throw std::invalid_argument("gossip values: must be nonempty");
    for (double v : values) {
        if (!(v >= 0.0)) throw std::invalid_argument("gossip values: must be nonnegative");
    }
    GossipState state;
    state.node_count = n;
    state.samples = samples;
    state.entries.resize(static_cast<size_t>(n) * samples);
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < samples; ++l) {
            state.entries[i * samples + l] = values[i] > 0.0 ? rng.exponential(values[i]) : inf;
        }
    }
    return state;
}

void run_gossip(GossipState& state, int rounds, GossipGraph graph, const Topology* topo,
                Rng& rng) {
    if (rounds < 0) throw std::invalid_argument("gossip.rounds: must be >= 0");
    const int n = state.node_count;
    if (graph == GossipGraph::Neighbors && topo == nullptr) {
        throw std::invalid_argument("gossip: neighbor-restricted mode needs a topology");
    }
    if (n < 2) {
        state.rounds_run += rounds;
        return;
    }
    const int ls = state.samples;
    for (int r = 0; r < rounds; ++r) {
        for (int i = 0; i < n; ++i) {
            int j;
            if (graph == GossipGraph::Complete) {
                j = rng.uniform_int(n - 1);
                if (j >= i) ++j;
            } else {
                const auto& nb = topo->neighbors[i];
                if (nb.empty()) continue;
                j = nb[rng.uniform_int(static_cast<int>(nb.size()))];
            }
            double* a = &state.entries[i * ls];
            double* b = &state.entries[j * ls];
            for (int l = 0; l < ls; ++l) {
                const double m = a[l] < b[l] ? a[l] : b[l];
                a[l] = m;
                b[l] = m;
            }
        }
    }
    state.rounds_run += rounds;
}

double estimate_sum(const GossipState& state, int node) {
    double total = 0.0;
    for (int l = 0; l < state.samples; ++l) total += state.entry(node, l);
    if (!std::isfinite(total)) return 0.0;
    const double mean = total / state.samples;
    if (mean <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / mean;
}

long long required_samples(double delta, double epsilon) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw std::invalid_argument("gossip.delta: must lie in (0, 0.5)");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("gossip.epsilon: must lie in (0, 0.5)");
    }
    return static_cast<long long>(std::ceil(3.0 / (delta * delta) * std::log(4.0 / epsilon)));
}

double exact_sum(std::span<const double> values) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

int default_rounds(int node_count, double scale) {
    if (node_count < 2) throw std::invalid_argument("gossip rounds: node count must be >= 2");
    if (!(scale > 0.0)) throw std::invalid_argument("gossip.round_scale: must be > 0");
    return static_cast<int>(std::ceil(scale * std::log(static_cast<double>(node_count))));
}

} // namespace qosnet
