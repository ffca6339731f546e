#pragma once

#include <span>
#include <vector>

#include "qosnet/net_core.hpp"
#include "qosnet/rng.hpp"

namespace qosnet {

// Coordinate-wise minimum state for distributed sum estimation. Each node
// seeds `samples` exponential draws at rate equal to its own value; pairwise
// exchanges take elementwise minima, and the reciprocal of the sample mean
// of the minima estimates the network-wide sum.
struct GossipState {
    int node_count = 0;
    int samples = 0;
    int rounds_run = 0;
    std::vector<double> entries; // [node * samples + l]; +inf marks a zero value

    double entry(int node, int l) const { return entries[node * samples + l]; }
};

GossipState init_gossip(const std::vector<double>& values, int samples, Rng& rng);

enum class GossipGraph { Complete, Neighbors };

// Runs synchronous rounds; within a round nodes act in id order, each picking
// a uniform random partner (all others, or topology neighbors) and both sides
// keeping the elementwise minima.
void run_gossip(GossipState& state, int rounds, GossipGraph graph, const Topology* topo,
                Rng& rng);

// Reciprocal of the node's sample mean; 0 while any entry is still +inf.
double estimate_sum(const GossipState& state, int node);

// Samples needed for relative error delta with failure probability epsilon:
// ceil(3 * delta^-2 * ln(4 / epsilon)), both arguments in (0, 1/2).
long long required_samples(double delta, double epsilon);

double exact_sum(std::span<const double> values);

// Rounds for near-certain complete mixing: ceil(scale * ln(node_count)).
int default_rounds(int node_count, double scale = 10.0);

} // namespace qosnet
