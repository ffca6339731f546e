#pragma once

#include <vector>

#include "qosnet/net_core.hpp"
#include "qosnet/scheduler.hpp"

namespace qosnet {

struct CentralizedParams {
    int power_levels = 5; // grid {0, ..., p_max} per active transmitter
    int node_guard = 6;   // enumeration refuses larger networks
    int max_links = 0;    // 0 means up to floor(n / 2)
    double p_max = 1.0;
};

// Exhaustive maxweight oracle: enumerates every one-role-per-node link set and
// every power-grid assignment, scoring by the raw backlog-differential
// weighted rate sum. Ties keep the first (lexicographically smallest)
// configuration in enumeration order.
Schedule centralized_maxweight(const QueueMatrix& queues, const ChannelState& channel,
                               const std::vector<FlowSpec>& flows,
                               const CentralizedParams& params);

// Objective the oracle maximizes, for an arbitrary schedule under the same
// channel and queues.
double maxweight_objective(const QueueMatrix& queues, const Schedule& schedule);

struct DdrpcParams {
    double tx_probability = 0.5;
    double p_max = 1.0;
};

// Memoryless baseline: every node elects transmitter with fixed probability;
// backlogged transmitters send at full power toward their best-differential
// neighbor, collisions resolve to a uniform random winner, and nothing is
// retained across slots.
SlotDecision plan_ddrpc(NetState& state, const std::vector<FlowSpec>& flows,
                        const Topology& topo, const ChannelState& channel,
                        const DdrpcParams& params, Rng& rng);

struct LeeParams {
    double election_probability = 0.5;
};

// Queue-blind election variant: fixed-probability elections, raw backlog
// weights, and the same pairing and pick-and-compare machinery as the
// distributed scheduler.
SlotDecision plan_lee(NetState& state, const std::vector<FlowSpec>& flows, const Topology& topo,
                      const ChannelState& channel, const SchedulerParams& params,
                      const LeeParams& lee, Rng& rng);

} // namespace qosnet
