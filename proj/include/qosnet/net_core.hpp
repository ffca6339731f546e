#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "qosnet/rng.hpp"

namespace qosnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Node layout plus the one-hop neighbor relation (complete graph by default).
struct Topology {
    int node_count = 0;
    std::vector<Vec2> positions;
    std::vector<std::vector<int>> neighbors; // sorted, symmetric, no self loops

    double distance(int i, int j) const;
};

// Uniform random positions on the unit square, complete neighbor relation.
Topology build_topology(int node_count, std::uint64_t seed);

// Explicit positions (must be pairwise distinct), complete neighbor relation.
Topology make_topology(std::vector<Vec2> positions);

struct ChannelParams {
    double path_loss_exponent = 3.0;
    double reference_gain = 1.0;
    double noise = 1e-3;
    bool fading = true; // unit-mean exponential gain per ordered pair per slot
};

// Per-slot link gains; gains[tx * n + rx] holds the power gain tx -> rx.
struct ChannelState {
    int node_count = 0;
    long long slot = 0;
    std::vector<double> gains;
    std::vector<double> noise; // per receiver

    double gain(int tx, int rx) const { return gains[tx * node_count + rx]; }
};

ChannelState sample_channel(const Topology& topo, const ChannelParams& params,
                            long long slot, Rng& rng);

enum class QosKind { None, MeanDelay, HardDeadline };

struct QosCriterion {
    QosKind kind = QosKind::None;
    double mean_delay_target = 0.0; // MeanDelay: mean delay must stay at or below this
    double deadline = 0.0;          // HardDeadline: slots a packet may spend in flight
    double drop_ratio = 0.0;        // HardDeadline: tolerated fraction of late packets
};

// Destination-aggregated traffic class; the flow id is its destination node.
struct FlowSpec {
    int destination = 0;
    std::vector<double> arrival_rate; // packets/slot per source node; zero at destination
    QosCriterion qos;
    double theta = 10.0; // quadratic priority factor, active while the criterion is missed

    bool has_qos() const { return qos.kind != QosKind::None; }
};

struct Packet {
    int flow = 0; // flow index into the flow list
    long long birth_slot = 0;
};

// Per-(node, flow) FIFO queues; destination queues stay empty.
class QueueMatrix {
public:
    QueueMatrix() = default;
    QueueMatrix(int nodes, int flows);

    int nodes() const { return nodes_; }
    int flows() const { return flows_; }

    std::deque<Packet>& at(int node, int flow) { return q_[node * flows_ + flow]; }
    const std::deque<Packet>& at(int node, int flow) const { return q_[node * flows_ + flow]; }

    long long length(int node, int flow) const {
        return static_cast<long long>(q_[node * flows_ + flow].size());
    }
    long long node_total(int node) const;
    long long flow_total(int flow) const;
    long long total() const;

private:
    int nodes_ = 0;
    int flows_ = 0;
    std::vector<std::deque<Packet>> q_;
};

struct Link {
    int tx = -1;
    int rx = -1;
    int flow = 0;
    double weight = 0.0; // backlog differential used when the link was scored
    double rate = 0.0;   // bits/slot under the schedule's powers and channel
};

// One-link-per-node schedule: powers per node, nonzero only for paired transmitters.
struct Schedule {
    std::vector<Link> links; // sorted by transmitter
    std::vector<double> power;

    double weighted_rate() const;
};

// Shannon rate per link under simultaneous transmission: every other link's
// transmitter contributes interference at the receiver.
std::vector<double> sinr_rates(const std::vector<double>& power, std::span<const Link> links,
                               const ChannelState& channel);

struct ArrivalBatch {
    int flows = 0;
    std::vector<long long> count; // [node * flows + flow]
    long long total = 0;

    long long at(int node, int flow) const { return count[node * flows + flow]; }
};

// Independent Poisson batch per (source, flow); sources with zero rate draw nothing.
ArrivalBatch generate_arrivals(const std::vector<FlowSpec>& flows, long long slot, Rng& rng);

struct Delivery {
    int flow = 0;
    long long birth_slot = 0;
    long long deliver_slot = 0;
};

struct SlotFlows {
    std::vector<long long> mu_in;  // packets routed in, per (node, flow)
    std::vector<long long> mu_out; // packets served out, per (node, flow)
    std::vector<Delivery> deliveries;
};

// Applies one slot of queue dynamics: serve scheduled links from the
// pre-arrival state, deliver packets reaching their destination, then enqueue
// arrivals. Arrivals become servable from the next slot, so every delivered
// packet has delay >= 1. Links with nonpositive weight or rate move nothing.
SlotFlows step_queues(QueueMatrix& queues, const Schedule& schedule, const ArrivalBatch& arrivals,
                      const std::vector<FlowSpec>& flows, long long slot, double packet_size);

struct BacklogDelta {
    long long delta = 0; // max over flows of (q_from - q_to), clamped at zero
    int flow = 0;        // argmax flow index; ties resolve to the lowest index
};

BacklogDelta differential_backlog(const QueueMatrix& queues, int from, int to);

} // namespace qosnet
