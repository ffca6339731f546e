#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "qosnet/gossip.hpp"
#include "qosnet/net_core.hpp"

namespace qosnet {

struct GossipSizing {
    long long samples = 277;
    int rounds = 24;
};

struct SchedulerParams {
    double sigma = 0.999;    // per-slot probability of QoS-weighted backlogs
    double queue_cap = 1e5;  // cap on the virtual queue entering election
    double alpha2 = 0.1;     // retention discount in the schedule comparison
    double p_max = 1.0;
    bool exact_sums = false; // bypass gossip and use exact network sums
    GossipSizing gossip;
    int eta_lag = 0;         // extra slots before refreshed QoS flags take effect
};

// Per-flow violation flags: 1 while the flow's QoS criterion is missed.
struct QosFlags {
    std::vector<std::uint8_t> violated;
};

enum class Role : std::uint8_t { Receiver = 0, Transmitter = 1 };

// Per-flow backlog weight: quadratic (theta * x^2) while a QoS flow is in
// violation, linear otherwise; non-QoS flows are always linear.
double priority_weight(double backlog, bool qos_flow, bool violated, double theta);

// Node backlog aggregated over flows under priority weighting; with
// qos_weighting false every flow counts linearly.
double virtual_queue(const QueueMatrix& queues, int node, const std::vector<FlowSpec>& flows,
                     const QosFlags& eta, bool qos_weighting);

// Independent election: node i transmits with probability min(u_i / u_star, 1).
// A zero u_i forces receiver; a nonpositive u_star forces all receivers.
std::vector<Role> elect_roles(std::span<const double> u, double u_star, Rng& rng);

struct Pairing {
    std::vector<std::pair<int, int>> links; // (tx, rx), sorted by tx
    std::vector<int> rtp_target;            // per node; -1 for receivers and idle nodes
};

// Transmitters request a uniform random neighbor; each receiver with at least
// one request pairs with a uniform random requester. Unpaired transmitters idle.
Pairing pair_links(std::span<const Role> roles, const Topology& topo, Rng& rng);

// Backlog differential of a fixed flow across a link, under the slot's
// weighting mode (chi = 1 applies priority weights, chi = 0 is raw), clamped
// at zero.
double link_weight(const QueueMatrix& queues, const std::vector<FlowSpec>& flows,
                   const QosFlags& eta, int tx, int rx, int flow, int chi, bool qos_weighting);

struct FlowChoice {
    int flow = 0;
    double weight = 0.0;
};

// Argmax of link_weight over flows; ties resolve to the lowest flow index.
FlowChoice select_flow(int tx, int rx, const QueueMatrix& queues,
                       const std::vector<FlowSpec>& flows, const QosFlags& eta, int chi,
                       bool qos_weighting);

// Delivery statistics snapshot for one flow over the active evaluation window.
struct FlowWindowStats {
    long long delivered = 0;
    long long delay_sum = 0;
    long long late = 0; // deliveries with delay exceeding the flow's deadline
};

// Recomputes violation flags from empirical delivery statistics. A mean-delay
// flow is violated while its mean delay exceeds the target; a deadline flow
// while its late fraction exceeds the tolerated ratio. Flows without
// deliveries stay compliant.
QosFlags update_qos_flags(const std::vector<FlowWindowStats>& window,
                          const std::vector<FlowSpec>& flows);

struct SlotDecision {
    int chi = 0;
    bool adopted_candidate = true;
    double u_exact = 0.0;
    double u_star = 0.0;
    double m_exact = 0.0;    // candidate gain over the discounted incumbent
    double m_estimate = 0.0; // gossip view of the same quantity
    double w_new = 0.0;      // candidate weighted rate sum at the current slot
    double w_old = 0.0;      // incumbent weighted rate sum re-evaluated at the current slot
    double w_adopted = 0.0;
};

// Policy switches shared by the distributed schedulers.
struct SlotKnobs {
    enum class Election { BacklogProportional, FixedProbability };
    Election election = Election::BacklogProportional;
    double election_probability = 0.5; // FixedProbability only
    bool qos_weighting = true;         // false pins every weight to the raw backlog
};

// Mutable network state threaded through a run.
struct NetState {
    QueueMatrix queues;
    Schedule previous;
    bool has_previous = false;
    QosFlags eta;                      // flags in effect this slot
    std::deque<QosFlags> eta_pipeline; // delay line implementing eta_lag
    long long slot = 0;
    long long created = 0;
    long long delivered = 0;
};

// One scheduling decision: election, pairing, flow selection, candidate
// scoring against the re-evaluated incumbent, and adoption. Updates
// state.previous to the adopted schedule (weights and rates at the current
// slot) and returns the decision trace. Queue stepping is the caller's job.
SlotDecision plan_schedule(NetState& state, const std::vector<FlowSpec>& flows,
                           const Topology& topo, const ChannelState& channel,
                           const SchedulerParams& params, const SlotKnobs& knobs, Rng& rng);

// Pushes freshly computed flags into the delay line and returns the flags that
// take effect next slot (eta_lag slots behind the newest).
QosFlags advance_eta(std::deque<QosFlags>& pipeline, QosFlags fresh, int eta_lag, int flow_count);

} // namespace qosnet
