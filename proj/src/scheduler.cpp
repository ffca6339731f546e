#include "qosnet/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qosnet {

double priority_weight(double backlog, bool qos_flow, bool violated, double theta) {
    if (!qos_flow) return backlog;
    return violated ? theta * backlog * backlog : backlog;
}

double virtual_queue(const QueueMatrix& queues, int node, const std::vector<FlowSpec>& flows,
                     const QosFlags& eta, bool qos_weighting) {
    double total = 0.0;
    for (int f = 0; f < static_cast<int>(flows.size()); ++f) {
        const double x = static_cast<double>(queues.length(node, f));
        const bool qos = qos_weighting && flows[f].has_qos();
        total += priority_weight(x, qos, qos && eta.violated[f] != 0, flows[f].theta);
    }
    return total;
}

std::vector<Role> elect_roles(std::span<const double> u, double u_star, Rng& rng) {
    std::vector<Role> roles(u.size(), Role::Receiver);
    if (u_star <= 0.0) return roles;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] <= 0.0) continue;
        const double p = std::min(u[i] / u_star, 1.0);
        if (rng.uniform() < p) roles[i] = Role::Transmitter;
    }
    return roles;
}

Pairing pair_links(std::span<const Role> roles, const Topology& topo, Rng& rng) {
    const int n = topo.node_count;
    Pairing out;
    out.rtp_target.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (roles[i] != Role::Transmitter) continue;
        const auto& nb = topo.neighbors[i];
        if (nb.empty()) continue;
        out.rtp_target[i] = nb[rng.uniform_int(static_cast<int>(nb.size()))];
    }
    std::vector<int> requesters;
    for (int j = 0; j < n; ++j) {
        if (roles[j] != Role::Receiver) continue;
        requesters.clear();
        for (int i = 0; i < n; ++i) {
            if (out.rtp_target[i] == j) requesters.push_back(i);
        }
        if (requesters.empty()) continue;
        const int winner = requesters.size() == 1
                               ? requesters[0]
                               : requesters[rng.uniform_int(static_cast<int>(requesters.size()))];
        out.links.emplace_back(winner, j);
    }
    std::sort(out.links.begin(), out.links.end());
    return out;
}

double link_weight(const QueueMatrix& queues, const std::vector<FlowSpec>& flows,
                   const QosFlags& eta, int tx, int rx, int flow, int chi, bool qos_weighting) {
    const double qi = static_cast<double>(queues.length(tx, flow));
    const double qj = static_cast<double>(queues.length(rx, flow));
    double wi = qi;
    double wj = qj;
    if (chi == 1 && qos_weighting && flows[flow].has_qos()) {
        const bool violated = eta.violated[flow] != 0;
        wi = priority_weight(qi, true, violated, flows[flow].theta);
        wj = priority_weight(qj, true, violated, flows[flow].theta);
    }
    return std::max(0.0, wi - wj);
}

FlowChoice select_flow(int tx, int rx, const QueueMatrix& queues,
                       const std::vector<FlowSpec>& flows, const QosFlags& eta, int chi,
                       bool qos_weighting) {
    FlowChoice best;
    for (int f = 0; f < static_cast<int>(flows.size()); ++f) {
        const double w = link_weight(queues, flows, eta, tx, rx, f, chi, qos_weighting);
        if (w > best.weight) {
            best.weight = w;
            best.flow = f;
        }
    }
    return best;
}

QosFlags update_qos_flags(const std::vector<FlowWindowStats>& window,
                          const std::vector<FlowSpec>& flows) {
    QosFlags flags;
    flags.violated.assign(flows.size(), 0);
    for (size_t f = 0; f < flows.size(); ++f) {
        const auto& st = window[f];
        if (st.delivered <= 0) continue;
        const auto& qos = flows[f].qos;
        if (qos.kind == QosKind::MeanDelay) {
            const double mean = static_cast<double>(st.delay_sum) / st.delivered;
            flags.violated[f] = mean > qos.mean_delay_target ? 1 : 0;
        } else if (qos.kind == QosKind::HardDeadline) {
            const double frac = static_cast<double>(st.late) / st.delivered;
            flags.violated[f] = frac > qos.drop_ratio ? 1 : 0;
        }
    }
    return flags;
}

QosFlags advance_eta(std::deque<QosFlags>& pipeline, QosFlags fresh, int eta_lag, int flow_count) {
    pipeline.push_back(std::move(fresh));
    while (static_cast<int>(pipeline.size()) > eta_lag + 1) pipeline.pop_front();
    if (static_cast<int>(pipeline.size()) == eta_lag + 1) return pipeline.front();
    QosFlags zeros;
    zeros.violated.assign(flow_count, 0);
    return zeros;
}

namespace {

double gossip_sum(const std::vector<double>& values, const GossipSizing& sizing, Rng& rng) {
    GossipState state = init_gossip(values, static_cast<int>(sizing.samples), rng);
    run_gossip(state, sizing.rounds, GossipGraph::Complete, nullptr, rng);
    return estimate_sum(state, 0);
}

} // namespace

SlotDecision plan_schedule(NetState& state, const std::vector<FlowSpec>& flows,
                           const Topology& topo, const ChannelState& channel,
                           const SchedulerParams& params, const SlotKnobs& knobs, Rng& rng) {
    const int n = topo.node_count;
    SlotDecision dec;
    dec.chi = rng.uniform() < params.sigma ? 1 : 0;

    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double q = virtual_queue(state.queues, i, flows, state.eta, knobs.qos_weighting);
        u[i] = std::min(q, params.queue_cap);
    }
    dec.u_exact = exact_sum(u);

    std::vector<Role> roles;
    if (knobs.election == SlotKnobs::Election::BacklogProportional) {
        dec.u_star = params.exact_sums ? dec.u_exact : gossip_sum(u, params.gossip, rng);
        roles = elect_roles(u, dec.u_star, rng);
    } else {
        dec.u_star = dec.u_exact;
        roles.assign(n, Role::Receiver);
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < knobs.election_probability) roles[i] = Role::Transmitter;
        }
    }

    Schedule candidate;
    candidate.power.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (roles[i] == Role::Transmitter) candidate.power[i] = rng.uniform(0.0, params.p_max);
    }
    const Pairing pairing = pair_links(roles, topo, rng);
    std::vector<char> paired(n, 0);
    for (const auto& [tx, rx] : pairing.links) paired[tx] = 1;
    for (int i = 0; i < n; ++i) {
        if (roles[i] == Role::Transmitter && !paired[i]) candidate.power[i] = 0.0;
    }
    for (const auto& [tx, rx] : pairing.links) {
        const FlowChoice fc =
            select_flow(tx, rx, state.queues, flows, state.eta, dec.chi, knobs.qos_weighting);
        candidate.links.push_back(Link{tx, rx, fc.flow, fc.weight, 0.0});
    }
    const std::vector<double> cand_rates = sinr_rates(candidate.power, candidate.links, channel);
    for (size_t a = 0; a < candidate.links.size(); ++a) candidate.links[a].rate = cand_rates[a];
    dec.w_new = candidate.weighted_rate();

    // Re-evaluate the incumbent at the current channel and queues, keeping its
    // links, flows, and powers.
    if (state.has_previous) {
        for (Link& l : state.previous.links) {
            l.weight = link_weight(state.queues, flows, state.eta, l.tx, l.rx, l.flow, dec.chi,
                                   knobs.qos_weighting);
        }
        const std::vector<double> old_rates =
            sinr_rates(state.previous.power, state.previous.links, channel);
        for (size_t a = 0; a < state.previous.links.size(); ++a) {
            state.previous.links[a].rate = old_rates[a];
        }
        dec.w_old = state.previous.weighted_rate();
    }
    dec.m_exact = dec.w_new - (1.0 - params.alpha2) * dec.w_old;

    if (!state.has_previous) {
        dec.m_estimate = dec.m_exact;
        dec.adopted_candidate = true;
    } else if (params.exact_sums) {
        dec.m_estimate = dec.m_exact;
        dec.adopted_candidate = dec.m_estimate >= 0.0;
    } else {
        // Signed comparison via two nonnegative gossip sums: per-transmitter
        // candidate gains and discounted incumbent terms.
        std::vector<double> gain(n, 0.0);
        std::vector<double> loss(n, 0.0);
        for (const Link& l : candidate.links) gain[l.tx] += l.weight * l.rate;
        for (const Link& l : state.previous.links) {
            loss[l.tx] += (1.0 - params.alpha2) * l.weight * l.rate;
        }
        const double gain_est = gossip_sum(gain, params.gossip, rng);
        const double loss_est = gossip_sum(loss, params.gossip, rng);
        dec.m_estimate = gain_est - loss_est;
        dec.adopted_candidate = dec.m_estimate >= 0.0;
    }

    if (dec.adopted_candidate) {
        state.previous = std::move(candidate);
        state.has_previous = true;
    }
    dec.w_adopted = state.previous.weighted_rate();
    return dec;
}

} // namespace qosnet
