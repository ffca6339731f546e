#include "qosnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qosnet {

namespace {

struct OracleSearch {
    const QueueMatrix* queues = nullptr;
    const ChannelState* channel = nullptr;
    const std::vector<FlowSpec>* flows = nullptr;
    const CentralizedParams* params = nullptr;
    int n = 0;
    int max_links = 0;

    std::vector<Link> current;
    std::vector<char> used;
    double best_objective = 0.0;
    Schedule best;

    void score_current() {
        const int k = static_cast<int>(current.size());
        const int levels = params->power_levels;
        std::vector<int> level(k, 0);
        std::vector<double> power(n, 0.0);
        while (true) {
            for (int a = 0; a < k; ++a) {
                power[current[a].tx] =
                    params->p_max * static_cast<double>(level[a]) / (levels - 1);
            }
            const std::vector<double> rates = sinr_rates(power, current, *channel);
            double objective = 0.0;
            for (int a = 0; a < k; ++a) {
                objective += current[a].weight * rates[a];
            }
            if (objective > best_objective) {
                best_objective = objective;
                best.links = current;
                for (int a = 0; a < k; ++a) best.links[a].rate = rates[a];
                best.power = power;
            }
            int pos = k - 1;
            while (pos >= 0 && level[pos] == levels - 1) {
                level[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++level[pos];
        }
    }

    // Enumerates link sets in lexicographic (tx-major, rx-minor) order; the
    // empty set scores first so all-zero instances keep an empty schedule.
    void extend(int min_tx) {
        score_current();
        if (static_cast<int>(current.size()) >= max_links) return;
        for (int tx = min_tx; tx < n; ++tx) {
            if (used[tx]) continue;
            for (int rx = 0; rx < n; ++rx) {
                if (rx == tx || used[rx]) continue;
                const BacklogDelta bd = differential_backlog(*queues, tx, rx);
                current.push_back(Link{tx, rx, bd.flow, static_cast<double>(bd.delta), 0.0});
                used[tx] = 1;
                used[rx] = 1;
                extend(tx + 1);
                used[tx] = 0;
                used[rx] = 0;
                current.pop_back();
            }
        }
    }
};

} // namespace

Schedule centralized_maxweight(const QueueMatrix& queues, const ChannelState& channel,
                               const std::vector<FlowSpec>& flows,
                               const CentralizedParams& params) {
    const int n = channel.node_count;
    if (n > params.node_guard) {
        throw std::invalid_argument(
            "centralized_maxweight: network exceeds the enumeration guard");
    }
    if (params.power_levels < 2) {
        throw std::invalid_argument("policy.power_levels: must be >= 2");
    }
    OracleSearch search;
    search.queues = &queues;
    search.channel = &channel;
    search.flows = &flows;
    search.params = &params;
    search.n = n;
    search.max_links = params.max_links > 0 ? params.max_links : n / 2;
    search.used.assign(n, 0);
    search.best.power.assign(n, 0.0);
    search.extend(0);
    return search.best;
}

double maxweight_objective(const QueueMatrix& queues, const Schedule& schedule) {
    double objective = 0.0;
    for (const Link& l : schedule.links) {
        const BacklogDelta bd = differential_backlog(queues, l.tx, l.rx);
        objective += static_cast<double>(bd.delta) * l.rate;
    }
    return objective;
}

SlotDecision plan_ddrpc(NetState& state, const std::vector<FlowSpec>& flows,
                        const Topology& topo, const ChannelState& channel,
                        const DdrpcParams& params, Rng& rng) {
    const int n = topo.node_count;
    std::vector<char> transmits(n, 0);
    for (int i = 0; i < n; ++i) {
        if (rng.uniform() < params.tx_probability) transmits[i] = 1;
    }

    // Backlogged transmitters aim at their best-differential neighbor.
    std::vector<int> target(n, -1);
    std::vector<BacklogDelta> choice(n);
    for (int i = 0; i < n; ++i) {
        if (!transmits[i] || state.queues.node_total(i) <= 0) continue;
        const auto& nb = topo.neighbors[i];
        if (nb.empty()) continue;
        BacklogDelta best;
        int best_j = nb[0];
        for (int j : nb) {
            const BacklogDelta bd = differential_backlog(state.queues, i, j);
            if (bd.delta > best.delta) {
                best = bd;
                best_j = j;
            }
        }
        target[i] = best_j;
        choice[i] = best;
    }

    Schedule schedule;
    schedule.power.assign(n, 0.0);
    std::vector<int> requesters;
    for (int j = 0; j < n; ++j) {
        if (transmits[j]) continue;
        requesters.clear();
        for (int i = 0; i < n; ++i) {
            if (target[i] == j) requesters.push_back(i);
        }
        if (requesters.empty()) continue;
        const int winner = requesters.size() == 1
                               ? requesters[0]
                               : requesters[rng.uniform_int(static_cast<int>(requesters.size()))];
        schedule.links.push_back(Link{winner, j, choice[winner].flow,
                                      static_cast<double>(choice[winner].delta), 0.0});
        schedule.power[winner] = params.p_max;
    }
    std::sort(schedule.links.begin(), schedule.links.end(),
              [](const Link& a, const Link& b) { return a.tx < b.tx; });
    const std::vector<double> rates = sinr_rates(schedule.power, schedule.links, channel);
    for (size_t a = 0; a < schedule.links.size(); ++a) schedule.links[a].rate = rates[a];

    SlotDecision dec;
    dec.chi = 0;
    dec.adopted_candidate = true;
    dec.w_new = schedule.weighted_rate();
    dec.w_adopted = dec.w_new;
    state.previous = std::move(schedule);
    state.has_previous = true;
    (void)flows;
    return dec;
}

SlotDecision plan_lee(NetState& state, const std::vector<FlowSpec>& flows, const Topology& topo,
                      const ChannelState& channel, const SchedulerParams& params,
                      const LeeParams& lee, Rng& rng) {
    SchedulerParams no_qos = params;
    no_qos.sigma = 0.0;
    SlotKnobs knobs;
    knobs.election = SlotKnobs::Election::FixedProbability;
    knobs.election_probability = lee.election_probability;
    knobs.qos_weighting = false;
    return plan_schedule(state, flows, topo, channel, no_qos, knobs, rng);
}

} // namespace qosnet
