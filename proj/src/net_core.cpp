#include "qosnet/net_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qosnet {

double Topology::distance(int i, int j) const {
    const double dx = positions[i].x - positions[j].x;
    const double dy = positions[i].y - positions[j].y;
    return std::sqrt(dx * dx + dy * dy);
}

namespace {

std::vector<std::vector<int>> complete_neighbors(int n) {
    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i) {
        nb[i].reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j != i) nb[i].push_back(j);
        }
    }
    return nb;
}

} // namespace

Topology build_topology(int node_count, std::uint64_t seed) {
    if (node_count < 2) throw std::invalid_argument("topology.nodes: must be >= 2");
    Rng rng(seed);
    Topology topo;
    topo.node_count = node_count;
    topo.positions.resize(node_count);
    for (int i = 0; i < node_count; ++i) {
        topo.positions[i].x = rng.uniform();
        topo.positions[i].y = rng.uniform();
    }
    topo.neighbors = complete_neighbors(node_count);
    return topo;
}

Topology make_topology(std::vector<Vec2> positions) {
    const int n = static_cast<int>(positions.size());
    if (n < 2) throw std::invalid_argument("topology.positions: need at least 2 nodes");
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (positions[i].x == positions[j].x && positions[i].y == positions[j].y) {
                throw std::invalid_argument("topology.positions: positions must be distinct");
            }
        }
    }
    Topology topo;
    topo.node_count = n;
    topo.positions = std::move(positions);
    topo.neighbors = complete_neighbors(n);
    return topo;
}

ChannelState sample_channel(const Topology& topo, const ChannelParams& params,
                            long long slot, Rng& rng) {
    const int n = topo.node_count;
    ChannelState ch;
    ch.node_count = n;
    ch.slot = slot;
    ch.gains.assign(static_cast<size_t>(n) * n, 0.0);
    ch.noise.assign(n, params.noise);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = topo.distance(i, j);
            const double base = params.reference_gain * std::pow(d, -params.path_loss_exponent);
            const double fade = params.fading ? rng.exponential(1.0) : 1.0;
            ch.gains[i * n + j] = base * fade;
        }
    }
    return ch;
}

QueueMatrix::QueueMatrix(int nodes, int flows)
    : nodes_(nodes), flows_(flows), q_(static_cast<size_t>(nodes) * flows) {}

long long QueueMatrix::node_total(int node) const {
    long long total = 0;
    for (int f = 0; f < flows_; ++f) total += length(node, f);
    return total;
}

long long QueueMatrix::flow_total(int flow) const {
    long long total = 0;
    for (int i = 0; i < nodes_; ++i) total += length(i, flow);
    return total;
}

long long QueueMatrix::total() const {
    long long total = 0;
    for (const auto& dq : q_) total += static_cast<long long>(dq.size());
    return total;
}

double Schedule::weighted_rate() const {
    double sum = 0.0;
    for (const Link& l : links) sum += l.weight * l.rate;
    return sum;
}

std::vector<double> sinr_rates(const std::vector<double>& power, std::span<const Link> links,
                               const ChannelState& channel) {
    std::vector<double> rates(links.size(), 0.0);
    for (size_t a = 0; a < links.size(); ++a) {
        const int tx = links[a].tx;
        const int rx = links[a].rx;
        double interference = 0.0;
        for (size_t b = 0; b < links.size(); ++b) {
            if (b == a) continue;
            const int k = links[b].tx;
            if (k == tx) continue;
            interference += power[k] * channel.gain(k, rx);
        }
        const double signal = power[tx] * channel.gain(tx, rx);
        rates[a] = std::log2(1.0 + signal / (channel.noise[rx] + interference));
    }
    return rates;
}

ArrivalBatch generate_arrivals(const std::vector<FlowSpec>& flows, long long slot, Rng& rng) {
    (void)slot;
    const int f_count = static_cast<int>(flows.size());
    const int n = f_count > 0 ? static_cast<int>(flows[0].arrival_rate.size()) : 0;
    ArrivalBatch batch;
    batch.flows = f_count;
    batch.count.assign(static_cast<size_t>(n) * f_count, 0);
    for (int f = 0; f < f_count; ++f) {
        for (int i = 0; i < n; ++i) {
            const long long c = rng.poisson(flows[f].arrival_rate[i]);
            batch.count[i * f_count + f] = c;
            batch.total += c;
        }
    }
    return batch;
}

SlotFlows step_queues(QueueMatrix& queues, const Schedule& schedule, const ArrivalBatch& arrivals,
                      const std::vector<FlowSpec>& flows, long long slot, double packet_size) {
    if (packet_size <= 0.0) throw std::invalid_argument("run.packet_size: must be > 0");
    const int n = queues.nodes();
    const int f_count = queues.flows();
    SlotFlows out;
    out.mu_in.assign(static_cast<size_t>(n) * f_count, 0);
    out.mu_out.assign(static_cast<size_t>(n) * f_count, 0);

    // Serve links against the pre-arrival state; the one-role-per-node rule
    // keeps sources and sinks disjoint, so in-place pops and pushes are safe.
    for (const Link& l : schedule.links) {
        if (l.weight <= 0.0 || l.rate <= 0.0) continue;
        const long long cap = static_cast<long long>(std::floor(l.rate / packet_size));
        const long long moved = std::min(queues.length(l.tx, l.flow), cap);
        if (moved <= 0) continue;
        auto& src = queues.at(l.tx, l.flow);
        const bool delivers = flows[l.flow].destination == l.rx;
        for (long long k = 0; k < moved; ++k) {
            Packet p = src.front();
            src.pop_front();
            if (delivers) {
                out.deliveries.push_back({l.flow, p.birth_slot, slot});
            } else {
                queues.at(l.rx, l.flow).push_back(p);
            }
        }
        out.mu_out[l.tx * f_count + l.flow] += moved;
        if (!delivers) out.mu_in[l.rx * f_count + l.flow] += moved;
    }

    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < f_count; ++f) {
            const long long c = arrivals.at(i, f);
            for (long long k = 0; k < c; ++k) {
                queues.at(i, f).push_back(Packet{f, slot});
            }
        }
    }
    return out;
}

BacklogDelta differential_backlog(const QueueMatrix& queues, int from, int to) {
    BacklogDelta best;
    for (int f = 0; f < queues.flows(); ++f) {
        const long long d = queues.length(from, f) - queues.length(to, f);
        if (d > best.delta) {
            best.delta = d;
            best.flow = f;
        }
    }
    return best;
}

} // namespace qosnet
