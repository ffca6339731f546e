#include "qosnet/sim.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qosnet/baselines.hpp"
#include "qosnet/gossip.hpp"

namespace qosnet {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Evaluation window feeding a flow's violation flag.
struct DelayWindow {
    QosWindow mode = QosWindow::AfterWarmup;
    long long span = 0; // sliding mode only
    long long delivered = 0;
    long long delay_sum = 0;
    long long late = 0;
    std::deque<std::array<long long, 3>> ring; // (slot, delay, late)

    void add(long long slot, long long delay, bool is_late) {
        delivered += 1;
        delay_sum += delay;
        late += is_late ? 1 : 0;
        if (mode == QosWindow::Sliding) ring.push_back({slot, delay, is_late ? 1LL : 0LL});
    }

    void evict(long long slot) {
        if (mode != QosWindow::Sliding) return;
        while (!ring.empty() && ring.front()[0] <= slot - span) {
            delivered -= 1;
            delay_sum -= ring.front()[1];
            late -= ring.front()[2];
            ring.pop_front();
        }
    }

    void reset() {
        delivered = 0;
        delay_sum = 0;
        late = 0;
        ring.clear();
    }

    FlowWindowStats snapshot() const { return FlowWindowStats{delivered, delay_sum, late}; }
};

SchedulerParams resolve_scheduler(const SchedulerConfig& cfg, int node_count) {
    SchedulerParams params;
    params.sigma = cfg.sigma;
    params.queue_cap = cfg.queue_cap;
    params.alpha2 = cfg.alpha2;
    params.p_max = cfg.max_power;
    params.exact_sums = cfg.gossip.exact;
    params.eta_lag = cfg.eta_lag;
    params.gossip.samples =
        cfg.gossip.samples > 0 ? cfg.gossip.samples
                               : required_samples(cfg.gossip.delta, cfg.gossip.epsilon);
    params.gossip.rounds = cfg.gossip.rounds > 0
                               ? cfg.gossip.rounds
                               : default_rounds(node_count, cfg.gossip.round_scale);
    return params;
}

double window_mean(const DelayWindow& w) {
    return w.delivered > 0 ? static_cast<double>(w.delay_sum) / w.delivered : kNan;
}

double window_violation(const DelayWindow& w, const FlowSpec& flow) {
    if (flow.qos.kind != QosKind::HardDeadline || w.delivered <= 0) return kNan;
    return static_cast<double>(w.late) / w.delivered;
}

} // namespace

RunResult run_simulation(const ExperimentConfig& config) {
    const Topology topo = config.topology.positions.empty()
                              ? build_topology(config.topology.nodes, config.topology.seed)
                              : make_topology(config.topology.positions);
    const int n = topo.node_count;
    const auto& flows = config.flows;
    const int f_count = static_cast<int>(flows.size());
    if (f_count < 1) throw ConfigError("flows: must be a nonempty array");
    for (const FlowSpec& f : flows) {
        if (static_cast<int>(f.arrival_rate.size()) != n) {
            throw ConfigError("flows: arrival rate vector does not match the node count");
        }
    }
    if (config.policy.kind == PolicyKind::CentralizedMaxweight && n > config.policy.node_guard) {
        throw ConfigError("policy.kind: centralized_maxweight supports at most " +
                          std::to_string(config.policy.node_guard) + " nodes (node_guard)");
    }

    const SchedulerParams params = resolve_scheduler(config.scheduler, n);
    const SlotKnobs qos_knobs; // backlog-proportional election, QoS weighting on
    const LeeParams lee{config.policy.election_probability};
    const DdrpcParams ddrpc{config.policy.tx_probability, config.scheduler.max_power};
    CentralizedParams central;
    central.power_levels = config.policy.power_levels;
    central.node_guard = config.policy.node_guard;
    central.p_max = config.scheduler.max_power;

    Rng rng(config.run.seed);
    NetState state;
    state.queues = QueueMatrix(n, f_count);
    state.eta.violated.assign(f_count, 0);

    std::vector<DelayWindow> windows(f_count);
    for (auto& w : windows) {
        w.mode = config.scheduler.window;
        w.span = config.scheduler.window_slots;
    }
    std::vector<FlowWindowStats> window_stats(f_count);

    const long long warmup = config.run.warmup;
    const long long total_slots = warmup + config.run.slots;
    const bool tracks_comparison = config.policy.kind == PolicyKind::QosDistributed ||
                                   config.policy.kind == PolicyKind::LeeStyle;

    RunResult result;
    result.series.reserve(static_cast<size_t>(config.run.slots));

    for (long long t = 0; t < total_slots; ++t) {
        if (t == warmup && config.scheduler.window == QosWindow::AfterWarmup) {
            for (auto& w : windows) w.reset();
        }
        const ChannelState channel = sample_channel(topo, config.channel, t, rng);
        const QosFlags eta_used = state.eta;
        const bool had_previous = state.has_previous;

        SlotDecision dec;
        switch (config.policy.kind) {
            case PolicyKind::QosDistributed:
                dec = plan_schedule(state, flows, topo, channel, params, qos_knobs, rng);
                break;
            case PolicyKind::LeeStyle:
                dec = plan_lee(state, flows, topo, channel, params, lee, rng);
                break;
            case PolicyKind::DdrpcStyle:
                dec = plan_ddrpc(state, flows, topo, channel, ddrpc, rng);
                break;
            case PolicyKind::CentralizedMaxweight: {
                Schedule schedule = centralized_maxweight(state.queues, channel, flows, central);
                dec.chi = 0;
                dec.adopted_candidate = true;
                dec.w_new = schedule.weighted_rate();
                dec.w_adopted = dec.w_new;
                state.previous = std::move(schedule);
                state.has_previous = true;
                break;
            }
        }

        const ArrivalBatch arrivals = generate_arrivals(flows, t, rng);
        const SlotFlows moved =
            step_queues(state.queues, state.previous, arrivals, flows, t, config.run.packet_size);

        state.created += arrivals.total;
        state.delivered += static_cast<long long>(moved.deliveries.size());
        for (const Delivery& d : moved.deliveries) {
            const long long delay = d.deliver_slot - d.birth_slot;
            const bool late = flows[d.flow].qos.kind == QosKind::HardDeadline &&
                              static_cast<double>(delay) > flows[d.flow].qos.deadline;
            windows[d.flow].add(t, delay, late);
            if (config.run.record_deliveries) result.deliveries.push_back(d);
        }
        for (auto& w : windows) w.evict(t);
        for (int f = 0; f < f_count; ++f) window_stats[f] = windows[f].snapshot();
        state.eta = advance_eta(state.eta_pipeline, update_qos_flags(window_stats, flows),
                                params.eta_lag, f_count);

        const long long queued = state.queues.total();
        if (state.created != queued + state.delivered) {
            throw std::runtime_error("packet ledger mismatch at slot " + std::to_string(t));
        }

        if (tracks_comparison && had_previous) {
            result.comparison_slots += 1;
            const double floor = (1.0 - config.scheduler.alpha2) * dec.w_old;
            if (dec.w_adopted < floor - 1e-9 * (1.0 + std::abs(floor))) {
                result.comparison_failures += 1;
            }
        }

        if (t >= warmup) {
            MetricsRecord rec;
            rec.slot = t;
            rec.chi = dec.chi;
            rec.adopted = dec.adopted_candidate ? 1 : 0;
            rec.total_queue = queued;
            rec.flow_queue.resize(f_count);
            rec.flow_mean_delay.resize(f_count);
            rec.flow_violation.resize(f_count);
            rec.flow_eta.resize(f_count);
            for (int f = 0; f < f_count; ++f) {
                rec.flow_queue[f] = state.queues.flow_total(f);
                rec.flow_mean_delay[f] = window_mean(windows[f]);
                rec.flow_violation[f] = window_violation(windows[f], flows[f]);
                rec.flow_eta[f] = eta_used.violated[f];
            }
            rec.w_adopted = dec.w_adopted;
            rec.w_old = dec.w_old;
            result.series.push_back(std::move(rec));
        }
        state.slot = t + 1;
    }

    result.created = state.created;
    result.delivered = state.delivered;
    result.queued_end = state.queues.total();
    result.flows.resize(f_count);
    for (int f = 0; f < f_count; ++f) {
        result.flows[f].flow_id = flows[f].destination;
        result.flows[f].delivered = windows[f].delivered;
        result.flows[f].mean_delay = window_mean(windows[f]);
        result.flows[f].violation_fraction = window_violation(windows[f], flows[f]);
    }
    if (result.series.empty()) {
        result.avg_total_queue = static_cast<double>(result.queued_end);
        result.verdict = Verdict::Inconclusive;
    } else {
        std::vector<long long> totals;
        totals.reserve(result.series.size());
        for (const MetricsRecord& rec : result.series) totals.push_back(rec.total_queue);
        const size_t start = totals.size() / 2;
        double sum = 0.0;
        for (size_t i = start; i < totals.size(); ++i) sum += static_cast<double>(totals[i]);
        result.avg_total_queue = sum / static_cast<double>(totals.size() - start);
        result.verdict =
            stability_verdict(totals, config.run.stable_slope, config.run.unstable_slope);
    }
    return result;
}

Verdict stability_verdict(std::span<const long long> total_queue, double stable_slope,
                          double unstable_slope) {
    if (!(unstable_slope > stable_slope)) {
        throw std::invalid_argument("run.unstable_slope: must be > run.stable_slope");
    }
    if (total_queue.size() < 2000) return Verdict::Inconclusive;
    const size_t start = total_queue.size() / 2;
    const size_t m = total_queue.size() - start;
    const double mean_x = static_cast<double>(m - 1) / 2.0;
    double mean_y = 0.0;
    for (size_t i = 0; i < m; ++i) mean_y += static_cast<double>(total_queue[start + i]);
    mean_y /= static_cast<double>(m);
    double sxy = 0.0;
    double sxx = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxy += dx * (static_cast<double>(total_queue[start + i]) - mean_y);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    if (slope <= stable_slope) return Verdict::Stable;
    if (slope >= unstable_slope) return Verdict::Unstable;
    return Verdict::Inconclusive;
}

DelayStats delay_statistics(std::span<const Delivery> log, int flow, double deadline) {
    DelayStats stats;
    long long delay_sum = 0;
    long long late = 0;
    for (const Delivery& d : log) {
        if (d.flow != flow) continue;
        stats.count += 1;
        const long long delay = d.deliver_slot - d.birth_slot;
        delay_sum += delay;
        if (static_cast<double>(delay) > deadline) late += 1;
    }
    if (stats.count == 0) {
        stats.mean_delay = kNan;
        stats.violation_fraction = kNan;
    } else {
        stats.mean_delay = static_cast<double>(delay_sum) / static_cast<double>(stats.count);
        stats.violation_fraction = static_cast<double>(late) / static_cast<double>(stats.count);
    }
    return stats;
}

SweepTable sweep_arrival_rates(const ExperimentConfig& config) {
    if (!config.sweep) throw ConfigError("sweep: section is required");
    SweepConfig sweep = *config.sweep;
    std::sort(sweep.rates.begin(), sweep.rates.end());

    struct Job {
        PolicyKind policy;
        double rate;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (PolicyKind policy : sweep.policies) {
        for (double rate : sweep.rates) {
            for (std::uint64_t seed : sweep.seeds) jobs.push_back({policy, rate, seed});
        }
    }

    SweepTable table;
    table.rows.resize(jobs.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_lock;

    auto worker = [&]() {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            try {
                ExperimentConfig c = config;
                c.policy.kind = job.policy;
                c.run.seed = job.seed;
                c.run.record_deliveries = false;
                for (FlowSpec& f : c.flows) {
                    for (double& r : f.arrival_rate) r *= job.rate;
                }
                const RunResult r = run_simulation(c);
                table.rows[idx] =
                    SweepRow{job.rate, job.policy, job.seed, r.avg_total_queue, r.verdict};
            } catch (...) {
                std::lock_guard<std::mutex> guard(error_lock);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const size_t threads =
        std::min<size_t>(jobs.size(),
                         std::min<size_t>(8, std::max(1u, std::thread::hardware_concurrency())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // A stable verdict above an unstable rate is a knee anomaly worth flagging.
    for (PolicyKind policy : sweep.policies) {
        for (std::uint64_t seed : sweep.seeds) {
            bool unstable_seen = false;
            for (const SweepRow& row : table.rows) {
                if (row.policy != policy || row.seed != seed) continue;
                if (row.verdict == Verdict::Unstable) unstable_seen = true;
                if (unstable_seen && row.verdict == Verdict::Stable) table.knee_violations += 1;
            }
        }
    }
    return table;
}

} // namespace qosnet
