#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qosnet/config.hpp"
#include "qosnet/net_core.hpp"
#include "qosnet/scheduler.hpp"

namespace qosnet {

enum class Verdict { Stable, Unstable, Inconclusive };

const char* verdict_name(Verdict v);

struct MetricsRecord {
    long long slot = 0;
    int chi = 0;
    int adopted = 0; // 1 when the slot's candidate schedule was adopted
    long long total_queue = 0;
    std::vector<long long> flow_queue;
    std::vector<double> flow_mean_delay; // empirical, NaN before the first delivery
    std::vector<double> flow_violation;  // late fraction, NaN when not applicable
    std::vector<std::uint8_t> flow_eta;  // violation flags in effect this slot
    double w_adopted = 0.0;              // adopted weighted rate sum (diagnostic)
    double w_old = 0.0;                  // incumbent weighted rate sum (diagnostic)
};

struct FlowSummary {
    int flow_id = 0; // destination node
    long long delivered = 0;
    double mean_delay = 0.0;
    double violation_fraction = 0.0;
};

struct RunResult {
    std::vector<MetricsRecord> series; // measurement slots only
    std::vector<FlowSummary> flows;
    double avg_total_queue = 0.0; // time average over the last half of the series
    Verdict verdict = Verdict::Inconclusive;
    long long created = 0;
    long long delivered = 0;
    long long queued_end = 0;
    long long comparison_slots = 0;    // slots where an incumbent schedule existed
    long long comparison_failures = 0; // adopted sum fell below the retention floor
    std::vector<Delivery> deliveries;  // populated when run.record_deliveries is set
};

// Executes warmup plus measurement slots under the configured policy,
// recording per-slot metrics for the measurement phase and enforcing the
// packet conservation ledger every slot.
RunResult run_simulation(const ExperimentConfig& config);

// Least-squares slope of the last half of the series, in packets/slot:
// at most stable_slope means stable, at least unstable_slope means unstable.
// Series shorter than 2000 slots are inconclusive.
Verdict stability_verdict(std::span<const long long> total_queue, double stable_slope,
                          double unstable_slope);

struct DelayStats {
    long long count = 0;
    double mean_delay = 0.0;        // NaN when count == 0
    double violation_fraction = 0.0; // fraction with delay > deadline; NaN when count == 0
};

DelayStats delay_statistics(std::span<const Delivery> log, int flow, double deadline);

struct SweepRow {
    double rate = 0.0; // multiplier applied to every configured arrival rate
    PolicyKind policy = PolicyKind::QosDistributed;
    std::uint64_t seed = 0;
    double avg_total_queue = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    // Stable verdicts appearing above an unstable rate for the same policy and
    // seed; flagged as diagnostics, not errors.
    int knee_violations = 0;
};

// Runs the grid of (policy, rate multiplier, seed) simulations described by
// the sweep section; grid points execute concurrently.
SweepTable sweep_arrival_rates(const ExperimentConfig& config);

} // namespace qosnet
