#pragma once

#include <string>

#include "qosnet/bounds.hpp"
#include "qosnet/config.hpp"
#include "qosnet/sim.hpp"

namespace qosnet {

// Per-slot series: slot,chi,adopted,total_queue then, per flow c (by
// destination id), q_flow{c},mean_delay_flow{c},violation_flow{c},eta_flow{c}.
std::string slots_csv(const RunResult& result, const ExperimentConfig& config);

// One run-scope row (avg_total_queue, verdict, ledger totals) followed by one
// flow-scope row per flow (delivered, mean_delay, violation_fraction).
// Inapplicable cells are left empty.
std::string summary_csv(const RunResult& result);

// rate,policy,seed,time_avg_total_queue,verdict — one row per grid point,
// rates ascending within each policy.
std::string sweep_csv(const SweepTable& table);

// Inputs echoed (blank where a bound was given directly) plus the computed
// beta1,beta2,rho.
std::string bounds_csv(const BoundsTable& table);

} // namespace qosnet
