#pragma once

#include <vector>

#include "qosnet/config.hpp"

namespace qosnet {

// Per-slot probability floor for electing a near-optimal schedule under
// backlog-proportional election with virtual queues capped at queue_cap:
// (1 - beta3) * (epsilon / (2 (1 - alpha3^2) N^3.5 B^2))^N.
// Requires alpha3 in (0, 1 / (2 N B)).
double beta1_bound(int nodes, double queue_cap, double alpha3, double beta3, double epsilon);

// Per-slot probability that the schedule comparison misfires: gossip error
// beta, inflated by the QoS-weighted slot fraction sigma.
double beta2_bound(double beta, double sigma);

// Guaranteed fraction of the maxweight stability region:
// 1 - (alpha1 + (1 - alpha1) alpha2) - 2 sqrt(beta2 / beta1).
// May be nonpositive; reported as computed.
double rho_bound(double alpha1, double alpha2, double beta1, double beta2);

// Probability floor for any single feasible link under the election and
// pairing process: 1 / (2 (1 - alpha3^2) N^3 B^2).
double link_selection_floor(int nodes, double queue_cap, double alpha3);

struct BoundsResult {
    BoundsRow inputs;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double rho = 0.0;
};

struct BoundsTable {
    std::vector<BoundsResult> rows;
};

// Evaluates every row of the config's bounds section, deriving beta1/beta2
// from their inputs where not given directly.
BoundsTable evaluate_bounds(const ExperimentConfig& config);

struct ComparisonCheck {
    long long slots = 0;
    long long failures = 0;
    double frequency = 0.0;
    double bound = 0.0;          // beta2 under the run's gossip and sigma settings
    double standard_error = 0.0; // binomial, at the bound
};

// Runs the configured simulation and measures how often the adopted
// schedule's weighted rate sum fell below the retention floor
// (1 - alpha2) * w_old. With exact sums the frequency is zero by
// construction; with gossip it stays within the beta2 bound.
ComparisonCheck validate_comparison_bound(const ExperimentConfig& config);

} // namespace qosnet
