#include "qosnet/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "qosnet/sim.hpp"

namespace qosnet {

namespace {

void check_alpha3(int nodes, double queue_cap, double alpha3, const char* who) {
    if (nodes < 1) {
        throw std::invalid_argument(std::string(who) + ": nodes must be positive");
    }
    if (!(queue_cap > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": queue_cap must be positive");
    }
    const double limit = 1.0 / (2.0 * nodes * queue_cap);
    if (!(alpha3 > 0.0) || !(alpha3 < limit)) {
        throw std::invalid_argument(std::string(who) +
                                    ": alpha3 must lie in (0, 1/(2*nodes*queue_cap))");
    }
}

} // namespace

double beta1_bound(int nodes, double queue_cap, double alpha3, double beta3, double epsilon) {
    check_alpha3(nodes, queue_cap, alpha3, "beta1_bound");
    if (!(beta3 >= 0.0) || !(beta3 < 1.0)) {
        throw std::invalid_argument("beta1_bound: beta3 must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("beta1_bound: epsilon must be positive");
    }
    const double denom =
        2.0 * (1.0 - alpha3 * alpha3) * std::pow(static_cast<double>(nodes), 3.5) * queue_cap * queue_cap;
    return (1.0 - beta3) * std::pow(epsilon / denom, static_cast<double>(nodes));
}

double beta2_bound(double beta, double sigma) {
    if (!(beta >= 0.0) || !(beta <= 1.0)) {
        throw std::invalid_argument("beta2_bound: beta must lie in [0, 1]");
    }
    if (!(sigma >= 0.0) || !(sigma <= 1.0)) {
        throw std::invalid_argument("beta2_bound: sigma must lie in [0, 1]");
    }
    return beta + sigma * (1.0 - beta);
}

double rho_bound(double alpha1, double alpha2, double beta1, double beta2) {
    if (!(alpha1 >= 0.0) || !(alpha1 < 1.0)) {
        throw std::invalid_argument("rho_bound: alpha1 must lie in [0, 1)");
    }
    if (!(alpha2 >= 0.0) || !(alpha2 < 1.0)) {
        throw std::invalid_argument("rho_bound: alpha2 must lie in [0, 1)");
    }
    if (!(beta1 > 0.0)) {
        throw std::invalid_argument("rho_bound: beta1 must be positive");
    }
    if (!(beta2 >= 0.0)) {
        throw std::invalid_argument("rho_bound: beta2 must be nonnegative");
    }
    return 1.0 - (alpha1 + (1.0 - alpha1) * alpha2) - 2.0 * std::sqrt(beta2 / beta1);
}

double link_selection_floor(int nodes, double queue_cap, double alpha3) {
    check_alpha3(nodes, queue_cap, alpha3, "link_selection_floor");
    const double n3 = static_cast<double>(nodes) * nodes * nodes;
    return 1.0 / (2.0 * (1.0 - alpha3 * alpha3) * n3 * queue_cap * queue_cap);
}

BoundsTable evaluate_bounds(const ExperimentConfig& config) {
    if (!config.bounds) {
        throw std::invalid_argument("evaluate_bounds: config carries no bounds section");
    }
    BoundsTable table;
    table.rows.reserve(config.bounds->rows.size());
    for (const BoundsRow& row : config.bounds->rows) {
        BoundsResult out;
        out.inputs = row;
        out.beta1 = row.beta1 ? *row.beta1
                              : beta1_bound(*row.nodes, *row.queue_cap, *row.alpha3, *row.beta3,
                                            *row.epsilon_ball);
        out.beta2 = row.beta2 ? *row.beta2 : beta2_bound(*row.beta, *row.sigma);
        out.rho = rho_bound(row.alpha1, row.alpha2, out.beta1, out.beta2);
        table.rows.push_back(out);
    }
    return table;
}

ComparisonCheck validate_comparison_bound(const ExperimentConfig& config) {
    RunResult result = run_simulation(config);
    ComparisonCheck check;
    check.slots = result.comparison_slots;
    check.failures = result.comparison_failures;
    check.frequency =
        check.slots > 0 ? static_cast<double>(check.failures) / static_cast<double>(check.slots) : 0.0;
    const double beta =
        config.scheduler.gossip.exact ? 0.0 : config.scheduler.gossip.epsilon;
    check.bound = beta2_bound(beta, config.scheduler.sigma);
    if (check.slots > 0) {
        const double p = check.bound;
        check.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(check.slots));
    }
    return check;
}

} // namespace qosnet
