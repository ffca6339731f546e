#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qosnet/bounds.hpp"
#include "qosnet/config.hpp"

using namespace qosnet;

namespace {

// Same quantity, assembled the other way around: per-link election floor
// raised to the number of nodes, with the sqrt(N) election-margin factor
// pulled out separately.
double beta1_recomposed(int n, double cap, double a3, double b3, double eps) {
    const double per_link = link_selection_floor(n, cap, a3);
    const double margin = eps / std::pow(static_cast<double>(n), 0.5);
    return (1.0 - b3) * std::pow(per_link * margin, static_cast<double>(n));
}

} // namespace

TEST_CASE("guaranteed stability fraction reproduces the worked value") {
    CHECK(rho_bound(0.1, 0.1, 0.25, 0.0025) == doctest::Approx(0.61).epsilon(1e-12));
    // components: alpha drag 0.19, comparison drag 2 * sqrt(0.01) = 0.2
    CHECK(rho_bound(0.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(rho_bound(0.0, 0.0, 1.0, 1.0) == doctest::Approx(-1.0)); // vacuous but reported
    CHECK(rho_bound(0.1, 0.1, 1.0, 0.0025) > rho_bound(0.1, 0.1, 0.25, 0.0025));
    CHECK_THROWS_AS(rho_bound(1.0, 0.1, 0.25, 0.0025), std::invalid_argument);
    CHECK_THROWS_AS(rho_bound(0.1, 0.1, 0.0, 0.0025), std::invalid_argument);
    CHECK_THROWS_AS(rho_bound(0.1, 0.1, 0.25, -1.0), std::invalid_argument);
}

TEST_CASE("election floor matches an independent recomposition") {
    const double direct = beta1_bound(2, 1.0, 0.2, 0.5, 1.0);
    CHECK(direct == doctest::Approx(1.0596e-3).epsilon(1e-4));
    CHECK(direct == doctest::Approx(beta1_recomposed(2, 1.0, 0.2, 0.5, 1.0)).epsilon(1e-12));
    for (int n : {2, 3, 4}) {
        for (double cap : {1.0, 2.0, 5.0}) {
            const double a3 = 0.5 / (2.0 * n * cap); // halfway into the admissible range
            CHECK(beta1_bound(n, cap, a3, 0.25, 0.5) ==
                  doctest::Approx(beta1_recomposed(n, cap, a3, 0.25, 0.5)).epsilon(1e-12));
        }
    }
}

TEST_CASE("election floor shrinks as queues deepen or networks grow") {
    const double a3 = 0.01;
    double prev = beta1_bound(2, 1.0, a3, 0.5, 1.0);
    for (double cap : {2.0, 4.0}) {
        const double next = beta1_bound(2, cap, a3, 0.5, 1.0);
        CHECK(next < prev);
        prev = next;
    }
    prev = beta1_bound(2, 1.0, a3, 0.5, 1.0);
    for (int n : {3, 4}) {
        const double next = beta1_bound(n, 1.0, a3, 0.5, 1.0);
        CHECK(next < prev);
        prev = next;
    }
}

TEST_CASE("election floor rejects parameters outside its derivation") {
    CHECK_THROWS_WITH_AS(beta1_bound(2, 1.0, 0.25, 0.5, 1.0),
                         "beta1_bound: alpha3 must lie in (0, 1/(2*nodes*queue_cap))",
                         std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(2, 1.0, 0.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(2, 1.0, -0.1, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(0, 1.0, 0.1, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(2, 0.0, 0.1, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(2, 1.0, 0.2, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta1_bound(2, 1.0, 0.2, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("comparison failure rate composes gossip error with the QoS slot share") {
    CHECK(beta2_bound(0.3, 0.0) == doctest::Approx(0.3));
    CHECK(beta2_bound(0.3, 1.0) == doctest::Approx(1.0));
    CHECK(beta2_bound(0.1, 0.5) == doctest::Approx(0.55));
    CHECK(beta2_bound(0.0, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(beta2_bound(1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(beta2_bound(0.1, -0.1), std::invalid_argument);
}

TEST_CASE("single-link floor reproduces its closed form") {
    const double floor = link_selection_floor(3, 2.0, 1.0 / 24.0);
    CHECK(floor == doctest::Approx(0.00463768115942029).epsilon(1e-12));
    CHECK(floor ==
          doctest::Approx(1.0 / (2.0 * (1.0 - 1.0 / 576.0) * 27.0 * 4.0)).epsilon(1e-14));
    // nearly interference-free regime approaches 1 / (2 N^3 B^2)
    CHECK(link_selection_floor(3, 2.0, 1e-9) == doctest::Approx(1.0 / 216.0).epsilon(1e-6));
    CHECK_THROWS_AS(link_selection_floor(3, 2.0, 1.0 / 12.0), std::invalid_argument);
}

TEST_CASE("table evaluation derives exactly the missing pieces") {
    ExperimentConfig config = parse_config(R"({
        "topology": { "nodes": 2 },
        "flows": [{ "destination": 0, "sources": [{ "node": 1, "rate": 0.2 }] }],
        "bounds": { "rows": [
            { "alpha1": 0.1, "alpha2": 0.1, "beta1": 0.25, "beta2": 0.0025 },
            { "alpha1": 0.05, "alpha2": 0.05, "nodes": 2, "queue_cap": 1, "alpha3": 0.2,
              "beta3": 0.5, "epsilon_ball": 1.0, "beta": 0.01, "sigma": 0.5 }
        ] }
    })");
    BoundsTable table = evaluate_bounds(config);
    REQUIRE(table.rows.size() == 2);

    CHECK(table.rows[0].beta1 == doctest::Approx(0.25));
    CHECK(table.rows[0].beta2 == doctest::Approx(0.0025));
    CHECK(table.rows[0].rho == doctest::Approx(0.61).epsilon(1e-12));

    CHECK(table.rows[1].beta1 ==
          doctest::Approx(beta1_bound(2, 1.0, 0.2, 0.5, 1.0)).epsilon(1e-15));
    CHECK(table.rows[1].beta2 == doctest::Approx(beta2_bound(0.01, 0.5)).epsilon(1e-15));
    CHECK(table.rows[1].rho ==
          doctest::Approx(rho_bound(0.05, 0.05, table.rows[1].beta1, table.rows[1].beta2))
              .epsilon(1e-15));

    config.bounds.reset();
    CHECK_THROWS_AS(evaluate_bounds(config), std::invalid_argument);
}

TEST_CASE("exact comparisons never fall below the retention floor") {
    ExperimentConfig config = parse_config(R"({
        "topology": { "nodes": 4, "seed": 5 },
        "flows": [
            { "destination": 0, "sources": [{ "node": 1, "rate": 0.3 }, { "node": 2, "rate": 0.2 }] },
            { "destination": 3, "sources": [{ "node": 1, "rate": 0.2 }],
              "qos": { "type": "mean_delay", "target": 60 }, "theta": 10 }
        ],
        "scheduler": { "gossip": { "exact": true } },
        "run": { "slots": 3000, "warmup": 200, "seed": 17 }
    })");
    ComparisonCheck check = validate_comparison_bound(config);
    // every slot of warmup + measurement compares, except the incumbent-free opener
    CHECK(check.slots == config.run.warmup + config.run.slots - 1);
    CHECK(check.failures == 0);
    CHECK(check.frequency == 0.0);
    CHECK(check.bound == doctest::Approx(beta2_bound(0.0, config.scheduler.sigma)));
    CHECK(check.standard_error > 0.0);
    CHECK(check.standard_error < 1.0);
}
