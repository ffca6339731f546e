#include "qosnet.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ios>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qosnet/bounds.hpp"
#include "qosnet/config.hpp"
#include "qosnet/csv.hpp"
#include "qosnet/gossip.hpp"
#include "qosnet/sim.hpp"

struct qn_config {
    qosnet::ExperimentConfig value;
};

struct qn_result {
    qosnet::ExperimentConfig config; // needed to render the per-slot header
    qosnet::RunResult value;
};

namespace {

thread_local std::string g_last_error;

qn_status fail(qn_status code, const std::string& what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
qn_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QN_OK;
    } catch (const qosnet::ConfigError& e) {
        return fail(QN_ERROR_PARSE, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(QN_ERROR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QN_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(QN_ERROR_RUNTIME, e.what());
    }
}

qn_status require(bool ok, const char* what) {
    return ok ? QN_OK : fail(QN_ERROR_INVALID_ARGUMENT, what);
}

char* copy_out(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

qn_status flow_lookup(const qn_result* result, int flow_id, double qosnet::FlowSummary::*field,
                      double* out, const char* who) {
    if (qn_status s = require(result && out, who)) return s;
    for (const qosnet::FlowSummary& flow : result->value.flows) {
        if (flow.flow_id == flow_id) {
            *out = flow.*field;
            g_last_error.clear();
            return QN_OK;
        }
    }
    return fail(QN_ERROR_INVALID_ARGUMENT,
                std::string(who) + ": no flow with destination " + std::to_string(flow_id));
}

} // namespace

extern "C" {

const char* qn_version(void) { return "0.1.0"; }

const char* qn_last_error(void) { return g_last_error.c_str(); }

qn_status qn_config_parse(const char* json_text, qn_config** out) {
    if (qn_status s = require(json_text && out, "qn_config_parse: null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = new qn_config{qosnet::parse_config(json_text)}; });
}

qn_status qn_config_load(const char* path, qn_config** out) {
    if (qn_status s = require(path && out, "qn_config_load: null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::ios_base::failure(std::string("cannot open '") + path + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        *out = new qn_config{qosnet::parse_config(buf.str())};
    });
}

qn_status qn_config_serialize(const qn_config* config, char** out_json) {
    if (qn_status s = require(config && out_json, "qn_config_serialize: null argument")) return s;
    return guarded([&] { *out_json = copy_out(qosnet::serialize_config(config->value)); });
}

qn_status qn_config_set_seed(qn_config* config, uint64_t seed) {
    if (qn_status s = require(config != nullptr, "qn_config_set_seed: null argument")) return s;
    config->value.run.seed = seed;
    g_last_error.clear();
    return QN_OK;
}

qn_status qn_config_set_policy(qn_config* config, const char* name) {
    if (qn_status s = require(config && name, "qn_config_set_policy: null argument")) return s;
    return guarded([&] { config->value.policy.kind = qosnet::policy_from_name(name); });
}

qn_status qn_config_set_exact_sums(qn_config* config, int exact) {
    if (qn_status s = require(config != nullptr, "qn_config_set_exact_sums: null argument"))
        return s;
    config->value.scheduler.gossip.exact = exact != 0;
    g_last_error.clear();
    return QN_OK;
}

qn_status qn_config_set_sweep_seeds(qn_config* config, const uint64_t* seeds, size_t count) {
    if (qn_status s =
            require(config && seeds && count > 0, "qn_config_set_sweep_seeds: null or empty"))
        return s;
    if (!config->value.sweep) {
        return fail(QN_ERROR_INVALID_ARGUMENT,
                    "qn_config_set_sweep_seeds: config has no sweep section");
    }
    config->value.sweep->seeds.assign(seeds, seeds + count);
    g_last_error.clear();
    return QN_OK;
}

void qn_config_free(qn_config* config) { delete config; }

void qn_string_free(char* text) { delete[] text; }

qn_status qn_run(const qn_config* config, qn_result** out) {
    if (qn_status s = require(config && out, "qn_run: null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        auto result = std::make_unique<qn_result>();
        result->config = config->value;
        result->value = qosnet::run_simulation(config->value);
        *out = result.release();
    });
}

qn_status qn_result_slots_csv(const qn_result* result, char** out_csv) {
    if (qn_status s = require(result && out_csv, "qn_result_slots_csv: null argument")) return s;
    return guarded([&] { *out_csv = copy_out(qosnet::slots_csv(result->value, result->config)); });
}

qn_status qn_result_summary_csv(const qn_result* result, char** out_csv) {
    if (qn_status s = require(result && out_csv, "qn_result_summary_csv: null argument")) return s;
    return guarded([&] { *out_csv = copy_out(qosnet::summary_csv(result->value)); });
}

double qn_result_avg_total_queue(const qn_result* result) {
    return result ? result->value.avg_total_queue : std::nan("");
}

qn_verdict qn_result_verdict(const qn_result* result) {
    if (!result) return QN_VERDICT_INCONCLUSIVE;
    switch (result->value.verdict) {
    case qosnet::Verdict::Stable: return QN_VERDICT_STABLE;
    case qosnet::Verdict::Unstable: return QN_VERDICT_UNSTABLE;
    default: return QN_VERDICT_INCONCLUSIVE;
    }
}

int64_t qn_result_delivered(const qn_result* result) {
    return result ? result->value.delivered : -1;
}

qn_status qn_result_flow_mean_delay(const qn_result* result, int flow_id, double* out) {
    return flow_lookup(result, flow_id, &qosnet::FlowSummary::mean_delay, out,
                       "qn_result_flow_mean_delay");
}

qn_status qn_result_flow_violation(const qn_result* result, int flow_id, double* out) {
    return flow_lookup(result, flow_id, &qosnet::FlowSummary::violation_fraction, out,
                       "qn_result_flow_violation");
}

void qn_result_free(qn_result* result) { delete result; }

qn_status qn_sweep_csv(const qn_config* config, char** out_csv) {
    if (qn_status s = require(config && out_csv, "qn_sweep_csv: null argument")) return s;
    return guarded([&] {
        *out_csv = copy_out(qosnet::sweep_csv(qosnet::sweep_arrival_rates(config->value)));
    });
}

qn_status qn_bounds_csv(const qn_config* config, char** out_csv) {
    if (qn_status s = require(config && out_csv, "qn_bounds_csv: null argument")) return s;
    return guarded([&] {
        *out_csv = copy_out(qosnet::bounds_csv(qosnet::evaluate_bounds(config->value)));
    });
}

qn_status qn_required_samples(double delta, double epsilon, int64_t* out) {
    if (qn_status s = require(out != nullptr, "qn_required_samples: null argument")) return s;
    return guarded([&] { *out = qosnet::required_samples(delta, epsilon); });
}

qn_status qn_beta1_bound(int nodes, double queue_cap, double alpha3, double beta3,
                         double epsilon, double* out) {
    if (qn_status s = require(out != nullptr, "qn_beta1_bound: null argument")) return s;
    return guarded([&] { *out = qosnet::beta1_bound(nodes, queue_cap, alpha3, beta3, epsilon); });
}

qn_status qn_beta2_bound(double beta, double sigma, double* out) {
    if (qn_status s = require(out != nullptr, "qn_beta2_bound: null argument")) return s;
    return guarded([&] { *out = qosnet::beta2_bound(beta, sigma); });
}

qn_status qn_rho_bound(double alpha1, double alpha2, double beta1, double beta2, double* out) {
    if (qn_status s = require(out != nullptr, "qn_rho_bound: null argument")) return s;
    return guarded([&] { *out = qosnet::rho_bound(alpha1, alpha2, beta1, beta2); });
}

} // extern "C"
