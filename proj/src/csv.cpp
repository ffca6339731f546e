#include "qosnet/csv.hpp"

#include <cmath>
#include <cstdio>

namespace qosnet {

namespace {

std::string num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string num(long long v) { return std::to_string(v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string opt(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

} // namespace

std::string slots_csv(const RunResult& result, const ExperimentConfig& config) {
    std::string out = "slot,chi,adopted,total_queue";
    for (const FlowSpec& flow : config.flows) {
        const std::string c = std::to_string(flow.destination);
        out += ",q_flow" + c + ",mean_delay_flow" + c + ",violation_flow" + c + ",eta_flow" + c;
    }
    out += '\n';
    out.reserve(out.size() + result.series.size() * (out.size() + 16));
    for (const MetricsRecord& rec : result.series) {
        out += num(rec.slot);
        out += ',';
        out += std::to_string(rec.chi);
        out += ',';
        out += std::to_string(rec.adopted);
        out += ',';
        out += num(rec.total_queue);
        for (std::size_t f = 0; f < config.flows.size(); ++f) {
            out += ',';
            out += num(rec.flow_queue[f]);
            out += ',';
            out += num(rec.flow_mean_delay[f]);
            out += ',';
            out += num(rec.flow_violation[f]);
            out += ',';
            out += std::to_string(static_cast<int>(rec.flow_eta[f]));
        }
        out += '\n';
    }
    return out;
}

std::string summary_csv(const RunResult& result) {
    std::string out =
        "scope,flow,avg_total_queue,verdict,created,delivered,queued_end,mean_delay,"
        "violation_fraction\n";
    out += "run,,";
    out += num(result.avg_total_queue);
    out += ',';
    out += verdict_name(result.verdict);
    out += ',';
    out += num(result.created);
    out += ',';
    out += num(result.delivered);
    out += ',';
    out += num(result.queued_end);
    out += ",,\n";
    for (const FlowSummary& flow : result.flows) {
        out += "flow,";
        out += std::to_string(flow.flow_id);
        out += ",,,,";
        out += num(flow.delivered);
        out += ",,";
        out += num(flow.mean_delay);
        out += ',';
        out += num(flow.violation_fraction);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = "rate,policy,seed,time_avg_total_queue,verdict\n";
    for (const SweepRow& row : table.rows) {
        out += num(row.rate);
        out += ',';
        out += policy_name(row.policy);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += num(row.avg_total_queue);
        out += ',';
        out += verdict_name(row.verdict);
        out += '\n';
    }
    return out;
}

std::string bounds_csv(const BoundsTable& table) {
    std::string out =
        "alpha1,alpha2,nodes,queue_cap,alpha3,beta3,epsilon_ball,beta,sigma,beta1,beta2,rho\n";
    for (const BoundsResult& row : table.rows) {
        out += num(row.inputs.alpha1);
        out += ',';
        out += num(row.inputs.alpha2);
        out += ',';
        out += opt(row.inputs.nodes);
        out += ',';
        out += opt(row.inputs.queue_cap);
        out += ',';
        out += opt(row.inputs.alpha3);
        out += ',';
        out += opt(row.inputs.beta3);
        out += ',';
        out += opt(row.inputs.epsilon_ball);
        out += ',';
        out += opt(row.inputs.beta);
        out += ',';
        out += opt(row.inputs.sigma);
        out += ',';
        out += num(row.beta1);
        out += ',';
        out += num(row.beta2);
        out += ',';
        out += num(row.rho);
        out += '\n';
    }
    return out;
}

} // namespace qosnet
