#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "qosnet.h"

namespace fs = std::filesystem;

namespace {

struct ConfigDeleter {
    void operator()(qn_config* p) const { qn_config_free(p); }
};
struct ResultDeleter {
    void operator()(qn_result* p) const { qn_result_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { qn_string_free(p); }
};

using ConfigPtr = std::unique_ptr<qn_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<qn_result, ResultDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report(qn_status status) {
    std::cerr << "error: " << qn_last_error() << '\n';
    return static_cast<int>(status);
}

int write_file(const fs::path& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path.string() << "' for writing\n";
        return static_cast<int>(QN_ERROR_IO);
    }
    const std::string_view view(text);
    out.write(view.data(), static_cast<std::streamsize>(view.size()));
    out.flush();
    if (!out) {
        std::cerr << "error: short write to '" << path.string() << "'\n";
        return static_cast<int>(QN_ERROR_IO);
    }
    std::cerr << "wrote " << path.string() << " (" << view.size() << " bytes)\n";
    return 0;
}

const char* verdict_label(qn_verdict v) {
    switch (v) {
    case QN_VERDICT_STABLE: return "stable";
    case QN_VERDICT_UNSTABLE: return "unstable";
    default: return "inconclusive";
    }
}

struct Options {
    std::string config;
    std::string out = ".";
    std::string policy;
    std::uint64_t seed = 0;
    bool exact = false;
    std::vector<std::uint64_t> seeds;
};

void add_common(CLI::App& cmd, Options& opts) {
    cmd.add_option("--config", opts.config, "experiment description (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd.add_option("--seed", opts.seed, "override the run seed");
    cmd.add_option("--out", opts.out, "output directory")->capture_default_str();
    cmd.add_flag("--exact-gossip", opts.exact, "replace gossip estimates with exact sums");
    cmd.add_option("--policy", opts.policy,
                   "override the scheduling policy (qos_distributed, centralized_maxweight, "
                   "lee_style, ddrpc_style)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed QoS-aware scheduling experiments"};
    app.require_subcommand(1);

    Options opts;
    CLI::App* cmd_run = app.add_subcommand("run", "single experiment; emits slots.csv and summary.csv");
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "arrival-rate grid over policies and seeds; emits sweep.csv");
    CLI::App* cmd_bounds = app.add_subcommand("bounds", "analytic bound table; emits bounds.csv");
    add_common(*cmd_run, opts);
    add_common(*cmd_sweep, opts);
    add_common(*cmd_bounds, opts);
    cmd_sweep->add_option("--seeds", opts.seeds, "comma-separated seed list for the sweep grid")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    CLI::App* active = app.get_subcommands().front();

    qn_config* raw_config = nullptr;
    if (qn_status s = qn_config_load(opts.config.c_str(), &raw_config)) return report(s);
    ConfigPtr config(raw_config);
    std::cerr << "config " << opts.config << '\n';

    if (active->count("--seed") > 0) {
        if (qn_status s = qn_config_set_seed(config.get(), opts.seed)) return report(s);
        std::cerr << "override seed=" << opts.seed << '\n';
    }
    if (!opts.policy.empty()) {
        if (qn_status s = qn_config_set_policy(config.get(), opts.policy.c_str()))
            return report(s);
        std::cerr << "override policy=" << opts.policy << '\n';
    }
    if (opts.exact) {
        if (qn_status s = qn_config_set_exact_sums(config.get(), 1)) return report(s);
        std::cerr << "override exact sums\n";
    }
    if (!opts.seeds.empty()) {
        if (qn_status s =
                qn_config_set_sweep_seeds(config.get(), opts.seeds.data(), opts.seeds.size()))
            return report(s);
        std::cerr << "override " << opts.seeds.size() << " sweep seeds\n";
    }

    std::error_code ec;
    fs::create_directories(opts.out, ec);
    if (ec) {
        std::cerr << "error: cannot create '" << opts.out << "': " << ec.message() << '\n';
        return static_cast<int>(QN_ERROR_IO);
    }
    const fs::path out_dir(opts.out);

    if (cmd_run->parsed()) {
        qn_result* raw_result = nullptr;
        if (qn_status s = qn_run(config.get(), &raw_result)) return report(s);
        ResultPtr result(raw_result);
        std::cerr << "verdict " << verdict_label(qn_result_verdict(result.get()))
                  << ", avg_total_queue " << qn_result_avg_total_queue(result.get())
                  << ", delivered " << qn_result_delivered(result.get()) << '\n';

        char* text = nullptr;
        if (qn_status s = qn_result_slots_csv(result.get(), &text)) return report(s);
        StringPtr slots(text);
        if (int rc = write_file(out_dir / "slots.csv", slots.get())) return rc;

        if (qn_status s = qn_result_summary_csv(result.get(), &text)) return report(s);
        StringPtr summary(text);
        if (int rc = write_file(out_dir / "summary.csv", summary.get())) return rc;
        return 0;
    }

    if (cmd_sweep->parsed()) {
        char* text = nullptr;
        if (qn_status s = qn_sweep_csv(config.get(), &text)) return report(s);
        StringPtr table(text);
        return write_file(out_dir / "sweep.csv", table.get());
    }

    char* text = nullptr;
    if (qn_status s = qn_bounds_csv(config.get(), &text)) return report(s);
    StringPtr table(text);
    return write_file(out_dir / "bounds.csv", table.get());
}
