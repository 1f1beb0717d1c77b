// ira: IRA error-floor prediction and Monte Carlo simulation.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical guard tripped.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "ira/floor.hpp"
#include "ira/harness.hpp"
#include "ira/receiver.hpp"
#include "ira/simd/mi_kernels.hpp"
#include "ira/traffic.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
    std::optional<double> snr_db, rate, vf_span, window_span, window_step;
    std::vector<double> loads;
    std::optional<std::uint64_t> min_users, max_lost, seed;
    std::optional<std::string> output, catalog;
};

void add_experiment_flags(CLI::App* cmd, std::string& config_path, Overrides& o)
{
    cmd->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--snr-db", o.snr_db, "P/N in dB");
    cmd->add_option("--rate", o.rate, "Code rate R [bit/symbol]");
    cmd->add_option("--vf-span", o.vf_span, "Virtual frame T_f in packet durations");
    cmd->add_option("--window-span", o.window_span, "Receiver window in units of T_f");
    cmd->add_option("--window-step", o.window_step, "Window step in units of T_f");
    cmd->add_option("--loads", o.loads, "Load grid G");
    cmd->add_option("--min-users", o.min_users, "Counted users per load point");
    cmd->add_option("--max-lost", o.max_lost, "Early stop after this many losses (0 disables)");
    cmd->add_option("--seed", o.seed, "Master seed (overrides the config file)");
    cmd->add_option("--output", o.output, "Output file prefix");
    cmd->add_option("--catalog", o.catalog, "Pattern catalog file");
}

ira::ExperimentConfig resolve(const std::string& path, const Overrides& o)
{
    auto cfg = ira::load_experiment_config(path);
    if (o.snr_db) cfg.snr_db = *o.snr_db;
    if (o.rate) cfg.rate = *o.rate;
    if (o.vf_span) cfg.vf_span = *o.vf_span;
    if (o.window_span) cfg.window_span = *o.window_span;
    if (o.window_step) cfg.window_step = *o.window_step;
    if (!o.loads.empty()) cfg.load_grid = o.loads;
    if (o.min_users) cfg.min_users_per_point = *o.min_users;
    if (o.max_lost) cfg.max_lost_events = *o.max_lost;
    if (o.seed) cfg.seed = *o.seed;
    if (o.output) cfg.output = *o.output;
    if (o.catalog) cfg.catalog_file = *o.catalog;
    return cfg;
}

template <class Fn>
void emit(const std::string& prefix, const std::string& suffix, Fn&& write)
{
    if (prefix.empty()) {
        write(std::cout);
        return;
    }
    const std::string path = prefix + suffix;
    std::ofstream out(path);
    if (!out)
        throw ira::Error(ira::ErrorCode::ConfigParse, fmt::format("cannot write '{}'", path));
    write(out);
    fmt::print(std::cerr, "wrote {}\n", path);
}

void warn_if_degenerate(const ira::PlrCurve& curve)
{
    if (curve.params.n_v == 0)
        fmt::print(std::cerr, "warning: vulnerable fraction is zero (R <= log2(1 + P/(N+P))); floor is 0\n");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Irregular Repetition ALOHA: error-floor prediction and simulation"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;
    unsigned threads = 0;

    auto* predict = app.add_subcommand("predict", "Analytic loss-rate approximation over the load grid");
    add_experiment_flags(predict, config_path, overrides);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo loss rate at a single load");
    add_experiment_flags(simulate, config_path, overrides);
    double single_load = 0.0;
    simulate->add_option("--load", single_load, "Load G (default: first grid value)");
    simulate->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* sweep = app.add_subcommand("sweep", "Simulated and analytic loss rate over the load grid");
    add_experiment_flags(sweep, config_path, overrides);
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* verify = app.add_subcommand("verify-ucp", "Check catalog isomorphism counts by exhaustive enumeration");
    std::vector<int> periods{6, 7, 8};
    std::string verify_catalog;
    verify->add_option("--periods", periods, "Numbers of vulnerable periods to enumerate")->check(CLI::Range(1, 10));
    verify->add_option("--catalog", verify_catalog, "Pattern catalog file (default: built-in)");

    auto* dump = app.add_subcommand("dump-trace", "Write a traffic trace (and optionally receiver outcomes)");
    add_experiment_flags(dump, config_path, overrides);
    double dump_load = 0.0;
    double dump_horizon = 0.0;
    std::string outcomes_path;
    dump->add_option("--load", dump_load, "Load G (default: first grid value)");
    dump->add_option("--horizon", dump_horizon, "Trace length in packet durations (default: 10 T_f)");
    dump->add_option("--outcomes", outcomes_path, "Also run the receiver and write per-user outcomes here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*verify) {
            const auto catalog =
                verify_catalog.empty() ? ira::analytic::builtin_catalog() : ira::analytic::load_catalog(verify_catalog);
            bool ok = true;
            fmt::print("pattern,periods,count,expected,status\n");
            for (const auto& ucp : catalog) {
                for (const int n : periods) {
                    const auto count = ira::analytic::count_configurations(ucp, n);
                    const double expected =
                        std::round(std::exp(ira::analytic::log_binomial(n, ucp.mu))) * static_cast<double>(ucp.iso_count);
                    const bool match = static_cast<double>(count) == expected;
                    ok = ok && match;
                    fmt::print("{},{},{},{:.0f},{}\n", ucp.name, n, count, expected, match ? "ok" : "MISMATCH");
                }
            }
            return ok ? 0 : 1;
        }

        auto cfg = resolve(config_path, overrides);

        if (*predict) {
            const auto curve = ira::predict(cfg);
            warn_if_degenerate(curve);
            emit(cfg.output, ".predict.csv", [&](std::ostream& out) { ira::write_curve_csv(out, curve); });
            return 0;
        }

        if (*sweep) {
            ira::RunOptions opts;
            opts.threads = threads;
            const auto curve = ira::sweep(cfg, opts);
            warn_if_degenerate(curve);
            emit(cfg.output, ".sweep.csv", [&](std::ostream& out) { ira::write_curve_csv(out, curve); });
            return 0;
        }

        if (*simulate) {
            if (single_load > 0.0)
                cfg.load_grid = {single_load};
            else if (!cfg.load_grid.empty())
                cfg.load_grid.resize(1);
            ira::RunOptions opts;
            opts.threads = threads;
            const auto curve = ira::sweep(cfg, opts);
            warn_if_degenerate(curve);
            emit(cfg.output, ".simulate.csv", [&](std::ostream& out) { ira::write_curve_csv(out, curve); });
            return 0;
        }

        if (*dump) {
            const auto sys = cfg.system();
            const auto dist = cfg.degree_distribution();
            ira::validate_config(sys, dist);
            const double load = dump_load > 0.0 ? dump_load : (cfg.load_grid.empty() ? 0.1 : cfg.load_grid.front());
            const double horizon = dump_horizon > 0.0 ? dump_horizon : 10.0 * sys.vf_span;
            ira::Rng rng(cfg.seed);
            const auto trace = ira::generate_trace(sys, dist, load, horizon, rng);
            emit(cfg.output, ".trace.csv", [&](std::ostream& out) { ira::write_trace_csv(out, trace); });
            if (!outcomes_path.empty()) {
                ira::SicReceiver rx(trace, sys);
                rx.run();
                std::ofstream out(outcomes_path);
                if (!out)
                    throw ira::Error(ira::ErrorCode::ConfigParse, fmt::format("cannot write '{}'", outcomes_path));
                ira::write_outcomes_csv(out, rx.outcomes());
            }
            return 0;
        }
    } catch (const ira::Error& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return e.code() == ira::ErrorCode::NonconvergentTruncation ? kExitNumerical : kExitConfig;
    }
    return 0;
}
