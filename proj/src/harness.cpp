#include "ira/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ira/receiver.hpp"
#include "ira/traffic.hpp"

namespace ira {

namespace {

constexpr std::uint64_t kMinUsersForEarlyStop = 100'000;

}  // namespace

SystemConfig ExperimentConfig::system() const
{
    return SystemConfig::make(snr_db, rate, vf_span, window_span, window_step);
}

DegreeDistribution ExperimentConfig::degree_distribution() const { return DegreeDistribution(distribution); }

void validate(const ExperimentConfig& cfg)
{
    validate_config(cfg.system(), cfg.degree_distribution());
    if (cfg.load_grid.empty())
        throw Error(ErrorCode::ConfigParse, "load grid is empty");
    for (std::size_t i = 0; i < cfg.load_grid.size(); ++i) {
        if (!(cfg.load_grid[i] > 0.0) || !std::isfinite(cfg.load_grid[i]))
            throw Error(ErrorCode::ConfigParse, fmt::format("load {} must be positive", cfg.load_grid[i]));
        if (i > 0 && !(cfg.load_grid[i] > cfg.load_grid[i - 1]))
            throw Error(ErrorCode::ConfigParse, "load grid must be strictly increasing");
    }
    if (cfg.min_users_per_point < 10'000)
        throw Error(ErrorCode::ConfigParse, "min_users_per_point must be at least 10000");
}

std::uint64_t batch_seed(std::uint64_t point_seed, std::uint64_t batch)
{
    return mix_seed(mix_seed(point_seed) + batch);
}

std::uint64_t point_seed(std::uint64_t master, std::size_t index)
{
    return mix_seed(master + (static_cast<std::uint64_t>(index) + 1) * 0x9e3779b97f4a7c15ULL);
}

PointResult run_batch(const SystemConfig& sys, const DegreeDistribution& dist, double load, std::uint64_t seed,
                      double batch_frames)
{
    const double margin = sys.window_length();
    const double horizon = batch_frames * sys.vf_span + 2.0 * margin;
    Rng rng(seed);
    const auto trace = generate_trace(sys, dist, load, horizon, rng);

    SicReceiver rx(trace, sys);
    rx.run();

    PointResult result;
    result.batches = 1;
    const auto outcomes = rx.outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const double t0 = trace.users[i].arrival();
        if (t0 < margin || t0 + sys.vf_span > horizon - margin)
            continue;
        ++result.users;
        if (outcomes[i].status != UserStatus::Decoded)
            ++result.lost;
    }
    return result;
}

PointResult run_point(const ExperimentConfig& cfg, double load, std::uint64_t seed, const RunOptions& opts)
{
    const auto sys = cfg.system();
    const auto dist = cfg.degree_distribution();
    validate_config(sys, dist);

    const std::size_t round = std::max<std::size_t>(1, opts.batches_per_round);
    unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, round));

    const auto stop = [&](const PointResult& acc) {
        if (acc.users >= cfg.min_users_per_point)
            return true;
        return cfg.max_lost_events > 0 && acc.lost >= cfg.max_lost_events && acc.users >= kMinUsersForEarlyStop;
    };

    PointResult total;
    std::vector<PointResult> results(round);
    for (std::uint64_t first = 0;; first += round) {
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t i = next++; i < round; i = next++)
                results[i] = run_batch(sys, dist, load, batch_seed(seed, first + i), opts.batch_frames);
        };
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(worker);
        }
        // Reduce in batch order and stop at the first batch meeting the rule,
        // so the outcome does not depend on scheduling.
        for (const auto& r : results) {
            total.users += r.users;
            total.lost += r.lost;
            total.batches += r.batches;
            if (stop(total))
                return total;
        }
    }
}

ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::clamp(std::min(centre - half, p), 0.0, 1.0), std::clamp(std::max(centre + half, p), 0.0, 1.0)};
}

std::vector<analytic::UcpDescriptor> experiment_catalog(const ExperimentConfig& cfg)
{
    if (cfg.catalog_file.empty())
        return analytic::builtin_catalog();
    return analytic::load_catalog(cfg.catalog_file);
}

PlrCurve predict(const ExperimentConfig& cfg)
{
    validate(cfg);
    const auto sys = cfg.system();
    const auto dist = cfg.degree_distribution();
    const auto catalog = analytic::feasible_subset(experiment_catalog(cfg), dist);

    PlrCurve curve;
    curve.params = analytic::floor_params(sys);
    for (const double g : cfg.load_grid) {
        PlrRow row;
        row.load = g;
        row.plr_floor = catalog.empty() ? 0.0 : analytic::plr_floor(g, sys, dist, catalog);
        curve.rows.push_back(row);
    }
    return curve;
}

PlrCurve sweep(const ExperimentConfig& cfg, const RunOptions& opts)
{
    PlrCurve curve = predict(cfg);
    curve.simulated = true;
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        auto& row = curve.rows[i];
        const auto point = run_point(cfg, row.load, point_seed(cfg.seed, i), opts);
        row.users = point.users;
        row.lost = point.lost;
        row.plr = point.users ? static_cast<double>(point.lost) / static_cast<double>(point.users) : 0.0;
        const auto ci = wilson_interval(point.lost, point.users, kZ95);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const PlrCurve& curve)
{
    fmt::print(out, "# phi={:.6f} n_v={} n_p={}\n", curve.params.phi, curve.params.n_v, curve.params.n_p);
    fmt::print(out, "load,users,lost,plr,ci_lo,ci_hi,plr_floor\n");
    for (const auto& r : curve.rows) {
        if (curve.simulated)
            fmt::print(out, "{},{},{},{:.10g},{:.10g},{:.10g},{:.10g}\n", r.load, r.users, r.lost, r.plr, r.ci_lo,
                       r.ci_hi, r.plr_floor);
        else
            fmt::print(out, "{},,,,,,{:.10g}\n", r.load, r.plr_floor);
    }
}

}  // namespace ira
