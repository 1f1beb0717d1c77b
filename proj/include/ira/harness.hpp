#pragma once

// Experiment orchestration: seeded Monte Carlo load sweeps next to the
// analytic error-floor prediction.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ira/floor.hpp"
#include "ira/model.hpp"

namespace ira {

struct ExperimentConfig {
    double snr_db = 6.0;
    double rate = 1.5;
    double vf_span = 200.0;
    double window_span = 3.0;
    double window_step = 0.1;
    std::vector<DegreeEntry> distribution;
    std::vector<double> load_grid;
    std::uint64_t min_users_per_point = 1'000'000;
    std::uint64_t max_lost_events = 0;  // 0 disables the early stop
    std::uint64_t seed = 1;
    std::string output;        // file prefix; empty writes to stdout
    std::string catalog_file;  // empty uses the built-in catalog

    SystemConfig system() const;
    DegreeDistribution degree_distribution() const;
};

/// Throws ira::Error(ConfigParse or a model error) on invalid experiments.
void validate(const ExperimentConfig& cfg);

/// Flat `key = value` text; see README for the key list.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);
void write_experiment_config(std::ostream& out, const ExperimentConfig& cfg);

struct RunOptions {
    unsigned threads = 0;                // 0: hardware concurrency
    std::size_t batches_per_round = 16;  // fixed, so results do not depend on `threads`
    double batch_frames = 200.0;         // counted span of one batch, in virtual frames
};

struct PointResult {
    std::uint64_t users = 0;  // counted users (edge-excluded)
    std::uint64_t lost = 0;
    std::uint64_t batches = 0;
};

/// Seed of batch `batch` of a point: mix(mix(point_seed) + batch).
std::uint64_t batch_seed(std::uint64_t point_seed, std::uint64_t batch);
/// Seed of grid point `index` in a sweep: mix(master + (index + 1) * golden gamma).
std::uint64_t point_seed(std::uint64_t master, std::size_t index);

/// Outcome counts of one simulated batch for users whose virtual frame lies
/// within the counted span.
PointResult run_batch(const SystemConfig& sys, const DegreeDistribution& dist, double load, std::uint64_t seed,
                      double batch_frames);

PointResult run_point(const ExperimentConfig& cfg, double load, std::uint64_t seed, const RunOptions& opts = {});

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
};

ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct PlrRow {
    double load = 0.0;
    std::uint64_t users = 0;
    std::uint64_t lost = 0;
    double plr = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double plr_floor = 0.0;
};

struct PlrCurve {
    analytic::FloorParams params;
    bool simulated = false;
    std::vector<PlrRow> rows;
};

std::vector<analytic::UcpDescriptor> experiment_catalog(const ExperimentConfig& cfg);

PlrCurve sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
PlrCurve predict(const ExperimentConfig& cfg);

/// '#' header lines with phi and n_v, then
/// load,users,lost,plr,ci_lo,ci_hi,plr_floor
void write_curve_csv(std::ostream& out, const PlrCurve& curve);

}  // namespace ira
