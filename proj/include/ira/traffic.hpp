#pragma once

// Poisson traffic generation with IRA replica placement.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "ira/model.hpp"

namespace ira {

/// SplitMix64 finalizer, used to derive independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Random stream handle. Variate transforms are written out explicitly so
/// traces are bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }
    std::uint64_t next() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct TrafficTrace {
    std::vector<UserTransmission> users;  // sorted by arrival
    double horizon = 0.0;
    double load = 0.0;
};

int sample_degree(const DegreeDistribution& dist, Rng& rng);

/// Start times for the d replicas of a user arriving at t0, first at t0, all
/// inside [t0, t0 + T_f - T_p], pairwise separated by at least T_p. The later
/// d-1 starts are uniform over the feasible region.
std::vector<double> place_replicas(double t0, int degree, const SystemConfig& cfg, Rng& rng);

TrafficTrace generate_trace(const SystemConfig& cfg, const DegreeDistribution& dist, double load,
                            double horizon, Rng& rng);

/// One line per replica: user_id,degree,replica_index,start_time
void write_trace_csv(std::ostream& out, const TrafficTrace& trace);

}  // namespace ira
