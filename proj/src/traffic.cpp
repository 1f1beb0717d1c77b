#include "ira/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ira {

std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int sample_degree(const DegreeDistribution& dist, Rng& rng)
{
    const auto entries = dist.entries();
    if (entries.size() == 1)
        return entries.front().degree;
    double u = rng.uniform();
    for (const auto& e : entries) {
        if (u < e.probability)
            return e.degree;
        u -= e.probability;
    }
    return entries.back().degree;
}

std::vector<double> place_replicas(double t0, int degree, const SystemConfig& cfg, Rng& rng)
{
    if (degree < 1 || degree * kPacketDuration > cfg.vf_span)
        throw Error(ErrorCode::PlacementInfeasible,
                    fmt::format("{} replicas cannot fit a virtual frame of {} packets", degree, cfg.vf_span));

    // Sorted points in [0, L] with spacing >= 1 (and the first >= 1 from 0) are
    // in one-to-one, volume-preserving correspondence with sorted points in
    // [0, L - (d-1)] via x_i = y_i + i. Sampling y uniformly therefore gives
    // the uniform law on the feasible set without rejection.
    const int later = degree - 1;
    const double slack = (cfg.vf_span - kPacketDuration) - later * kPacketDuration;

    std::vector<double> offsets(static_cast<std::size_t>(later));
    for (auto& y : offsets)
        y = rng.uniform() * slack;
    std::sort(offsets.begin(), offsets.end());

    std::vector<double> starts;
    starts.reserve(static_cast<std::size_t>(degree));
    starts.push_back(t0);
    for (int i = 0; i < later; ++i)
        starts.push_back(t0 + offsets[static_cast<std::size_t>(i)] + (i + 1) * kPacketDuration);
    return starts;
}

TrafficTrace generate_trace(const SystemConfig& cfg, const DegreeDistribution& dist, double load,
                            double horizon, Rng& rng)
{
    if (!(horizon >= cfg.window_length()))
        throw Error(ErrorCode::HorizonTooShort,
                    fmt::format("horizon {} shorter than the receiver window {}", horizon, cfg.window_length()));
    if (!(load > 0.0))
        throw Error(ErrorCode::InvalidPhysicalParameter, "load must be positive");

    TrafficTrace trace;
    trace.horizon = horizon;
    trace.load = load;
    trace.users.reserve(static_cast<std::size_t>(load * horizon * 1.1) + 16);

    double t = 0.0;
    std::uint32_t next_id = 0;
    for (;;) {
        t += rng.exponential(load);
        if (t > horizon)
            break;
        const int degree = sample_degree(dist, rng);
        trace.users.emplace_back(next_id++, degree, place_replicas(t, degree, cfg, rng), cfg.vf_span);
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const TrafficTrace& trace)
{
    fmt::print(out, "user_id,degree,replica_index,start_time\n");
    for (const auto& u : trace.users) {
        const auto starts = u.replica_starts();
        for (std::size_t r = 0; r < starts.size(); ++r)
            fmt::print(out, "{},{},{},{:.17g}\n", u.user_id(), u.degree(), r, starts[r]);
    }
}

}  // namespace ira
