#pragma once

// Block interference channel: piecewise-constant interference over a replica
// and the average mutual information it leaves for decoding.

#include <cstdint>
#include <span>
#include <vector>

#include "ira/model.hpp"

namespace ira {

struct TimelineSegment {
    TimeInterval interval;
    std::uint32_t interferers = 0;
};

/// Interferer count over one replica, as contiguous right-open segments
/// exactly covering [start, start + T_p]. Adjacent segments carry different
/// counts.
class InterferenceTimeline {
public:
    InterferenceTimeline(TimeInterval replica, std::vector<TimelineSegment> segments);

    TimeInterval replica() const noexcept { return replica_; }
    std::span<const TimelineSegment> segments() const noexcept { return segments_; }
    std::uint32_t max_interferers() const noexcept;
    /// Interferer count at time t (right-open segments; the replica end
    /// belongs to the last segment).
    std::uint32_t interferers_at(double t) const;

private:
    TimeInterval replica_;
    std::vector<TimelineSegment> segments_;
};

InterferenceTimeline build_timeline(TimeInterval replica, std::span<const TimeInterval> others);

/// Per-symbol mutual information log2(1 + P/(N + kP)) indexed by the number
/// of equal-power interferers k.
class MiTable {
public:
    explicit MiTable(double snr_linear, std::uint32_t max_interferers = 32);

    double snr() const noexcept { return snr_; }
    double operator[](std::uint32_t k) const { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }
    std::uint32_t max_interferers() const noexcept { return static_cast<std::uint32_t>(values_.size() - 1); }
    void grow_to(std::uint32_t max_interferers);

    static double mutual_information(double snr_linear, std::uint32_t interferers);

private:
    double snr_;
    std::vector<double> values_;
};

/// Length-weighted average of the per-symbol mutual information over the
/// timeline, i.e. the symbol average taken in the continuous-time limit.
double avg_mutual_information(const InterferenceTimeline& tl, double snr_linear);
double avg_mutual_information(const InterferenceTimeline& tl, const MiTable& table);

/// Symbol-level average over n_symbols equal symbols, each taking the
/// interferer count at its midpoint.
double avg_mutual_information_discrete(const InterferenceTimeline& tl, double snr_linear,
                                       std::size_t n_symbols);

inline bool is_decodable(double avg_mi, double rate) noexcept { return rate <= avg_mi; }

struct DecodabilityReport {
    double avg_mi = 0.0;
    bool decodable = false;
};

DecodabilityReport assess_decodability(const InterferenceTimeline& tl, const SystemConfig& cfg);

}  // namespace ira
