#include "ira/channel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ira/simd/mi_kernels.hpp"

namespace ira {

InterferenceTimeline::InterferenceTimeline(TimeInterval replica, std::vector<TimelineSegment> segments)
    : replica_(replica), segments_(std::move(segments))
{
    if (segments_.empty() || segments_.front().interval.begin != replica_.begin ||
        segments_.back().interval.end != replica_.end)
        throw Error(ErrorCode::InvalidPhysicalParameter, "timeline must cover the replica exactly");
    for (std::size_t i = 1; i < segments_.size(); ++i)
        if (segments_[i].interval.begin != segments_[i - 1].interval.end)
            throw Error(ErrorCode::InvalidPhysicalParameter, "timeline segments must be contiguous");
}

std::uint32_t InterferenceTimeline::max_interferers() const noexcept
{
    std::uint32_t k = 0;
    for (const auto& s : segments_)
        k = std::max(k, s.interferers);
    return k;
}

std::uint32_t InterferenceTimeline::interferers_at(double t) const
{
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const TimelineSegment& s) { return v < s.interval.end; });
    if (it == segments_.end())
        return segments_.back().interferers;
    return it->interferers;
}

InterferenceTimeline build_timeline(TimeInterval replica, std::span<const TimeInterval> others)
{
    // +1 at each clipped begin, -1 at each clipped end.
    std::vector<std::pair<double, int>> events;
    events.reserve(2 * others.size());
    std::uint32_t initial = 0;
    for (const auto& o : others) {
        const double b = std::max(o.begin, replica.begin);
        const double e = std::min(o.end, replica.end);
        if (!(b < e))
            continue;
        if (b == replica.begin)
            ++initial;
        else
            events.emplace_back(b, +1);
        if (e < replica.end)
            events.emplace_back(e, -1);
    }
    std::sort(events.begin(), events.end());

    std::vector<TimelineSegment> segments;
    double cursor = replica.begin;
    std::int64_t count = initial;
    std::size_t i = 0;
    while (i < events.size()) {
        const double at = events[i].first;
        std::int64_t next = count;
        while (i < events.size() && events[i].first == at)
            next += events[i++].second;
        if (next == count)
            continue;
        if (!segments.empty() && segments.back().interferers == static_cast<std::uint32_t>(count))
            segments.back().interval.end = at;
        else
            segments.push_back({TimeInterval(cursor, at), static_cast<std::uint32_t>(count)});
        cursor = at;
        count = next;
    }
    if (!segments.empty() && segments.back().interferers == static_cast<std::uint32_t>(count))
        segments.back().interval.end = replica.end;
    else
        segments.push_back({TimeInterval(cursor, replica.end), static_cast<std::uint32_t>(count)});
    return InterferenceTimeline(replica, std::move(segments));
}

MiTable::MiTable(double snr_linear, std::uint32_t max_interferers) : snr_(snr_linear)
{
    grow_to(max_interferers);
}

void MiTable::grow_to(std::uint32_t max_interferers)
{
    for (auto k = static_cast<std::uint32_t>(values_.size()); k <= max_interferers; ++k)
        values_.push_back(mutual_information(snr_, k));
}

double MiTable::mutual_information(double snr_linear, std::uint32_t interferers)
{
    return std::log2(1.0 + snr_linear / (1.0 + interferers * snr_linear));
}

double avg_mutual_information(const InterferenceTimeline& tl, const MiTable& table)
{
    const auto segs = tl.segments();
    std::vector<double> weights(segs.size());
    std::vector<std::uint32_t> counts(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        weights[i] = segs[i].interval.length() / kPacketDuration;
        counts[i] = segs[i].interferers;
    }
    return simd::weighted_lookup_sum(weights, counts, table.values());
}

double avg_mutual_information(const InterferenceTimeline& tl, double snr_linear)
{
    return avg_mutual_information(tl, MiTable(snr_linear, tl.max_interferers()));
}

double avg_mutual_information_discrete(const InterferenceTimeline& tl, double snr_linear,
                                       std::size_t n_symbols)
{
    if (n_symbols == 0)
        throw Error(ErrorCode::InvalidPhysicalParameter, "need at least one symbol");
    const MiTable table(snr_linear, tl.max_interferers());
    const auto replica = tl.replica();
    const double width = replica.length() / static_cast<double>(n_symbols);

    std::vector<std::uint32_t> counts(n_symbols);
    for (std::size_t i = 0; i < n_symbols; ++i)
        counts[i] = tl.interferers_at(replica.begin + (static_cast<double>(i) + 0.5) * width);
    return simd::lookup_sum(counts, table.values()) / static_cast<double>(n_symbols);
}

DecodabilityReport assess_decodability(const InterferenceTimeline& tl, const SystemConfig& cfg)
{
    DecodabilityReport report;
    report.avg_mi = avg_mutual_information(tl, cfg.snr_linear);
    report.decodable = is_decodable(report.avg_mi, cfg.rate);
    return report;
}

}  // namespace ira
