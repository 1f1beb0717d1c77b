#include "ira/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace ira {

namespace {

constexpr double kNormalizationTolerance = 1e-12;
// Replica separation is checked with a little slack for rounding in t0 + offset.
constexpr double kSeparationSlack = 1e-9;

}  // namespace

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonNormalizedDistribution: return "NonNormalizedDistribution";
    case ErrorCode::DegreeTooLargeForVF: return "DegreeTooLargeForVF";
    case ErrorCode::InvalidPhysicalParameter: return "InvalidPhysicalParameter";
    case ErrorCode::PlacementInfeasible: return "PlacementInfeasible";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::DegenerateVulnerablePeriod: return "DegenerateVulnerablePeriod";
    case ErrorCode::InfeasiblePattern: return "InfeasiblePattern";
    case ErrorCode::NonconvergentTruncation: return "NonconvergentTruncation";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::ConfigParse: return "ConfigParse";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)), code_(code)
{
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SystemConfig SystemConfig::make(double snr_db, double rate, double vf_span, double window_span,
                                double window_step)
{
    SystemConfig cfg;
    cfg.snr_linear = db_to_linear(snr_db);
    cfg.rate = rate;
    cfg.vf_span = vf_span;
    cfg.window_span = window_span;
    cfg.window_step = window_step;

    if (!std::isfinite(snr_db) || !(cfg.snr_linear > 0.0))
        throw Error(ErrorCode::InvalidPhysicalParameter, "SNR must be finite");
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw Error(ErrorCode::InvalidPhysicalParameter, "rate must be positive");
    if (!(vf_span >= 2.0) || !std::isfinite(vf_span))
        throw Error(ErrorCode::InvalidPhysicalParameter, "virtual frame must span at least 2 packets");
    if (!(window_span >= 1.0 + 1.0 / vf_span))
        throw Error(ErrorCode::InvalidPhysicalParameter,
                    "receiver window must hold one virtual frame plus one packet");
    if (!(window_step > 0.0) || !std::isfinite(window_step))
        throw Error(ErrorCode::InvalidPhysicalParameter, "window step must be positive");
    return cfg;
}

DegreeDistribution::DegreeDistribution(std::vector<DegreeEntry> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw Error(ErrorCode::NonNormalizedDistribution, "empty degree distribution");

    std::sort(entries_.begin(), entries_.end(),
              [](const DegreeEntry& a, const DegreeEntry& b) { return a.degree < b.degree; });

    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.degree < 2)
            throw Error(ErrorCode::InvalidPhysicalParameter,
                        fmt::format("degree {} below the minimum of 2", e.degree));
        if (i > 0 && entries_[i - 1].degree == e.degree)
            throw Error(ErrorCode::InvalidPhysicalParameter,
                        fmt::format("degree {} listed twice", e.degree));
        if (!(e.probability > 0.0) || e.probability > 1.0)
            throw Error(ErrorCode::NonNormalizedDistribution,
                        fmt::format("probability {} for degree {} outside (0,1]", e.probability, e.degree));
        total += e.probability;
        mean_degree_ += e.degree * e.probability;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        throw Error(ErrorCode::NonNormalizedDistribution,
                    fmt::format("probabilities sum to {:.15g}", total));
}

DegreeDistribution DegreeDistribution::regular(int degree)
{
    return DegreeDistribution({DegreeEntry{degree, 1.0}});
}

double DegreeDistribution::probability(int degree) const noexcept
{
    for (const auto& e : entries_)
        if (e.degree == degree)
            return e.probability;
    return 0.0;
}

TimeInterval::TimeInterval(double b, double e) : begin(b), end(e)
{
    if (!(b < e))
        throw Error(ErrorCode::InvalidPhysicalParameter, "interval must satisfy begin < end");
}

UserTransmission::UserTransmission(std::uint32_t user_id, int degree, std::vector<double> replica_starts,
                                   double vf_span)
    : user_id_(user_id), replica_starts_(std::move(replica_starts))
{
    if (degree < 2 || static_cast<std::size_t>(degree) != replica_starts_.size())
        throw Error(ErrorCode::InvalidPhysicalParameter,
                    fmt::format("user {}: degree {} does not match {} replica starts", user_id, degree,
                                replica_starts_.size()));
    if (!std::is_sorted(replica_starts_.begin(), replica_starts_.end()))
        throw Error(ErrorCode::InvalidPhysicalParameter, "replica starts must be sorted");

    const double t0 = replica_starts_.front();
    const double last_allowed = t0 + vf_span - kPacketDuration;
    if (replica_starts_.back() > last_allowed + kSeparationSlack)
        throw Error(ErrorCode::InvalidPhysicalParameter,
                    fmt::format("user {}: replica leaves its virtual frame", user_id));
    for (std::size_t i = 1; i < replica_starts_.size(); ++i)
        if (replica_starts_[i] - replica_starts_[i - 1] < kPacketDuration - kSeparationSlack)
            throw Error(ErrorCode::InvalidPhysicalParameter,
                        fmt::format("user {}: replicas {} and {} self-interfere", user_id, i - 1, i));
}

void validate_config(const SystemConfig& cfg, const DegreeDistribution& dist)
{
    if (!(cfg.snr_linear > 0.0) || !(cfg.rate > 0.0) || !(cfg.vf_span >= 2.0))
        throw Error(ErrorCode::InvalidPhysicalParameter, "SNR, rate and virtual frame must be positive");
    if (!(cfg.window_span >= 1.0 + 1.0 / cfg.vf_span) || !(cfg.window_step > 0.0))
        throw Error(ErrorCode::InvalidPhysicalParameter, "receiver window too short");

    double total = 0.0;
    for (const auto& e : dist.entries())
        total += e.probability;
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        throw Error(ErrorCode::NonNormalizedDistribution, fmt::format("probabilities sum to {}", total));

    if (dist.max_degree() * kPacketDuration > cfg.vf_span)
        throw Error(ErrorCode::DegreeTooLargeForVF,
                    fmt::format("{} replicas do not fit a virtual frame of {} packets", dist.max_degree(),
                                cfg.vf_span));
}

}  // namespace ira
