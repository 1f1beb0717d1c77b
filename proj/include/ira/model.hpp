#pragma once

// Shared domain types for the IRA simulator and error-floor analysis.
//
// Time is measured in packet durations: T_p == 1 everywhere.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ira {

enum class ErrorCode {
    NonNormalizedDistribution,
    DegreeTooLargeForVF,
    InvalidPhysicalParameter,
    PlacementInfeasible,
    HorizonTooShort,
    DegenerateVulnerablePeriod,
    InfeasiblePattern,
    NonconvergentTruncation,
    EnumerationTooLarge,
    ConfigParse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline constexpr double kPacketDuration = 1.0;

double db_to_linear(double db);

struct SystemConfig {
    double snr_linear = 0.0;
    double rate = 0.0;          // bits/symbol
    double vf_span = 0.0;       // T_f / T_p
    double window_span = 3.0;   // receiver window, in units of T_f
    double window_step = 0.1;   // slide step, in units of T_f

    /// Builds a validated configuration; the SNR is given in dB.
    static SystemConfig make(double snr_db, double rate, double vf_span,
                             double window_span = 3.0, double window_step = 0.1);

    double window_length() const noexcept { return window_span * vf_span; }
    double step_length() const noexcept { return window_step * vf_span; }
};

struct DegreeEntry {
    int degree = 0;
    double probability = 0.0;
};

/// Degree distribution Lambda(x) = sum_d Lambda_d x^d, d >= 2.
class DegreeDistribution {
public:
    explicit DegreeDistribution(std::vector<DegreeEntry> entries);

    static DegreeDistribution regular(int degree);

    std::span<const DegreeEntry> entries() const noexcept { return entries_; }
    int max_degree() const noexcept { return entries_.back().degree; }
    double mean_degree() const noexcept { return mean_degree_; }
    /// Lambda_d, zero for degrees outside the support.
    double probability(int degree) const noexcept;
    bool is_regular() const noexcept { return entries_.size() == 1; }

private:
    std::vector<DegreeEntry> entries_;  // sorted by degree
    double mean_degree_ = 0.0;
};

struct TimeInterval {
    double begin = 0.0;
    double end = 0.0;

    TimeInterval() = default;
    TimeInterval(double b, double e);
    double length() const noexcept { return end - begin; }
};

class UserTransmission {
public:
    UserTransmission(std::uint32_t user_id, int degree, std::vector<double> replica_starts,
                     double vf_span);

    std::uint32_t user_id() const noexcept { return user_id_; }
    double arrival() const noexcept { return replica_starts_.front(); }
    int degree() const noexcept { return static_cast<int>(replica_starts_.size()); }
    std::span<const double> replica_starts() const noexcept { return replica_starts_; }

private:
    std::uint32_t user_id_;
    std::vector<double> replica_starts_;
};

/// Throws ira::Error when the configuration and distribution are inconsistent.
void validate_config(const SystemConfig& cfg, const DegreeDistribution& dist);

}  // namespace ira
