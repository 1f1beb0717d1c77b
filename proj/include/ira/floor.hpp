#pragma once

// Analytical approximation of the packet loss rate in the error-floor region.
//
// Losses at low load are attributed to dominant unresolvable collision
// patterns (UCPs): small user groups whose replicas collide so that SIC
// cannot start. Each pattern is described by its user profile (users per
// degree), the number of replica-collision sets it occupies, and its
// number of labeled realizations. The loss rate is the union bound over the
// catalog, conditioned on the Poisson number of users in a virtual frame:
//
//   p ~= sum_{m>=2} sum_S Pr(u in S | m) * Poisson(m; n_p G)
//   Pr(u in S | m) = a(m, profile, Lambda) b(n_v, mu) c(S) / d(n_v, profile) * nu / m
//
// with n_v = floor(T_f / (2 phi T_p)) disjoint vulnerable periods per frame.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ira/model.hpp"

namespace ira::analytic {

/// Users per degree, indexed by degree - 1: profile[l - 1] users send l replicas.
using DegreeProfile = std::vector<int>;

struct UcpDescriptor {
    std::string name;
    DegreeProfile profile;
    int mu = 0;                 // replica-collision sets
    std::uint64_t iso_count = 0;  // labeled realizations c(S)

    int nu() const noexcept;    // users in the pattern
    int replicas() const noexcept;
    int max_degree() const noexcept;
};

/// Throws ira::Error if the descriptor is internally inconsistent.
void validate(const UcpDescriptor& ucp);

/// The twelve dominant patterns with at most four replica-collision sets.
const std::vector<UcpDescriptor>& builtin_catalog();

/// Patterns whose every degree has positive probability under `dist`.
std::vector<UcpDescriptor> feasible_subset(std::span<const UcpDescriptor> catalog,
                                           const DegreeDistribution& dist);

/// Reads `name profile mu c` rows (profile comma-separated, '#' comments).
std::vector<UcpDescriptor> read_catalog(std::istream& in);
std::vector<UcpDescriptor> load_catalog(const std::string& path);

enum class PhiRegime {
    Normal,                  // I1 < R < I0
    InterferenceImmune,      // R <= I1: phi = 0, one interferer never fatal
    CollisionChannel,        // R == I0: phi = 1
    RateAboveCleanCapacity,  // R > I0: even a clean packet fails; phi reported as 1
};

struct VulnerableFraction {
    double phi = 0.0;
    PhiRegime regime = PhiRegime::Normal;
};

/// Fraction phi of the packet duration solving
///   phi log2(1 + P/N) + (1 - phi) log2(1 + P/(N + P)) = R,
/// clamped to [0, 1].
VulnerableFraction vulnerable_fraction(double snr_linear, double rate);

/// floor(T_f / (2 phi T_p)). Throws DegenerateVulnerablePeriod for phi == 0.
int vp_count(double vf_span, double packet_duration, double phi);

struct FloorParams {
    double phi = 0.0;
    double t_v = 0.0;  // 2 phi T_p
    int n_v = 0;       // 0 when phi == 0
    double n_p = 0.0;  // T_f / T_p
    PhiRegime regime = PhiRegime::Normal;
};

FloorParams floor_params(const SystemConfig& cfg);

// Combinatorial terms. Large binomials go through lgamma.
double log_binomial(double n, double k);
double term_a(int m, const DegreeProfile& profile, const DegreeDistribution& dist);
double term_b(int n_v, int mu);
double term_d(int n_v, const DegreeProfile& profile);

/// Clamped to [0, 1]; `clamped` (if given) is incremented when the raw value exceeded 1.
double pr_user_in_ucp(int m, const UcpDescriptor& ucp, int n_v, const DegreeDistribution& dist,
                      std::uint64_t* clamped = nullptr);

struct SeriesControl {
    double tail_tolerance = 1e-15;
    double relative_tolerance = 1e-13;
    int extra_terms = 0;  // keep summing this many terms after convergence
};

struct FloorDiagnostics {
    int last_m = 0;
    std::uint64_t clamped = 0;
};

/// General-distribution loss rate over `catalog` (infeasible rows skipped).
double plr_floor(double load, const SystemConfig& cfg, const DegreeDistribution& dist,
                 std::span<const UcpDescriptor> catalog, const SeriesControl& control = {},
                 FloorDiagnostics* diag = nullptr);

/// Regular-degree specialization, evaluated through the simplified a and d terms.
double plr_regular(double load, const SystemConfig& cfg, int degree, std::span<const UcpDescriptor> catalog,
                   const SeriesControl& control = {});

/// Two-user pattern only (two degree-d users sharing d vulnerable periods).
double plr_two_user(double load, const SystemConfig& cfg, int degree, const SeriesControl& control = {});

/// (n_p G - 1 + exp(-n_p G)) / (n_v (n_v - 1)), the degree-2 closed form of plr_two_user.
double plr_two_user_closed_form(double load, double n_p, int n_v);

/// The two-user pattern for regular degree d as a catalog row.
UcpDescriptor two_user_pattern(int degree);

/// Brute-force count of labeled configurations of the pattern's users over
/// `n_periods` labeled vulnerable periods (n_periods <= 10). Equals
/// C(n_periods, mu) * c(S) for a correct catalog row.
std::uint64_t count_configurations(const UcpDescriptor& ucp, int n_periods);

}  // namespace ira::analytic
