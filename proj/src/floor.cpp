#include "ira/floor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include <fmt/core.h>

namespace ira::analytic {

int UcpDescriptor::nu() const noexcept { return std::accumulate(profile.begin(), profile.end(), 0); }

int UcpDescriptor::replicas() const noexcept
{
    int total = 0;
    for (std::size_t i = 0; i < profile.size(); ++i)
        total += static_cast<int>(i + 1) * profile[i];
    return total;
}

int UcpDescriptor::max_degree() const noexcept
{
    for (std::size_t i = profile.size(); i-- > 0;)
        if (profile[i] > 0)
            return static_cast<int>(i + 1);
    return 0;
}

void validate(const UcpDescriptor& ucp)
{
    const auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::ConfigParse, fmt::format("pattern '{}': {}", ucp.name, why));
    };
    if (ucp.name.empty())
        fail("missing name");
    if (std::any_of(ucp.profile.begin(), ucp.profile.end(), [](int v) { return v < 0; }))
        fail("negative user count");
    if (!ucp.profile.empty() && ucp.profile[0] != 0)
        fail("degree-1 users cannot take part in a pattern");
    if (ucp.nu() < 2)
        fail("needs at least two users");
    if (ucp.mu < 1)
        fail("needs at least one replica-collision set");
    if (ucp.replicas() < 2 * ucp.mu)
        fail("every replica-collision set needs two replicas");
    if (ucp.max_degree() > ucp.mu)
        fail("a user cannot place two replicas in one collision set");
    if (ucp.iso_count < 1)
        fail("isomorphism count must be positive");
}

const std::vector<UcpDescriptor>& builtin_catalog()
{
    static const std::vector<UcpDescriptor> catalog = {
        {"S1", {0, 2, 0, 0}, 2, 1},    {"S2", {0, 0, 2, 0}, 3, 1},    {"S3", {0, 3, 0, 0}, 3, 6},
        {"S4", {0, 2, 1, 0}, 3, 6},    {"S5", {0, 0, 0, 2}, 4, 1},    {"S6", {0, 2, 0, 1}, 4, 6},
        {"S7", {0, 1, 2, 0}, 4, 12},   {"S8", {0, 1, 1, 1}, 4, 12},   {"S9", {0, 0, 3, 0}, 4, 24},
        {"S10", {0, 0, 2, 1}, 4, 12},  {"S11", {0, 3, 0, 1}, 4, 24},  {"S12", {0, 4, 0, 0}, 4, 72},
    };
    return catalog;
}

std::vector<UcpDescriptor> feasible_subset(std::span<const UcpDescriptor> catalog, const DegreeDistribution& dist)
{
    std::vector<UcpDescriptor> out;
    for (const auto& ucp : catalog) {
        bool ok = true;
        for (std::size_t i = 0; i < ucp.profile.size(); ++i)
            if (ucp.profile[i] > 0 && dist.probability(static_cast<int>(i + 1)) <= 0.0)
                ok = false;
        if (ok)
            out.push_back(ucp);
    }
    return out;
}

std::vector<UcpDescriptor> read_catalog(std::istream& in)
{
    std::vector<UcpDescriptor> catalog;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream row(line);
        UcpDescriptor ucp;
        std::string profile;
        if (!(row >> ucp.name))
            continue;
        long long iso = 0;
        if (!(row >> profile >> ucp.mu >> iso))
            throw Error(ErrorCode::ConfigParse,
                        fmt::format("catalog line {}: expected 'name profile mu c'", line_no));
        std::string extra;
        if (row >> extra)
            throw Error(ErrorCode::ConfigParse, fmt::format("catalog line {}: trailing field '{}'", line_no, extra));
        if (iso < 1)
            throw Error(ErrorCode::ConfigParse, fmt::format("catalog line {}: c must be positive", line_no));
        ucp.iso_count = static_cast<std::uint64_t>(iso);

        std::istringstream fields(profile);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                ucp.profile.push_back(std::stoi(field, &used));
                if (used != field.size())
                    throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ConfigParse,
                            fmt::format("catalog line {}: bad profile entry '{}'", line_no, field));
            }
        }
        validate(ucp);
        catalog.push_back(std::move(ucp));
    }
    if (catalog.empty())
        throw Error(ErrorCode::ConfigParse, "catalog has no patterns");
    return catalog;
}

std::vector<UcpDescriptor> load_catalog(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigParse, fmt::format("cannot open catalog '{}'", path));
    return read_catalog(in);
}

VulnerableFraction vulnerable_fraction(double snr_linear, double rate)
{
    if (!(snr_linear > 0.0) || !(rate > 0.0))
        throw Error(ErrorCode::InvalidPhysicalParameter, "SNR and rate must be positive");
    const double clean = std::log2(1.0 + snr_linear);
    const double one_interferer = std::log2(1.0 + snr_linear / (1.0 + snr_linear));

    if (rate > clean)
        return {1.0, PhiRegime::RateAboveCleanCapacity};
    if (rate == clean)
        return {1.0, PhiRegime::CollisionChannel};
    if (rate <= one_interferer)
        return {0.0, PhiRegime::InterferenceImmune};
    const double phi = (rate - one_interferer) / (clean - one_interferer);
    return {std::clamp(phi, 0.0, 1.0), PhiRegime::Normal};
}

int vp_count(double vf_span, double packet_duration, double phi)
{
    if (!(phi > 0.0))
        throw Error(ErrorCode::DegenerateVulnerablePeriod, "vulnerable fraction is zero");
    return static_cast<int>(std::floor(vf_span / (2.0 * phi * packet_duration)));
}

FloorParams floor_params(const SystemConfig& cfg)
{
    const auto vf = vulnerable_fraction(cfg.snr_linear, cfg.rate);
    FloorParams p;
    p.phi = vf.phi;
    p.regime = vf.regime;
    p.t_v = 2.0 * vf.phi * kPacketDuration;
    p.n_p = cfg.vf_span / kPacketDuration;
    p.n_v = vf.phi > 0.0 ? vp_count(cfg.vf_span, kPacketDuration, vf.phi) : 0;
    return p;
}

double log_binomial(double n, double k)
{
    if (k < 0.0 || k > n)
        return -INFINITY;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace {

double log_term_a(int m, const DegreeProfile& profile, const DegreeDistribution& dist)
{
    int nu = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const int users = profile[i];
        if (users == 0)
            continue;
        const double lambda = dist.probability(static_cast<int>(i + 1));
        if (lambda <= 0.0)
            return -INFINITY;
        acc += users * std::log(lambda) - std::lgamma(users + 1.0);
        nu += users;
    }
    if (m < nu)
        return -INFINITY;
    return log_binomial(m, nu) + std::lgamma(nu + 1.0) + acc;
}

double log_term_b(int n_v, int mu)
{
    if (mu < 1 || mu > n_v)
        throw Error(ErrorCode::InfeasiblePattern, fmt::format("{} collision sets exceed {} periods", mu, n_v));
    return log_binomial(n_v - 1, mu - 1);
}

double log_term_d(int n_v, const DegreeProfile& profile)
{
    double acc = -std::log(static_cast<double>(n_v));
    for (std::size_t i = 0; i < profile.size(); ++i)
        if (profile[i] > 0)
            acc += profile[i] * (std::log(static_cast<double>(n_v)) + log_binomial(n_v - 1, static_cast<double>(i)));
    return acc;
}

bool pattern_fits(const UcpDescriptor& ucp, int n_v) { return ucp.mu <= n_v && ucp.max_degree() <= n_v; }

double clamp_probability(double p, std::uint64_t* clamped)
{
    if (p > 1.0) {
        if (clamped)
            ++*clamped;
        return 1.0;
    }
    return p;
}

// Sums sum_{m>=2} weight(m) Poisson(m; lambda), where weight(m) is bounded by
// weight_cap, stopping once the remaining Poisson mass is negligible both in
// absolute terms and relative to the partial sum.
template <class Weight>
double poisson_series(double lambda, int min_m, double weight_cap, const SeriesControl& control, Weight&& weight,
                      int* last_m = nullptr)
{
    if (!(lambda > 0.0))
        return 0.0;
    const double log_lambda = std::log(lambda);
    const int cap = static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 50.0)) + control.extra_terms;

    double sum = 0.0;
    int remaining_extra = -1;
    for (int m = 2; m <= cap; ++m) {
        const double pmf = std::exp(-lambda + m * log_lambda - std::lgamma(m + 1.0));
        const double term = weight(m) * pmf;
        sum += term;

        if (remaining_extra >= 0) {
            if (remaining_extra-- == 0) {
                if (last_m)
                    *last_m = m;
                return sum;
            }
            continue;
        }
        if (m < min_m || m + 2 <= lambda)
            continue;
        const double tail = pmf * (lambda / (m + 1)) / (1.0 - lambda / (m + 2));
        const bool converged = tail < control.tail_tolerance &&
                               tail * weight_cap <= control.relative_tolerance * sum &&
                               term <= control.relative_tolerance * sum;
        if (converged || (sum == 0.0 && tail < control.tail_tolerance * 1e-10)) {
            if (control.extra_terms == 0) {
                if (last_m)
                    *last_m = m;
                return sum;
            }
            remaining_extra = control.extra_terms - 1;
        }
    }
    throw Error(ErrorCode::NonconvergentTruncation,
                fmt::format("Poisson series did not converge by m = {} (lambda = {})", cap, lambda));
}

}  // namespace

double term_a(int m, const DegreeProfile& profile, const DegreeDistribution& dist)
{
    const double v = log_term_a(m, profile, dist);
    return v == -INFINITY ? 0.0 : std::exp(v);
}

double term_b(int n_v, int mu) { return std::exp(log_term_b(n_v, mu)); }

double term_d(int n_v, const DegreeProfile& profile) { return std::exp(log_term_d(n_v, profile)); }

double pr_user_in_ucp(int m, const UcpDescriptor& ucp, int n_v, const DegreeDistribution& dist,
                      std::uint64_t* clamped)
{
    const int nu = ucp.nu();
    if (m < nu || m <= 0)
        return 0.0;
    const double log_a = log_term_a(m, ucp.profile, dist);
    if (log_a == -INFINITY)
        return 0.0;
    const double log_value = log_a + log_term_b(n_v, ucp.mu) + std::log(static_cast<double>(ucp.iso_count)) -
                             log_term_d(n_v, ucp.profile) + std::log(static_cast<double>(nu) / m);
    return clamp_probability(std::exp(log_value), clamped);
}

double plr_floor(double load, const SystemConfig& cfg, const DegreeDistribution& dist,
                 std::span<const UcpDescriptor> catalog, const SeriesControl& control, FloorDiagnostics* diag)
{
    if (catalog.empty())
        throw Error(ErrorCode::InfeasiblePattern, "empty pattern catalog");
    const auto params = floor_params(cfg);
    if (params.n_v <= 0)
        return 0.0;

    std::vector<UcpDescriptor> usable;
    for (const auto& ucp : feasible_subset(catalog, dist))
        if (pattern_fits(ucp, params.n_v))
            usable.push_back(ucp);
    if (usable.empty())
        return 0.0;
    int min_m = 2;
    for (const auto& ucp : usable)
        min_m = std::max(min_m, ucp.nu());

    std::uint64_t clamped = 0;
    int last_m = 0;
    const double sum = poisson_series(
        params.n_p * load, min_m, static_cast<double>(usable.size()), control,
        [&](int m) {
            double w = 0.0;
            for (const auto& ucp : usable)
                w += pr_user_in_ucp(m, ucp, params.n_v, dist, &clamped);
            return w;
        },
        &last_m);
    if (diag) {
        diag->last_m = last_m;
        diag->clamped = clamped;
    }
    return sum;
}

double plr_regular(double load, const SystemConfig& cfg, int degree, std::span<const UcpDescriptor> catalog,
                   const SeriesControl& control)
{
    if (catalog.empty())
        throw Error(ErrorCode::InfeasiblePattern, "empty pattern catalog");
    const auto params = floor_params(cfg);
    if (params.n_v <= 0)
        return 0.0;
    const int n_v = params.n_v;

    struct Row {
        int nu;
        double log_fixed;  // log[nu C(n_v-1, mu-1) c n_v / (n_v C(n_v-1, d-1))^nu]
    };
    std::vector<Row> rows;
    const double log_edges = std::log(static_cast<double>(n_v)) + log_binomial(n_v - 1, degree - 1);
    for (const auto& ucp : catalog) {
        if (ucp.max_degree() != degree || ucp.nu() != ucp.profile[static_cast<std::size_t>(degree - 1)])
            continue;
        if (!pattern_fits(ucp, n_v))
            continue;
        const int nu = ucp.nu();
        rows.push_back({nu, std::log(static_cast<double>(nu)) + log_binomial(n_v - 1, ucp.mu - 1) +
                                std::log(static_cast<double>(ucp.iso_count)) +
                                std::log(static_cast<double>(n_v)) - nu * log_edges});
    }
    if (rows.empty())
        return 0.0;
    int min_m = 2;
    for (const auto& r : rows)
        min_m = std::max(min_m, r.nu);

    return poisson_series(params.n_p * load, min_m, static_cast<double>(rows.size()), control, [&](int m) {
        double w = 0.0;
        for (const auto& r : rows)
            if (m >= r.nu)
                w += std::min(1.0, std::exp(r.log_fixed + log_binomial(m, r.nu) - std::log(static_cast<double>(m))));
        return w;
    });
}

double plr_two_user(double load, const SystemConfig& cfg, int degree, const SeriesControl& control)
{
    const auto params = floor_params(cfg);
    if (params.n_v <= 0)
        return 0.0;
    if (degree > params.n_v)
        return 0.0;
    // C(m, 2) * (2/m) = m - 1
    const double edges = params.n_v * std::exp(log_binomial(params.n_v - 1, degree - 1));
    return poisson_series(params.n_p * load, 2, 1.0, control,
                          [&](int m) { return std::min(1.0, (m - 1) / edges); });
}

double plr_two_user_closed_form(double load, double n_p, int n_v)
{
    const double lambda = n_p * load;
    return (lambda - 1.0 + std::exp(-lambda)) / (static_cast<double>(n_v) * (n_v - 1));
}

UcpDescriptor two_user_pattern(int degree)
{
    UcpDescriptor ucp;
    ucp.name = fmt::format("S2user_d{}", degree);
    ucp.profile.assign(static_cast<std::size_t>(degree), 0);
    ucp.profile.back() = 2;
    ucp.mu = degree;
    ucp.iso_count = 1;
    return ucp;
}

}  // namespace ira::analytic
