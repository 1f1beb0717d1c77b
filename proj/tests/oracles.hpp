#pragma once

// Test-only reference implementations. They deliberately avoid the library's
// code paths: exact/high-precision arithmetic, rejection sampling and direct
// interval sweeps.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ira/floor.hpp"
#include "ira/traffic.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_dec_float_50;

inline Big binomial(long n, long k)
{
    if (k < 0 || k > n)
        return Big(0);
    Big r = 1;
    for (long i = 1; i <= k; ++i)
        r = r * Big(n - k + i) / Big(i);
    return r;
}

inline Big factorial(long n)
{
    Big r = 1;
    for (long i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline Big phi(double snr_db, double rate)
{
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    const Big snr = pow(Big(10), Big(snr_db) / 10);
    const Big ln2 = log(Big(2));
    const Big clean = log(1 + snr) / ln2;
    const Big one = log(1 + snr / (1 + snr)) / ln2;
    const Big v = (Big(rate) - one) / (clean - one);
    return v < 0 ? Big(0) : (v > 1 ? Big(1) : v);
}

/// Straight evaluation of the union-bound sum in 50-digit arithmetic,
/// truncated at m_max. `probs` maps degree -> Lambda_d.
inline Big plr_union_bound(double load, long n_p, long n_v, const std::map<int, double>& probs,
                           const std::vector<ira::analytic::UcpDescriptor>& catalog, long m_max)
{
    using boost::multiprecision::exp;
    using boost::multiprecision::pow;
    const Big lambda = Big(load) * n_p;
    Big pmf = exp(-lambda);  // m = 0
    Big total = 0;
    for (long m = 1; m <= m_max; ++m) {
        pmf = pmf * lambda / m;
        if (m < 2)
            continue;
        for (const auto& s : catalog) {
            long nu = 0;
            Big prod_a = 1;
            Big d = Big(1) / n_v;
            bool feasible = true;
            for (std::size_t i = 0; i < s.profile.size(); ++i) {
                const long users = s.profile[i];
                if (users == 0)
                    continue;
                const int degree = static_cast<int>(i + 1);
                const auto it = probs.find(degree);
                if (it == probs.end() || it->second <= 0.0) {
                    feasible = false;
                    break;
                }
                prod_a *= pow(Big(it->second), users) / factorial(users);
                d *= pow(Big(n_v) * binomial(n_v - 1, degree - 1), users);
                nu += users;
            }
            if (!feasible || m < nu)
                continue;
            const Big a = binomial(m, nu) * factorial(nu) * prod_a;
            const Big b = binomial(n_v - 1, s.mu - 1);
            Big pr = a * b * Big(static_cast<double>(s.iso_count)) / d * Big(nu) / Big(m);
            if (pr > 1)
                pr = 1;
            total += pr * pmf;
        }
    }
    return total;
}

/// Replica placement by whole-set rejection: d-1 i.i.d. uniform starts in
/// [t0, t0 + T_f - 1], redrawn until all pairwise gaps are >= 1.
inline std::vector<double> place_by_rejection(double t0, int degree, double vf_span, ira::Rng& rng)
{
    for (;;) {
        std::vector<double> s{t0};
        for (int i = 1; i < degree; ++i)
            s.push_back(rng.uniform(t0, t0 + vf_span - 1.0));
        std::sort(s.begin(), s.end());
        bool ok = true;
        for (std::size_t i = 1; i < s.size(); ++i)
            ok = ok && s[i] - s[i - 1] >= 1.0;
        if (ok)
            return s;
    }
}

/// Average MI by sampling the interferer count at many midpoints of a fine
/// grid, counting overlaps directly.
inline double avg_mi_by_sampling(double begin, const std::vector<double>& other_starts, double snr, int samples)
{
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = begin + (i + 0.5) / samples;
        int k = 0;
        for (const double o : other_starts)
            k += (o <= t && t < o + 1.0) ? 1 : 0;
        acc += std::log2(1.0 + snr / (1.0 + k * snr));
    }
    return acc / samples;
}

}  // namespace oracle
