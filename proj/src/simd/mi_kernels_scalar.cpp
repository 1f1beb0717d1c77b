#include "ira/simd/mi_kernels.hpp"

namespace ira::simd::scalar {

double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc += weights[i] * table[counts[i]];
    return acc;
}

double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table)
{
    double acc = 0.0;
    for (const auto c : counts)
        acc += table[c];
    return acc;
}

}  // namespace ira::simd::scalar
