#pragma once

// Table-lookup reductions behind the mutual-information computations.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2+FMA variant.
// The dispatcher picks the widest variant the CPU supports; setting the
// environment variable IRA_SIMD=scalar (or calling force_isa) pins the
// reference path. Variants agree to rounding, not bit-for-bit.

#include <cstdint>
#include <span>

namespace ira::simd {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Pins the dispatcher to `isa`; returns false if the CPU cannot run it.
bool force_isa(Isa isa);
void reset_isa();

/// sum_i weights[i] * table[counts[i]]. counts.size() == weights.size(), every
/// count < table.size().
double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table);

/// sum_i table[counts[i]]
double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table);

namespace scalar {
double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table);
double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table);
}  // namespace scalar

namespace avx2 {
double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table);
double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table);
}  // namespace avx2

}  // namespace ira::simd
