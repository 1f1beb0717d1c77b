#include "ira/simd/mi_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace ira::simd {

namespace {

bool cpu_has_avx2()
{
#if defined(IRA_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect()
{
    if (const char* env = std::getenv("IRA_SIMD"); env && std::string_view(env) == "scalar")
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& selected()
{
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

}  // namespace

const char* to_string(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

bool force_isa(Isa isa)
{
    if (!isa_available(isa))
        return false;
    selected().store(static_cast<int>(isa), std::memory_order_relaxed);
    return true;
}

void reset_isa() { selected().store(static_cast<int>(detect()), std::memory_order_relaxed); }

double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table)
{
#if defined(IRA_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2)
        return avx2::weighted_lookup_sum(weights, counts, table);
#endif
    return scalar::weighted_lookup_sum(weights, counts, table);
}

double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table)
{
#if defined(IRA_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2)
        return avx2::lookup_sum(counts, table);
#endif
    return scalar::lookup_sum(counts, table);
}

}  // namespace ira::simd
