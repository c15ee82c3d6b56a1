#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cfstereo/grid.hpp"

namespace cfstereo::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Row kernels over contiguous spans of length n. Every variant performs the
/// same IEEE operations per element in the same order, so all ISAs produce
/// bitwise-identical results (the build disables FMA contraction).
struct KernelTable {
    Isa isa;
    /// out = a + b
    void (*add)(const Real* a, const Real* b, Real* out, std::size_t n);
    /// acc += a * b
    void (*mul_acc)(const Real* a, const Real* b, Real* acc, std::size_t n);
    /// acc += s * x
    void (*axpy)(Real s, const Real* x, Real* acc, std::size_t n);
    /// acc += |a - b|
    void (*abs_diff_acc)(const Real* a, const Real* b, Real* acc, std::size_t n);
    /// out = a * s
    void (*scale)(const Real* a, Real s, Real* out, std::size_t n);
    /// out = (a + b) * 0.5
    void (*mix_half)(const Real* a, const Real* b, Real* out, std::size_t n);
    /// m = (m > a) ? m : a
    void (*max_acc)(const Real* a, Real* m, std::size_t n);
    /// a = a / d
    void (*div_inplace)(Real* a, const Real* d, std::size_t n);
    /// t = v - mean; acc += (t * t) * p
    void (*sq_dev_acc)(const Real* v, const Real* mean, const Real* p, Real* acc, std::size_t n);
};

/// Kernels for a specific ISA. Throws if the ISA was not compiled in or the
/// CPU does not support it.
const KernelTable& kernels_for(Isa isa);

/// Kernels chosen at first use: the widest supported ISA, unless the
/// CFSTEREO_SIMD environment variable names one ("scalar", "avx2", "neon").
const KernelTable& kernels();

/// Switches the active table (tests use this to compare paths).
void set_active_isa(Isa isa);

/// ISAs that are both compiled in and supported by this CPU. Always contains
/// Isa::scalar.
std::vector<Isa> available_isas();

// Per-ISA tables, defined in the kernels_*.cpp translation units.
const KernelTable& scalar_table();
#if defined(CFSTEREO_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(CFSTEREO_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace cfstereo::simd
