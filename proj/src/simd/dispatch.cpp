#include <atomic>
#include <cstdlib>
#include <string>

#include "cfstereo/errors.hpp"
#include "cfstereo/simd/kernels.hpp"

namespace cfstereo::simd {
namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(CFSTEREO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(CFSTEREO_HAVE_NEON)
            return true;  // mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("CFSTEREO_SIMD")) {
        const std::string want = env;
        for (Isa isa : available_isas()) {
            if (isa_name(isa) == want) return &kernels_for(isa);
        }
    }
    return &kernels_for(available_isas().back());
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::scalar};
    if (cpu_supports(Isa::avx2)) out.push_back(Isa::avx2);
    if (cpu_supports(Isa::neon)) out.push_back(Isa::neon);
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    if (!cpu_supports(isa)) {
        throw Error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available on this build/CPU");
    }
    switch (isa) {
#if defined(CFSTEREO_HAVE_AVX2)
        case Isa::avx2: return avx2_table();
#endif
#if defined(CFSTEREO_HAVE_NEON)
        case Isa::neon: return neon_table();
#endif
        default: return scalar_table();
    }
}

const KernelTable& kernels() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = initial_table();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_active_isa(Isa isa) { g_active.store(&kernels_for(isa), std::memory_order_release); }

}  // namespace cfstereo::simd
