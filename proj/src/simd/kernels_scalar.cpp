#include <cmath>

#include "cfstereo/simd/kernels.hpp"

namespace cfstereo::simd {
namespace {

void add(const Real* a, const Real* b, Real* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void mul_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + a[i] * b[i];
}

void axpy(Real s, const Real* x, Real* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void abs_diff_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + std::fabs(a[i] - b[i]);
}

void scale(const Real* a, Real s, Real* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void mix_half(const Real* a, const Real* b, Real* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] + b[i]) * Real(0.5);
}

void max_acc(const Real* a, Real* m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) m[i] = (m[i] > a[i]) ? m[i] : a[i];
}

void div_inplace(Real* a, const Real* d, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] = a[i] / d[i];
}

void sq_dev_acc(const Real* v, const Real* mean, const Real* p, Real* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const Real t = v[i] - mean[i];
        acc[i] = acc[i] + (t * t) * p[i];
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, add,      mul_acc,     axpy,      abs_diff_acc,
                                   scale,       mix_half, max_acc,     div_inplace, sq_dev_acc};
    return table;
}

}  // namespace cfstereo::simd
