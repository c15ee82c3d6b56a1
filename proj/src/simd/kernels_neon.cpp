#include <arm_neon.h>

#include <cmath>

#include "cfstereo/simd/kernels.hpp"

namespace cfstereo::simd {
namespace {

constexpr std::size_t kLanes = 2;

void add(const Real* a, const Real* b, Real* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void mul_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        // vmulq + vaddq rather than vfmaq: the scalar path rounds twice.
        const float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), prod));
    }
    for (; i < n; ++i) acc[i] = acc[i] + a[i] * b[i];
}

void axpy(Real s, const Real* x, Real* acc, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t prod = vmulq_f64(vs, vld1q_f64(x + i));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), prod));
    }
    for (; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void abs_diff_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), d));
    }
    for (; i < n; ++i) acc[i] = acc[i] + std::fabs(a[i] - b[i]);
}

void scale(const Real* a, Real s, Real* out, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vs));
    for (; i < n; ++i) out[i] = a[i] * s;
}

void mix_half(const Real* a, const Real* b, Real* out, std::size_t n) {
    const float64x2_t half = vdupq_n_f64(0.5);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        vst1q_f64(out + i, vmulq_f64(vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), half));
    }
    for (; i < n; ++i) out[i] = (a[i] + b[i]) * Real(0.5);
}

void max_acc(const Real* a, Real* m, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t vm = vld1q_f64(m + i);
        const float64x2_t va = vld1q_f64(a + i);
        vst1q_f64(m + i, vbslq_f64(vcgtq_f64(vm, va), vm, va));
    }
    for (; i < n; ++i) m[i] = (m[i] > a[i]) ? m[i] : a[i];
}

void div_inplace(Real* a, const Real* d, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) vst1q_f64(a + i, vdivq_f64(vld1q_f64(a + i), vld1q_f64(d + i)));
    for (; i < n; ++i) a[i] = a[i] / d[i];
}

void sq_dev_acc(const Real* v, const Real* mean, const Real* p, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t t = vsubq_f64(vld1q_f64(v + i), vld1q_f64(mean + i));
        const float64x2_t w = vmulq_f64(vmulq_f64(t, t), vld1q_f64(p + i));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), w));
    }
    for (; i < n; ++i) {
        const Real t = v[i] - mean[i];
        acc[i] = acc[i] + (t * t) * p[i];
    }
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{Isa::neon, add,      mul_acc,     axpy,      abs_diff_acc,
                                   scale,     mix_half, max_acc,     div_inplace, sq_dev_acc};
    return table;
}

}  // namespace cfstereo::simd
