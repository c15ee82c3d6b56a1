// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "cfstereo/simd/kernels.hpp"

namespace cfstereo::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

void add(const Real* a, const Real* b, Real* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void mul_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
    }
    for (; i < n; ++i) acc[i] = acc[i] + a[i] * b[i];
}

void axpy(Real s, const Real* x, Real* acc, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
    }
    for (; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void abs_diff_acc(const Real* a, const Real* b, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), d));
    }
    for (; i < n; ++i) acc[i] = acc[i] + std::fabs(a[i] - b[i]);
}

void scale(const Real* a, Real s, Real* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    }
    for (; i < n; ++i) out[i] = a[i] * s;
}

void mix_half(const Real* a, const Real* b, Real* out, std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(sum, half));
    }
    for (; i < n; ++i) out[i] = (a[i] + b[i]) * Real(0.5);
}

void max_acc(const Real* a, Real* m, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        // max_pd(x, y) returns x only when x > y, matching the scalar form.
        _mm256_storeu_pd(m + i, _mm256_max_pd(_mm256_loadu_pd(m + i), _mm256_loadu_pd(a + i)));
    }
    for (; i < n; ++i) m[i] = (m[i] > a[i]) ? m[i] : a[i];
}

void div_inplace(Real* a, const Real* d, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(a + i, _mm256_div_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(d + i)));
    }
    for (; i < n; ++i) a[i] = a[i] / d[i];
}

void sq_dev_acc(const Real* v, const Real* mean, const Real* p, Real* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(mean + i));
        const __m256d w = _mm256_mul_pd(_mm256_mul_pd(t, t), _mm256_loadu_pd(p + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), w));
    }
    for (; i < n; ++i) {
        const Real t = v[i] - mean[i];
        acc[i] = acc[i] + (t * t) * p[i];
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{Isa::avx2, add,      mul_acc,     axpy,      abs_diff_acc,
                                   scale,     mix_half, max_acc,     div_inplace, sq_dev_acc};
    return table;
}

}  // namespace cfstereo::simd
