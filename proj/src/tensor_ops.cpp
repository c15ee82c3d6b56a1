#include "cfstereo/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cfstereo/parallel.hpp"
#include "cfstereo/simd/kernels.hpp"

namespace cfstereo {
namespace {

// A rank-R grid viewed as (outer, length, inner) around one axis.
struct AxisView {
    std::size_t outer = 1;
    std::size_t length = 1;
    std::size_t inner = 1;
};

template <std::size_t Rank>
AxisView axis_view(const typename Grid<Rank>::Shape& shape, std::size_t axis) {
    if (axis >= Rank) throw ShapeError("axis " + std::to_string(axis) + " out of range");
    AxisView v;
    for (std::size_t a = 0; a < axis; ++a) v.outer *= shape[a];
    v.length = shape[axis];
    for (std::size_t a = axis + 1; a < Rank; ++a) v.inner *= shape[a];
    return v;
}

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(i);
}

void require_even(std::size_t planes, std::size_t rows, std::size_t cols) {
    if (planes % 2 || rows % 2 || cols % 2) {
        throw ShapeError("avgpool_volume needs even plane/row/column counts, got (" + std::to_string(planes) +
                         ", " + std::to_string(rows) + ", " + std::to_string(cols) +
                         "); pad the input to even dimensions first");
    }
}

// Shared pooling core: input viewed as (outer, N, H, W).
void avgpool_core(const Real* in, Real* out, std::size_t outer, std::size_t planes, std::size_t rows,
                  std::size_t cols) {
    const std::size_t on = planes / 2, oh = rows / 2, ow = cols / 2;
    parallel_for(outer * on, [&](std::size_t job) {
        const std::size_t o = job / on;
        const std::size_t n = job % on;
        for (std::size_t y = 0; y < oh; ++y) {
            for (std::size_t x = 0; x < ow; ++x) {
                double s = 0.0;
                for (std::size_t dn = 0; dn < 2; ++dn) {
                    for (std::size_t dy = 0; dy < 2; ++dy) {
                        const Real* src = in + ((o * planes + 2 * n + dn) * rows + 2 * y + dy) * cols + 2 * x;
                        s += src[0];
                        s += src[1];
                    }
                }
                out[((o * on + n) * oh + y) * ow + x] = static_cast<Real>(s * 0.125);
            }
        }
    });
}

}  // namespace

Grid3D softmax_along_planes(const Grid3D& logits) {
    const std::size_t planes = logits.dim(0), rows = logits.dim(1), cols = logits.dim(2);
    Grid3D out(logits.shape());
    const auto& k = simd::kernels();

    parallel_for(rows, [&](std::size_t y) {
        for (std::size_t n = 0; n < planes; ++n) {
            const Real* src = logits.row(n, y);
            for (std::size_t x = 0; x < cols; ++x) {
                if (!std::isfinite(src[x])) {
                    throw DataError("non-finite logit at plane " + std::to_string(n) + ", pixel (x=" +
                                    std::to_string(x) + ", y=" + std::to_string(y) + ")");
                }
            }
        }
        std::vector<Real> max_row(logits.row(0, y), logits.row(0, y) + cols);
        for (std::size_t n = 1; n < planes; ++n) k.max_acc(logits.row(n, y), max_row.data(), cols);

        std::vector<Real> total(cols, Real(0));
        for (std::size_t n = 0; n < planes; ++n) {
            const Real* src = logits.row(n, y);
            Real* dst = out.row(n, y);
            for (std::size_t x = 0; x < cols; ++x) dst[x] = std::exp(src[x] - max_row[x]);
            k.add(total.data(), dst, total.data(), cols);
        }
        for (std::size_t n = 0; n < planes; ++n) k.div_inplace(out.row(n, y), total.data(), cols);
    });
    return out;
}

template <std::size_t Rank>
Grid<Rank> upsample2x_axis(const Grid<Rank>& in, std::size_t axis) {
    const AxisView v = axis_view<Rank>(in.shape(), axis);
    auto shape = in.shape();
    shape[axis] *= 2;
    Grid<Rank> out(shape);
    const std::size_t len = v.length;
    const Real* src = in.data();
    Real* dst = out.data();

    parallel_for(v.outer, [&](std::size_t o) {
        const Real* s = src + o * len * v.inner;
        Real* d = dst + o * 2 * len * v.inner;
        for (std::size_t j = 0; j < 2 * len; ++j) {
            const std::size_t near = j / 2;
            // Even outputs lean toward the previous sample, odd toward the next.
            const std::ptrdiff_t far_signed =
                (j % 2 == 0) ? static_cast<std::ptrdiff_t>(near) - 1 : static_cast<std::ptrdiff_t>(near) + 1;
            const std::size_t far = clamp_index(far_signed, len);
            const Real* a = s + near * v.inner;
            const Real* b = s + far * v.inner;
            Real* row = d + j * v.inner;
            for (std::size_t i = 0; i < v.inner; ++i) row[i] = Real(0.75) * a[i] + Real(0.25) * b[i];
        }
    });
    return out;
}

template Grid2D upsample2x_axis<2>(const Grid2D&, std::size_t);
template Grid3D upsample2x_axis<3>(const Grid3D&, std::size_t);
template Grid4D upsample2x_axis<4>(const Grid4D&, std::size_t);

Grid2D bilinear_upsample2x(const Grid2D& map) {
    return upsample2x_axis(upsample2x_axis(map, 0), 1);
}

Grid3D trilinear_upsample2x(const Grid3D& volume) {
    return upsample2x_axis(upsample2x_axis(upsample2x_axis(volume, 0), 1), 2);
}

Grid4D trilinear_upsample2x(const Grid4D& volume) {
    return upsample2x_axis(upsample2x_axis(upsample2x_axis(volume, 1), 2), 3);
}

Grid3D avgpool_volume(const Grid3D& volume) {
    const auto& s = volume.shape();
    require_even(s[0], s[1], s[2]);
    Grid3D out({s[0] / 2, s[1] / 2, s[2] / 2});
    avgpool_core(volume.data(), out.data(), 1, s[0], s[1], s[2]);
    return out;
}

Grid4D avgpool_volume(const Grid4D& volume) {
    const auto& s = volume.shape();
    require_even(s[1], s[2], s[3]);
    Grid4D out({s[0], s[1] / 2, s[2] / 2, s[3] / 2});
    avgpool_core(volume.data(), out.data(), s[0], s[1], s[2], s[3]);
    return out;
}

template <std::size_t Rank>
Grid<Rank> box_filter_axis(const Grid<Rank>& in, std::size_t axis, std::size_t radius) {
    if (radius == 0) return in;
    const AxisView v = axis_view<Rank>(in.shape(), axis);
    Grid<Rank> out(in.shape());
    const Real inv = Real(1) / static_cast<Real>(2 * radius + 1);
    const auto r = static_cast<std::ptrdiff_t>(radius);
    const std::size_t len = v.length;
    const auto& k = simd::kernels();

    parallel_for(v.outer, [&](std::size_t o) {
        const Real* s = in.data() + o * len * v.inner;
        Real* d = out.data() + o * len * v.inner;
        if (v.inner == 1) {
            for (std::size_t i = 0; i < len; ++i) {
                const auto c = static_cast<std::ptrdiff_t>(i);
                Real acc = s[clamp_index(c - r, len)];
                for (std::ptrdiff_t t = -r + 1; t <= r; ++t) acc = acc + s[clamp_index(c + t, len)];
                d[i] = acc * inv;
            }
            return;
        }
        for (std::size_t i = 0; i < len; ++i) {
            const auto c = static_cast<std::ptrdiff_t>(i);
            Real* row = d + i * v.inner;
            std::copy_n(s + clamp_index(c - r, len) * v.inner, v.inner, row);
            for (std::ptrdiff_t t = -r + 1; t <= r; ++t) {
                k.add(row, s + clamp_index(c + t, len) * v.inner, row, v.inner);
            }
            k.scale(row, inv, row, v.inner);
        }
    });
    return out;
}

template Grid2D box_filter_axis<2>(const Grid2D&, std::size_t, std::size_t);
template Grid3D box_filter_axis<3>(const Grid3D&, std::size_t, std::size_t);
template Grid4D box_filter_axis<4>(const Grid4D&, std::size_t, std::size_t);

std::pair<Real, Real> min_max(std::span<const Real> values) {
    Real lo = std::numeric_limits<Real>::infinity();
    Real hi = -std::numeric_limits<Real>::infinity();
    for (Real v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

double sum(std::span<const Real> values) {
    double s = 0.0;
    for (Real v : values) s += v;
    return s;
}

}  // namespace cfstereo
