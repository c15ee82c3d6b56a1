#include "cfstereo/cost_volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cfstereo/parallel.hpp"
#include "cfstereo/simd/kernels.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {

HypothesisPlanes::HypothesisPlanes(UniformPlanes u) : planes_(u) {}
HypothesisPlanes::HypothesisPlanes(PerPixelPlanes p) : planes_(std::move(p)) {}

std::size_t HypothesisPlanes::count() const noexcept {
    if (const auto* u = std::get_if<UniformPlanes>(&planes_)) return u->count;
    return std::get<PerPixelPlanes>(planes_).values.dim(0);
}

Real HypothesisPlanes::value(std::size_t n, std::size_t y, std::size_t x) const noexcept {
    if (is_uniform()) return static_cast<Real>(n);
    return std::get<PerPixelPlanes>(planes_).values(n, y, x);
}

const Real* HypothesisPlanes::row(std::size_t n, std::size_t y, Real* scratch, std::size_t cols) const {
    if (is_uniform()) {
        std::fill_n(scratch, cols, static_cast<Real>(n));
        return scratch;
    }
    return std::get<PerPixelPlanes>(planes_).values.row(n, y);
}

void HypothesisPlanes::check_spatial(std::size_t rows, std::size_t cols) const {
    if (const auto* p = per_pixel()) {
        if (p->values.dim(1) != rows || p->values.dim(2) != cols) {
            throw ShapeError("hypothesis planes " + shape_string(p->values) + " do not cover a " +
                             std::to_string(rows) + "x" + std::to_string(cols) + " map");
        }
    }
}

namespace {

void check_features(const Grid3D& left, const Grid3D& right, std::size_t groups) {
    if (left.shape() != right.shape()) {
        throw ShapeError("left features " + shape_string(left) + " and right features " + shape_string(right) +
                         " differ in shape");
    }
    if (groups == 0 || left.dim(0) % groups != 0) {
        throw ShapeError("feature channels (" + std::to_string(left.dim(0)) + ") not divisible by groups (" +
                         std::to_string(groups) + ")");
    }
}

CombinationVolume allocate(const Grid3D& left, std::size_t groups, std::size_t scale, std::size_t planes,
                           HypothesisPlanes hyp) {
    const std::size_t nc = left.dim(0);
    CombinationVolume v{Grid4D({2 * nc + groups, planes, left.dim(1), left.dim(2)}), std::move(hyp), scale, nc,
                        groups};
    return v;
}

// Fills concat and group channels of plane n, row y. matched[c] points at the
// right feature matched to left column `first`; columns [first, cols) are
// computed and earlier columns keep their zeros.
void fill_plane_row(CombinationVolume& vol, const Grid3D& left, const std::vector<const Real*>& matched,
                    std::size_t n, std::size_t y, std::size_t first) {
    const auto& k = simd::kernels();
    const std::size_t nc = vol.channels, ng = vol.groups, cols = vol.cols();
    const std::size_t per_group = nc / ng;
    const Real inv_group = Real(1) / static_cast<Real>(per_group);
    if (first >= cols) {
        for (std::size_t c = 0; c < nc; ++c) std::copy_n(left.row(c, y), cols, vol.data.row(c, n, y));
        return;
    }
    const std::size_t len = cols - first;
    for (std::size_t c = 0; c < nc; ++c) {
        std::copy_n(left.row(c, y), cols, vol.data.row(c, n, y));
        std::copy_n(matched[c], len, vol.data.row(nc + c, n, y) + first);
    }
    for (std::size_t g = 0; g < ng; ++g) {
        Real* acc = vol.data.row(2 * nc + g, n, y) + first;
        for (std::size_t c = g * per_group; c < (g + 1) * per_group; ++c) {
            k.mul_acc(left.row(c, y) + first, matched[c], acc, len);
        }
        k.scale(acc, inv_group, acc, len);
    }
}

}  // namespace

CombinationVolume build_dense_volume(const Grid3D& left, const Grid3D& right, std::size_t groups,
                                     std::size_t scale, std::size_t dmax) {
    check_features(left, right, groups);
    const std::size_t factor = std::size_t{1} << scale;
    if (dmax % factor != 0 || dmax / factor < 2) {
        throw ShapeError("D_max " + std::to_string(dmax) + " must be a multiple of 2^" + std::to_string(scale) +
                         " with at least 2 planes at that scale");
    }
    const std::size_t planes = dmax / factor;
    CombinationVolume vol = allocate(left, groups, scale, planes, UniformPlanes{planes});
    const std::size_t rows = vol.rows(), cols = vol.cols(), nc = vol.channels;

    parallel_for(planes * rows, [&](std::size_t job) {
        const std::size_t n = job / rows, y = job % rows;
        // Left column n pairs with right column 0.
        std::vector<const Real*> matched(nc);
        for (std::size_t c = 0; c < nc; ++c) matched[c] = right.row(c, y);
        fill_plane_row(vol, left, matched, n, y, std::min(n, cols));
    });
    return vol;
}

CombinationVolume build_sparse_volume(const Grid3D& left, const Grid3D& right, std::size_t groups,
                                      std::size_t scale, const PerPixelPlanes& planes) {
    check_features(left, right, groups);
    const std::size_t rows = left.dim(1), cols = left.dim(2), nc = left.dim(0);
    if (planes.values.dim(1) != rows || planes.values.dim(2) != cols) {
        throw ShapeError("planes " + shape_string(planes.values) + " do not match features " + shape_string(left));
    }
    for (Real v : planes.values.values()) {
        if (std::isnan(v)) throw DataError("hypothesis plane value is NaN");
    }
    const std::size_t count = planes.values.dim(0);
    CombinationVolume vol = allocate(left, groups, scale, count, planes);

    parallel_for(count * rows, [&](std::size_t job) {
        const std::size_t n = job / rows, y = job % rows;
        const Real* disp = planes.values.row(n, y);
        std::vector<Real> warped(nc * cols, Real(0));
        for (std::size_t x = 0; x < cols; ++x) {
            const Real pos = static_cast<Real>(x) - disp[x];
            const Real base = std::floor(pos);
            const Real t = pos - base;
            const auto x0 = static_cast<std::ptrdiff_t>(base);
            const bool in0 = x0 >= 0 && x0 < static_cast<std::ptrdiff_t>(cols);
            const bool in1 = x0 + 1 >= 0 && x0 + 1 < static_cast<std::ptrdiff_t>(cols);
            for (std::size_t c = 0; c < nc; ++c) {
                const Real* src = right.row(c, y);
                const Real a = in0 ? src[x0] : Real(0);
                if (t == Real(0)) {
                    warped[c * cols + x] = a;
                    continue;
                }
                const Real b = in1 ? src[x0 + 1] : Real(0);
                warped[c * cols + x] = (Real(1) - t) * a + t * b;
            }
        }
        std::vector<const Real*> matched(nc);
        for (std::size_t c = 0; c < nc; ++c) matched[c] = warped.data() + c * cols;
        fill_plane_row(vol, left, matched, n, y, 0);
    });
    return vol;
}

ScoreVolume reduce_to_cost(const CombinationVolume& volume, const CostWeights& weights) {
    const std::size_t planes = volume.plane_count(), rows = volume.rows(), cols = volume.cols();
    const std::size_t nc = volume.channels, ng = volume.groups;
    ScoreVolume sv{Grid3D({planes, rows, cols}), volume.planes, volume.scale};
    const Real group_coeff = -weights.group / static_cast<Real>(ng);
    const Real absdiff_coeff = weights.absdiff / static_cast<Real>(nc);
    const auto& k = simd::kernels();

    parallel_for(planes * rows, [&](std::size_t job) {
        const std::size_t n = job / rows, y = job % rows;
        std::vector<Real> group_sum(cols, Real(0));
        std::vector<Real> absdiff(cols, Real(0));
        for (std::size_t g = 0; g < ng; ++g) {
            k.add(group_sum.data(), volume.data.row(2 * nc + g, n, y), group_sum.data(), cols);
        }
        for (std::size_t c = 0; c < nc; ++c) {
            k.abs_diff_acc(volume.data.row(c, n, y), volume.data.row(nc + c, n, y), absdiff.data(), cols);
        }
        Real* out = sv.cost.row(n, y);
        k.scale(absdiff.data(), absdiff_coeff, out, cols);
        k.axpy(group_coeff, group_sum.data(), out, cols);
    });
    return sv;
}

Grid3D disparity_distribution(const ScoreVolume& sv) {
    if (sv.cost.dim(0) < 2) throw ShapeError("soft argmin needs at least 2 hypothesis planes");
    if (sv.planes.count() != sv.cost.dim(0)) {
        throw ShapeError("score volume has " + std::to_string(sv.cost.dim(0)) + " planes but its hypotheses list " +
                         std::to_string(sv.planes.count()));
    }
    sv.planes.check_spatial(sv.cost.dim(1), sv.cost.dim(2));
    Grid3D negated(sv.cost.shape());
    simd::kernels().scale(sv.cost.data(), Real(-1), negated.data(), sv.cost.size());
    try {
        return softmax_along_planes(negated);
    } catch (const DataError& e) {
        throw DataError(std::string("cost volume: ") + e.what());
    }
}

Grid2D expected_plane(const HypothesisPlanes& planes, const Grid3D& probability) {
    const std::size_t count = probability.dim(0), rows = probability.dim(1), cols = probability.dim(2);
    if (planes.count() != count) throw ShapeError("plane count does not match distribution");
    planes.check_spatial(rows, cols);
    Grid2D out({rows, cols});
    const auto& k = simd::kernels();
    parallel_for(rows, [&](std::size_t y) {
        std::vector<Real> scratch(cols);
        Real* dst = out.row(y);
        for (std::size_t n = 0; n < count; ++n) {
            k.mul_acc(planes.row(n, y, scratch.data(), cols), probability.row(n, y), dst, cols);
        }
    });
    return out;
}

DisparityMap soft_argmin(const ScoreVolume& sv) {
    return DisparityMap{expected_plane(sv.planes, disparity_distribution(sv)), sv.scale};
}

}  // namespace cfstereo
