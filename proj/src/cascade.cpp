#include "cfstereo/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cfstereo/parallel.hpp"
#include "cfstereo/simd/kernels.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {

const RangeParams& CascadeConfig::params_from(std::size_t scale) const {
    if (scale == 3) return range[0];
    if (scale == 2) return range[1];
    throw ConfigError("no range parameters for stage " + std::to_string(scale));
}

void CascadeConfig::validate() const {
    for (const auto& p : range) {
        if (!(p.alpha >= -1)) throw ConfigError("cascade.alpha must be >= -1");
        if (!(p.beta >= 0)) throw ConfigError("cascade.beta must be >= 0");
    }
    if (!(min_step > 0)) throw ConfigError("cascade.min_step must be > 0");
    if (planes_stage1 < 2 || planes_stage2 < 2) throw ConfigError("cascade plane counts must be >= 2");
}

Grid2D plane_variance(const HypothesisPlanes& planes, const Grid3D& probability, const Grid2D& mean) {
    const std::size_t count = probability.dim(0), rows = probability.dim(1), cols = probability.dim(2);
    if (planes.count() != count || mean.dim(0) != rows || mean.dim(1) != cols) {
        throw ShapeError("variance inputs disagree: distribution " + shape_string(probability) + ", mean " +
                         shape_string(mean) + ", " + std::to_string(planes.count()) + " planes");
    }
    planes.check_spatial(rows, cols);
    Grid2D out({rows, cols});
    const auto& k = simd::kernels();
    parallel_for(rows, [&](std::size_t y) {
        std::vector<Real> scratch(cols);
        for (std::size_t n = 0; n < count; ++n) {
            k.sq_dev_acc(planes.row(n, y, scratch.data(), cols), mean.row(y), probability.row(n, y), out.row(y),
                         cols);
        }
    });
    return out;
}

UncertaintyMap uncertainty(const ScoreVolume& sv, const DisparityMap& d_hat) {
    return UncertaintyMap{plane_variance(sv.planes, disparity_distribution(sv), d_hat.values), sv.scale};
}

SearchRange widen_range(const DisparityMap& d_hat, const UncertaintyMap& u, const RangeParams& params) {
    if (d_hat.values.shape() != u.values.shape()) {
        throw ShapeError("disparity " + shape_string(d_hat.values) + " and uncertainty " + shape_string(u.values) +
                         " differ in shape");
    }
    SearchRange r{Grid2D(d_hat.values.shape()), Grid2D(d_hat.values.shape())};
    const std::size_t cols = d_hat.values.dim(1);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const Real var = u.values.data()[i];
        if (!(var >= 0) || !std::isfinite(var)) {
            throw DataError("uncertainty must be finite and non-negative, got " + std::to_string(var) +
                            " at pixel (x=" + std::to_string(i % cols) + ", y=" + std::to_string(i / cols) + ")");
        }
        const Real half = (params.alpha + 1) * std::sqrt(var) + params.beta;
        const Real d = d_hat.values.data()[i];
        r.lower.data()[i] = d - half;
        r.upper.data()[i] = d + half;
    }
    return r;
}

void clamp_and_floor(SearchRange& range, Real min_step, std::size_t planes, Real max_disparity) {
    const Real width = static_cast<Real>(planes - 1) * min_step;
    Real* lo = range.lower.data();
    Real* hi = range.upper.data();
    for (std::size_t i = 0; i < range.lower.size(); ++i) {
        Real a = std::clamp(lo[i], Real(0), max_disparity);
        Real b = std::clamp(hi[i], Real(0), max_disparity);
        if (b - a < width) {
            const Real center = (a + b) * Real(0.5);
            a = center - width * Real(0.5);
            b = center + width * Real(0.5);
            if (a < 0) {
                a = 0;
                b = width;
            }
            if (b > max_disparity) {
                b = max_disparity;
                a = std::max(max_disparity - width, Real(0));
            }
        }
        lo[i] = a;
        hi[i] = b;
    }
}

SearchRange next_range(const DisparityMap& d_hat, const UncertaintyMap& u, const RangeParams& params,
                       Real min_step, std::size_t next_planes, std::size_t dmax) {
    if (d_hat.scale == 0) throw ShapeError("cannot refine below scale 0");
    if (next_planes < 2) throw ConfigError("next stage needs at least 2 planes");
    SearchRange coarse = widen_range(d_hat, u, params);
    SearchRange fine{bilinear_upsample2x(coarse.lower), bilinear_upsample2x(coarse.upper)};
    const auto& k = simd::kernels();
    k.scale(fine.lower.data(), Real(2), fine.lower.data(), fine.lower.size());
    k.scale(fine.upper.data(), Real(2), fine.upper.data(), fine.upper.size());
    const Real max_disparity = static_cast<Real>(dmax >> (d_hat.scale - 1)) - 1;
    clamp_and_floor(fine, min_step, next_planes, max_disparity);
    return fine;
}

PerPixelPlanes sample_planes(const SearchRange& range, std::size_t count) {
    if (count < 2) throw ConfigError("sample_planes needs at least 2 planes, got " + std::to_string(count));
    if (range.lower.shape() != range.upper.shape()) throw ShapeError("range bounds differ in shape");
    const std::size_t rows = range.lower.dim(0), cols = range.lower.dim(1);
    PerPixelPlanes out{Grid3D({count, rows, cols})};
    const Real denom = static_cast<Real>(count - 1);
    for (std::size_t i = 0; i < range.lower.size(); ++i) {
        const Real lo = range.lower.data()[i];
        const Real hi = range.upper.data()[i];
        if (!(lo <= hi)) {
            throw DataError("search range inverted at pixel (x=" + std::to_string(i % cols) +
                            ", y=" + std::to_string(i / cols) + ")");
        }
        for (std::size_t n = 0; n < count; ++n) {
            out.values.data()[n * rows * cols + i] = lo + static_cast<Real>(n) * (hi - lo) / denom;
        }
    }
    return out;
}

}  // namespace cfstereo
