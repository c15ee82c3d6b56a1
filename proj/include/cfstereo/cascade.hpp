#pragma once

#include <array>
#include <cstddef>

#include "cfstereo/cost_volume.hpp"

namespace cfstereo {

/// Range widening factors for one stage transition. Both zero by default.
struct RangeParams {
    Real alpha = 0;  ///< scales the standard deviation term; >= -1
    Real beta = 0;   ///< constant margin in scale-local pixels; >= 0
};

struct CascadeConfig {
    /// Widening applied to the ranges derived from stage 3 and stage 2.
    std::array<RangeParams, 2> range{};
    Real min_step = 0.25;      ///< smallest plane spacing, scale-local pixels
    std::size_t planes_stage2 = 16;  ///< N^2
    std::size_t planes_stage1 = 12;  ///< N^1

    const RangeParams& params_from(std::size_t scale) const;
    void validate() const;
};

/// Per-pixel search window [lower, upper] in scale-local pixels.
struct SearchRange {
    Grid2D lower;
    Grid2D upper;
};

/// Variance of the plane values under a (N, H, W) distribution around `mean`.
Grid2D plane_variance(const HypothesisPlanes& planes, const Grid3D& probability, const Grid2D& mean);

/// Variance of the disparity distribution softmax(-cost) around `d_hat`.
UncertaintyMap uncertainty(const ScoreVolume& sv, const DisparityMap& d_hat);

/// d_hat -/+ ((alpha + 1) sqrt(U) + beta), at the current scale. Throws
/// DataError on negative or non-finite U.
SearchRange widen_range(const DisparityMap& d_hat, const UncertaintyMap& u, const RangeParams& params);

/// Search window for the next (2x finer) stage: widen_range, bilinear 2x
/// upsampling, values doubled into the finer scale's units, clamped to
/// [0, dmax/2^(scale-1) - 1], then widened symmetrically to at least
/// (next_planes - 1) * min_step, sliding inward at the borders.
SearchRange next_range(const DisparityMap& d_hat, const UncertaintyMap& u, const RangeParams& params,
                       Real min_step, std::size_t next_planes, std::size_t dmax);

/// Applies the clamp and width floor of next_range to an already-converted
/// range (exposed for testing).
void clamp_and_floor(SearchRange& range, Real min_step, std::size_t planes, Real max_disparity);

/// `count` planes evenly spaced from lower to upper, both included.
PerPixelPlanes sample_planes(const SearchRange& range, std::size_t count);

}  // namespace cfstereo
