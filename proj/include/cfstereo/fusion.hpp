#pragma once

#include <array>
#include <cstddef>

#include "cfstereo/cost_volume.hpp"

namespace cfstereo {

/// Fixed-kernel aggregation settings standing in for learned 3D convolutions.
struct FusionConfig {
    bool enabled = true;
    std::array<std::size_t, 3> smooth_radius{1, 1, 1};  ///< (plane, column, row)
    std::size_t passes = 1;
    std::size_t hourglass_passes = 1;

    void validate() const;
};

/// Box smoothing along plane, column and row axes (clamped edges), repeated
/// cfg.passes times. With `skip` the result is mixed with the input:
/// out = (input + smoothed) / 2.
Grid3D aggregate(const Grid3D& volume, const FusionConfig& cfg, bool skip = true);
Grid4D aggregate(const Grid4D& volume, const FusionConfig& cfg, bool skip = true);

/// Encoder-decoder fusion of the dense scale-3/4/5 volumes into a scale-3
/// score volume: regularize, pool, merge with the next scale, decode with
/// skips, one hourglass refinement per cfg.hourglass_passes, then reduce.
ScoreVolume fuse_volumes(const CombinationVolume& v3, const CombinationVolume& v4, const CombinationVolume& v5,
                         const FusionConfig& cfg, const CostWeights& weights);

/// Single-scale path used when fusion is disabled: reduce(aggregate(v3)).
ScoreVolume unfused_cost(const CombinationVolume& v3, const FusionConfig& cfg, const CostWeights& weights);

struct InitialEstimate {
    DisparityMap disparity;
    UncertaintyMap uncertainty;
};

/// Soft argmin and variance of the fused score volume (scale-3 units).
InitialEstimate initial_disparity(const ScoreVolume& fused);

}  // namespace cfstereo
