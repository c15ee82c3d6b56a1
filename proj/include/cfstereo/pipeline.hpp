#pragma once

#include <cstddef>
#include <vector>

#include "cfstereo/cascade.hpp"
#include "cfstereo/cost_volume.hpp"
#include "cfstereo/features.hpp"
#include "cfstereo/fusion.hpp"

namespace cfstereo {

/// Every tunable of the matcher.
struct PipelineConfig {
    FeatureConfig features;
    CostWeights cost;
    FusionConfig fusion;
    CascadeConfig cascade;
    std::size_t dmax = 256;  ///< full-resolution search range

    void validate() const;
};

/// Estimate produced by one stage, in that stage's pixel units.
struct StageResult {
    DisparityMap disparity;
    UncertaintyMap uncertainty;
    HypothesisPlanes planes;
    std::size_t scale = 0;
};

struct PipelineOutput {
    std::vector<StageResult> stages;  ///< scales 3, 2, 1 in that order
    Grid2D disparity;                 ///< full resolution, pixels
    Grid2D uncertainty;               ///< full resolution, pixels^2

    const StageResult& stage(std::size_t scale) const;
};

/// Image dimensions must be divisible by this.
inline constexpr std::size_t kPipelineAlignment = 32;

/// Refines a coarser estimate one scale up: next_range, sample_planes,
/// sparse volume, aggregate, reduce, soft argmin and uncertainty.
StageResult refine_stage(const StageResult& coarser, const Grid3D& left, const Grid3D& right,
                         const PipelineConfig& cfg);

/// Full coarse-to-fine matcher on grayscale images in [0, 1].
PipelineOutput run_pipeline(const Grid2D& left, const Grid2D& right, const PipelineConfig& cfg);

}  // namespace cfstereo
