#pragma once

#include <cstddef>
#include <vector>

#include "cfstereo/grid.hpp"

namespace cfstereo {

struct FeatureConfig {
    std::size_t channels = 16;      ///< N_c per level
    std::size_t groups = 4;         ///< N_g per level
    std::size_t census_radius = 1;  ///< offset of the 8 census neighbors
    std::size_t stat_radius = 2;    ///< box radius of the local mean/std channels

    void validate() const;
};

/// Number of generated (non-padding) channels before truncation.
inline constexpr std::size_t kGeneratedChannels = 13;

/// Deterministic multi-scale features. Level i (1-based) has shape
/// (channels, H / 2^i, W / 2^i).
class FeaturePyramid {
public:
    FeaturePyramid(std::vector<Grid3D> levels, std::size_t channels, std::size_t groups);

    /// Features at scale i, 1 <= i <= level_count().
    const Grid3D& level(std::size_t scale) const;
    std::size_t level_count() const noexcept { return levels_.size(); }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t groups() const noexcept { return groups_; }

private:
    std::vector<Grid3D> levels_;
    std::size_t channels_;
    std::size_t groups_;
};

/// Binomial [1 4 6 4 1]/16 blur (clamped edges) followed by 2x decimation.
Grid2D blur_decimate(const Grid2D& image);

/// Unnormalized channel stack for one image level, in the fixed order:
/// intensity, d/dx, d/dy (central differences), local mean, local standard
/// deviation, then eight census signs sign(center - neighbor) in {-1, 0, 1}.
/// Truncated, or padded with zero channels, to cfg.channels.
Grid3D raw_channels(const Grid2D& image, const FeatureConfig& cfg);

/// Rescales every channel to zero mean and unit variance over the image;
/// (near-)constant channels become zero.
void normalize_channels(Grid3D& features);

/// Builds levels 1..levels from a grayscale image whose dimensions are
/// divisible by 2^levels.
FeaturePyramid build_pyramid(const Grid2D& image, std::size_t levels, const FeatureConfig& cfg);

}  // namespace cfstereo
