#pragma once

#include <cstddef>
#include <variant>

#include "cfstereo/grid.hpp"

namespace cfstereo {

/// Dense integer hypotheses 0, 1, ..., count-1 shared by every pixel.
struct UniformPlanes {
    std::size_t count = 0;
};

/// Per-pixel hypotheses, shape (N, H, W), non-decreasing along N.
struct PerPixelPlanes {
    Grid3D values;
};

/// Candidate disparities (scale-local pixels) for each pixel of one stage.
class HypothesisPlanes {
public:
    HypothesisPlanes() = default;
    HypothesisPlanes(UniformPlanes u);  // NOLINT(google-explicit-constructor)
    HypothesisPlanes(PerPixelPlanes p);  // NOLINT(google-explicit-constructor)

    std::size_t count() const noexcept;
    bool is_uniform() const noexcept { return std::holds_alternative<UniformPlanes>(planes_); }
    const PerPixelPlanes* per_pixel() const noexcept { return std::get_if<PerPixelPlanes>(&planes_); }

    Real value(std::size_t n, std::size_t y, std::size_t x) const noexcept;
    Real lowest(std::size_t y, std::size_t x) const noexcept { return value(0, y, x); }
    Real highest(std::size_t y, std::size_t x) const noexcept { return value(count() - 1, y, x); }

    /// Plane n along row y. For uniform planes the row is written into
    /// `scratch` (at least `cols` long) and returned.
    const Real* row(std::size_t n, std::size_t y, Real* scratch, std::size_t cols) const;

    /// Throws ShapeError unless the planes can serve an (rows x cols) map.
    void check_spatial(std::size_t rows, std::size_t cols) const;

private:
    std::variant<UniformPlanes, PerPixelPlanes> planes_{UniformPlanes{}};
};

/// Concatenation channels (left N_c, then matched right N_c) followed by
/// N_g group-correlation channels, over each hypothesis plane.
struct CombinationVolume {
    Grid4D data;  ///< (2 N_c + N_g, N, H, W)
    HypothesisPlanes planes;
    std::size_t scale = 0;
    std::size_t channels = 0;  ///< N_c
    std::size_t groups = 0;    ///< N_g

    std::size_t feature_count() const noexcept { return 2 * channels + groups; }
    std::size_t plane_count() const noexcept { return data.dim(1); }
    std::size_t rows() const noexcept { return data.dim(2); }
    std::size_t cols() const noexcept { return data.dim(3); }
};

/// One cost per hypothesis; lower is a better match.
struct ScoreVolume {
    Grid3D cost;  ///< (N, H, W)
    HypothesisPlanes planes;
    std::size_t scale = 0;
};

/// Per-pixel disparity in scale-local pixels.
struct DisparityMap {
    Grid2D values;
    std::size_t scale = 0;
};

/// Per-pixel variance of the disparity distribution, scale-local pixels^2.
struct UncertaintyMap {
    Grid2D values;
    std::size_t scale = 0;
};

/// Cost weights. They also set the sharpness of softmax(-cost): with unit
/// weights the fixed-kernel costs of normalized features span roughly one
/// unit and the plane distributions stay close to uniform.
struct CostWeights {
    Real group = 10;    ///< weight on the mean group correlation (similarity)
    Real absdiff = 10;  ///< weight on the mean |left - right| over concat pairs
};

/// Dense combination volume over integer disparities 0 .. dmax/2^scale - 1.
/// Matches falling left of the image (x - d < 0) are zero.
CombinationVolume build_dense_volume(const Grid3D& left, const Grid3D& right, std::size_t groups,
                                     std::size_t scale, std::size_t dmax);

/// Combination volume over per-pixel fractional hypotheses. The right
/// feature at x - d is linearly interpolated between the bracketing columns;
/// columns outside the image read as zero.
CombinationVolume build_sparse_volume(const Grid3D& left, const Grid3D& right, std::size_t groups,
                                      std::size_t scale, const PerPixelPlanes& planes);

/// c = -w_group * mean_g(group) + w_absdiff * mean_c |left_c - right_c|.
ScoreVolume reduce_to_cost(const CombinationVolume& volume, const CostWeights& weights);

/// softmax(-cost) along the plane axis.
Grid3D disparity_distribution(const ScoreVolume& sv);

/// Expected plane value under a distribution of shape (N, H, W).
Grid2D expected_plane(const HypothesisPlanes& planes, const Grid3D& probability);

/// Expected disparity under softmax(-cost).
DisparityMap soft_argmin(const ScoreVolume& sv);

}  // namespace cfstereo
