#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "cfstereo/grid.hpp"

namespace cfstereo {

struct ConstantDisparity {
    Real value = 0;
};

/// Disparity `left` on columns x < split, `right` from split on
/// (split = W/2 when zero).
struct TwoPlaneDisparity {
    Real left = 8;
    Real right = 24;
    std::size_t split = 0;
};

/// d(x, y) = base + gx * x + gy * y.
struct SlantedDisparity {
    Real base = 8;
    Real gx = 0;
    Real gy = 0;
};

/// `strips` vertical bands of seeded random constant disparity.
struct PiecewiseDisparity {
    std::size_t strips = 4;
};

using DisparitySpec = std::variant<ConstantDisparity, TwoPlaneDisparity, SlantedDisparity, PiecewiseDisparity>;

/// Parses "constant:D", "two-plane:A:B[:SPLIT]", "slanted:BASE:GX:GY" or
/// "piecewise:K".
DisparitySpec parse_disparity_spec(const std::string& text);
std::string to_string(const DisparitySpec& spec);

struct SyntheticScene {
    Grid2D left;
    Grid2D right;
    Grid2D gt;     ///< left-view disparity, full-resolution pixels
    Grid2D valid;  ///< 1 where gt is usable, 0 where out of frame or occluded
    std::uint64_t seed = 0;
    DisparitySpec spec;
};

/// Noise-textured stereo pair with exact ground truth. The right image is
/// uniform noise smoothed by a 3x3 box; left(x, y) = right(x - gt(x, y), y)
/// with linear interpolation. Left pixels whose match leaves the frame, or
/// is hidden behind a nearer surface, are marked invalid.
SyntheticScene random_dot_stereogram(std::size_t rows, std::size_t cols, const DisparitySpec& spec,
                                     std::uint64_t seed);

/// Adds seeded Gaussian noise of standard deviation sigma to both images,
/// clamping to [0, 1].
void add_image_noise(SyntheticScene& scene, Real sigma, std::uint64_t seed);

/// Winner-take-all SAD block matching over integer d in [0, dmax), window
/// (2 radius + 1)^2 with clamped coordinates; ties go to the smaller d.
Grid2D block_match_oracle(const Grid2D& left, const Grid2D& right, std::size_t dmax, std::size_t radius);

}  // namespace cfstereo
