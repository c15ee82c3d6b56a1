#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "cfstereo/grid.hpp"

namespace cfstereo {

/// Per-pixel softmax over the leading (plane) axis of an (N, H, W) volume,
/// with max subtraction. Throws DataError naming the first non-finite entry.
Grid3D softmax_along_planes(const Grid3D& logits);

/// Doubles one axis by linear interpolation with half-pixel sample centers
/// and edge clamping: output sample j reads source coordinate j/2 - 1/4.
template <std::size_t Rank>
Grid<Rank> upsample2x_axis(const Grid<Rank>& in, std::size_t axis);

/// 2x bilinear upsampling of a map (half-pixel centers, clamped edges).
Grid2D bilinear_upsample2x(const Grid2D& map);

/// 2x trilinear upsampling of the (plane, row, column) axes of a volume.
Grid3D trilinear_upsample2x(const Grid3D& volume);
Grid4D trilinear_upsample2x(const Grid4D& volume);

/// Mean over 2x2x2 blocks of the (plane, row, column) axes. Throws
/// ShapeError when any of those axes is odd.
Grid3D avgpool_volume(const Grid3D& volume);
Grid4D avgpool_volume(const Grid4D& volume);

/// Box filter of the given radius along one axis, edges clamped:
/// out[i] = sum_{k=-r..r} in[clamp(i+k)] / (2r+1). Radius 0 copies.
template <std::size_t Rank>
Grid<Rank> box_filter_axis(const Grid<Rank>& in, std::size_t axis, std::size_t radius);

/// Minimum and maximum entries.
std::pair<Real, Real> min_max(std::span<const Real> values);

/// Sum with 64-bit accumulation in ascending index order.
double sum(std::span<const Real> values);

}  // namespace cfstereo
