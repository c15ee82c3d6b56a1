#include "cfstereo/fusion.hpp"

#include <string>

#include "cfstereo/cascade.hpp"
#include "cfstereo/simd/kernels.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {
namespace {

template <std::size_t Rank>
Grid<Rank> aggregate_impl(const Grid<Rank>& volume, const FusionConfig& cfg, bool skip) {
    constexpr std::size_t plane_axis = Rank - 3;
    constexpr std::size_t row_axis = Rank - 2;
    constexpr std::size_t col_axis = Rank - 1;
    Grid<Rank> smoothed = volume;
    for (std::size_t p = 0; p < cfg.passes; ++p) {
        smoothed = box_filter_axis(smoothed, plane_axis, cfg.smooth_radius[0]);
        smoothed = box_filter_axis(smoothed, col_axis, cfg.smooth_radius[1]);
        smoothed = box_filter_axis(smoothed, row_axis, cfg.smooth_radius[2]);
    }
    if (!skip) return smoothed;
    simd::kernels().mix_half(volume.data(), smoothed.data(), smoothed.data(), smoothed.size());
    return smoothed;
}

Grid4D mix(const Grid4D& a, const Grid4D& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("cannot merge volumes " + shape_string(a) + " and " + shape_string(b));
    }
    Grid4D out(a.shape());
    simd::kernels().mix_half(a.data(), b.data(), out.data(), out.size());
    return out;
}

// Volume with the same channel layout and hypotheses as `like`.
CombinationVolume with_data(const CombinationVolume& like, Grid4D data) {
    return CombinationVolume{std::move(data), like.planes, like.scale, like.channels, like.groups};
}

void check_pyramid(const CombinationVolume& fine, const CombinationVolume& coarse) {
    const auto& f = fine.data.shape();
    const auto& c = coarse.data.shape();
    if (f[0] != c[0] || fine.channels != coarse.channels || fine.groups != coarse.groups) {
        throw ShapeError("fused volumes must share the feature layout");
    }
    if (f[1] != 2 * c[1] || f[2] != 2 * c[2] || f[3] != 2 * c[3]) {
        throw ShapeError("volume " + shape_string(coarse.data) + " is not a 2x reduction of " +
                         shape_string(fine.data) + " over planes, rows and columns");
    }
}

}  // namespace

void FusionConfig::validate() const {
    if (passes < 1) throw ConfigError("fusion.passes must be >= 1");
}

Grid3D aggregate(const Grid3D& volume, const FusionConfig& cfg, bool skip) {
    return aggregate_impl(volume, cfg, skip);
}

Grid4D aggregate(const Grid4D& volume, const FusionConfig& cfg, bool skip) {
    return aggregate_impl(volume, cfg, skip);
}

ScoreVolume fuse_volumes(const CombinationVolume& v3, const CombinationVolume& v4, const CombinationVolume& v5,
                         const FusionConfig& cfg, const CostWeights& weights) {
    cfg.validate();
    check_pyramid(v3, v4);
    check_pyramid(v4, v5);

    // Encoder.
    const Grid4D e3 = aggregate(v3.data, cfg);
    const Grid4D e4 = aggregate(mix(avgpool_volume(e3), aggregate(v4.data, cfg)), cfg);
    const Grid4D e5 = aggregate(mix(avgpool_volume(e4), aggregate(v5.data, cfg)), cfg);

    // Decoder with skip volumes.
    const Grid4D d4 = mix(trilinear_upsample2x(e5), e4);
    Grid4D d3 = mix(trilinear_upsample2x(d4), e3);

    for (std::size_t h = 0; h < cfg.hourglass_passes; ++h) {
        const Grid4D top = aggregate(d3, cfg);
        const Grid4D bottom = aggregate(avgpool_volume(top), cfg);
        d3 = mix(trilinear_upsample2x(bottom), top);
    }
    return reduce_to_cost(with_data(v3, std::move(d3)), weights);
}

ScoreVolume unfused_cost(const CombinationVolume& v3, const FusionConfig& cfg, const CostWeights& weights) {
    cfg.validate();
    return reduce_to_cost(with_data(v3, aggregate(v3.data, cfg)), weights);
}

InitialEstimate initial_disparity(const ScoreVolume& fused) {
    const Grid3D prob = disparity_distribution(fused);
    DisparityMap d{expected_plane(fused.planes, prob), fused.scale};
    UncertaintyMap u{plane_variance(fused.planes, prob, d.values), fused.scale};
    return {std::move(d), std::move(u)};
}

}  // namespace cfstereo
