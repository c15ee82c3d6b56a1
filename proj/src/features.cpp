#include "cfstereo/features.hpp"

#include <array>
#include <cmath>
#include <string>

#include "cfstereo/parallel.hpp"
#include "cfstereo/simd/kernels.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {
namespace {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(i);
}

// Channels whose spread falls below this are treated as constant.
constexpr double kFlatChannelStd = 1e-8;

constexpr std::array<std::array<int, 2>, 8> kCensusOffsets{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

}  // namespace

void FeatureConfig::validate() const {
    if (channels == 0 || groups == 0) throw ConfigError("feature channels and groups must be positive");
    if (channels % groups != 0) {
        throw ConfigError("features.channels (" + std::to_string(channels) +
                          ") must be divisible by features.groups (" + std::to_string(groups) + ")");
    }
    if (census_radius == 0) throw ConfigError("features.census_radius must be >= 1");
}

FeaturePyramid::FeaturePyramid(std::vector<Grid3D> levels, std::size_t channels, std::size_t groups)
    : levels_(std::move(levels)), channels_(channels), groups_(groups) {}

const Grid3D& FeaturePyramid::level(std::size_t scale) const {
    if (scale == 0 || scale > levels_.size()) {
        throw ShapeError("feature pyramid has no level " + std::to_string(scale));
    }
    return levels_[scale - 1];
}

Grid2D blur_decimate(const Grid2D& image) {
    const std::size_t h = image.dim(0), w = image.dim(1);
    if (h < 2 || w < 2) throw ShapeError("image too small to decimate: " + shape_string(image));
    static constexpr std::array<Real, 5> taps{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    const auto& k = simd::kernels();

    // Vertical pass only on the rows that survive decimation.
    Grid2D vert({h / 2, w});
    parallel_for(h / 2, [&](std::size_t oy) {
        Real* dst = vert.row(oy);
        const auto cy = static_cast<std::ptrdiff_t>(2 * oy);
        for (std::size_t t = 0; t < taps.size(); ++t) {
            k.axpy(taps[t], image.row(clamp_index(cy + static_cast<std::ptrdiff_t>(t) - 2, h)), dst, w);
        }
    });

    Grid2D out({h / 2, w / 2});
    parallel_for(h / 2, [&](std::size_t oy) {
        const Real* src = vert.row(oy);
        Real* dst = out.row(oy);
        for (std::size_t ox = 0; ox < w / 2; ++ox) {
            const auto cx = static_cast<std::ptrdiff_t>(2 * ox);
            Real acc = 0;
            for (std::size_t t = 0; t < taps.size(); ++t) {
                acc = acc + taps[t] * src[clamp_index(cx + static_cast<std::ptrdiff_t>(t) - 2, w)];
            }
            dst[ox] = acc;
        }
    });
    return out;
}

Grid3D raw_channels(const Grid2D& image, const FeatureConfig& cfg) {
    const std::size_t h = image.dim(0), w = image.dim(1);
    const std::size_t nc = cfg.channels;
    Grid3D out({nc, h, w});
    const auto r = static_cast<std::ptrdiff_t>(cfg.stat_radius);
    const auto cr = static_cast<std::ptrdiff_t>(cfg.census_radius);
    const double window = static_cast<double>((2 * r + 1) * (2 * r + 1));

    auto at = [&](std::ptrdiff_t y, std::ptrdiff_t x) { return image(clamp_index(y, h), clamp_index(x, w)); };
    auto put = [&](std::size_t c, std::size_t y, std::size_t x, Real v) {
        if (c < nc) out(c, y, x) = v;
    };

    parallel_for(h, [&](std::size_t yu) {
        const auto y = static_cast<std::ptrdiff_t>(yu);
        for (std::size_t xu = 0; xu < w; ++xu) {
            const auto x = static_cast<std::ptrdiff_t>(xu);
            const Real center = image(yu, xu);
            put(0, yu, xu, center);
            put(1, yu, xu, (at(y, x + 1) - at(y, x - 1)) * Real(0.5));
            put(2, yu, xu, (at(y + 1, x) - at(y - 1, x)) * Real(0.5));

            double s = 0.0;
            for (std::ptrdiff_t dy = -r; dy <= r; ++dy)
                for (std::ptrdiff_t dx = -r; dx <= r; ++dx) s += at(y + dy, x + dx);
            const double mean = s / window;
            double ss = 0.0;
            for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
                for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                    const double d = at(y + dy, x + dx) - mean;
                    ss += d * d;
                }
            }
            put(3, yu, xu, static_cast<Real>(mean));
            put(4, yu, xu, static_cast<Real>(std::sqrt(ss / window)));

            for (std::size_t k = 0; k < kCensusOffsets.size(); ++k) {
                const Real nb = at(y + kCensusOffsets[k][1] * cr, x + kCensusOffsets[k][0] * cr);
                const Real sign = center > nb ? Real(1) : (center < nb ? Real(-1) : Real(0));
                put(5 + k, yu, xu, sign);
            }
        }
    });
    return out;
}

void normalize_channels(Grid3D& features) {
    const std::size_t plane = features.dim(1) * features.dim(2);
    parallel_for(features.dim(0), [&](std::size_t c) {
        Real* v = features.data() + c * plane;
        double s = 0.0;
        for (std::size_t i = 0; i < plane; ++i) s += v[i];
        const double mean = s / static_cast<double>(plane);
        double ss = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            const double d = v[i] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(plane));
        if (sd < kFlatChannelStd) {
            std::fill(v, v + plane, Real(0));
            return;
        }
        for (std::size_t i = 0; i < plane; ++i) v[i] = static_cast<Real>((v[i] - mean) / sd);
    });
}

FeaturePyramid build_pyramid(const Grid2D& image, std::size_t levels, const FeatureConfig& cfg) {
    cfg.validate();
    if (levels < 3) throw ConfigError("feature pyramid needs at least 3 levels");
    const std::size_t factor = std::size_t{1} << levels;
    if (image.dim(0) % factor || image.dim(1) % factor || image.dim(0) < factor || image.dim(1) < factor) {
        throw ShapeError("image " + shape_string(image) + " too small or not divisible by 2^" +
                         std::to_string(levels) + " = " + std::to_string(factor) + "; pad it first");
    }

    std::vector<Grid3D> out;
    out.reserve(levels);
    Grid2D current = image;
    for (std::size_t i = 1; i <= levels; ++i) {
        current = blur_decimate(current);
        Grid3D f = raw_channels(current, cfg);
        normalize_channels(f);
        out.push_back(std::move(f));
    }
    return FeaturePyramid(std::move(out), cfg.channels, cfg.groups);
}

}  // namespace cfstereo
