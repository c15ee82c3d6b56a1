#include "cfstereo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "cfstereo/parallel.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {
namespace {

// Portable uniform in [0, 1) from the raw 64-bit engine output.
Real unit_uniform(std::mt19937_64& rng) {
    return static_cast<Real>(rng() >> 11) * (Real(1) / static_cast<Real>(std::uint64_t{1} << 53));
}

Real unit_normal(std::mt19937_64& rng) {
    const Real u1 = std::max(unit_uniform(rng), std::numeric_limits<Real>::min());
    const Real u2 = unit_uniform(rng);
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi_v<Real> * u2);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Real parse_real(const std::string& s, const std::string& whole) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<Real>(v);
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' in disparity spec '" + whole + "'");
    }
}

Grid2D disparity_field(std::size_t rows, std::size_t cols, const DisparitySpec& spec, std::uint64_t seed) {
    Grid2D d({rows, cols});
    if (const auto* c = std::get_if<ConstantDisparity>(&spec)) {
        std::fill(d.storage().begin(), d.storage().end(), c->value);
    } else if (const auto* t = std::get_if<TwoPlaneDisparity>(&spec)) {
        const std::size_t split_col = t->split ? t->split : cols / 2;
        for (std::size_t y = 0; y < rows; ++y)
            for (std::size_t x = 0; x < cols; ++x) d(y, x) = x < split_col ? t->left : t->right;
    } else if (const auto* s = std::get_if<SlantedDisparity>(&spec)) {
        for (std::size_t y = 0; y < rows; ++y)
            for (std::size_t x = 0; x < cols; ++x)
                d(y, x) = s->base + s->gx * static_cast<Real>(x) + s->gy * static_cast<Real>(y);
    } else {
        const auto& p = std::get<PiecewiseDisparity>(spec);
        if (p.strips == 0) throw ConfigError("piecewise spec needs at least one strip");
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const Real top = static_cast<Real>(cols) / 4 - 1;
        std::vector<Real> values(p.strips);
        for (auto& v : values) v = std::floor(2 + unit_uniform(rng) * (top - 2));
        for (std::size_t y = 0; y < rows; ++y)
            for (std::size_t x = 0; x < cols; ++x) d(y, x) = values[x * p.strips / cols];
    }
    return d;
}

}  // namespace

DisparitySpec parse_disparity_spec(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty()) throw ConfigError("empty disparity spec");
    const std::string& kind = parts[0];
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo || parts.size() > hi) {
            throw ConfigError("disparity spec '" + text + "' has the wrong number of fields");
        }
    };
    if (kind == "constant") {
        need(2, 2);
        return ConstantDisparity{parse_real(parts[1], text)};
    }
    if (kind == "two-plane") {
        need(3, 4);
        TwoPlaneDisparity t{parse_real(parts[1], text), parse_real(parts[2], text), 0};
        if (parts.size() == 4) t.split = static_cast<std::size_t>(parse_real(parts[3], text));
        return t;
    }
    if (kind == "slanted") {
        need(4, 4);
        return SlantedDisparity{parse_real(parts[1], text), parse_real(parts[2], text), parse_real(parts[3], text)};
    }
    if (kind == "piecewise") {
        need(2, 2);
        return PiecewiseDisparity{static_cast<std::size_t>(parse_real(parts[1], text))};
    }
    throw ConfigError("unknown disparity spec kind '" + kind +
                      "' (expected constant, two-plane, slanted or piecewise)");
}

std::string to_string(const DisparitySpec& spec) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* c = std::get_if<ConstantDisparity>(&spec)) {
        os << "constant:" << c->value;
    } else if (const auto* t = std::get_if<TwoPlaneDisparity>(&spec)) {
        os << "two-plane:" << t->left << ':' << t->right;
        if (t->split) os << ':' << t->split;
    } else if (const auto* s = std::get_if<SlantedDisparity>(&spec)) {
        os << "slanted:" << s->base << ':' << s->gx << ':' << s->gy;
    } else {
        os << "piecewise:" << std::get<PiecewiseDisparity>(spec).strips;
    }
    return os.str();
}

SyntheticScene random_dot_stereogram(std::size_t rows, std::size_t cols, const DisparitySpec& spec,
                                     std::uint64_t seed) {
    Grid2D gt = disparity_field(rows, cols, spec, seed);
    const auto [dmin, dmax] = min_max(gt.values());
    if (dmin < 0 || !(dmax < static_cast<Real>(cols) / 4)) {
        throw ConfigError("synthetic disparities must lie in [0, W/4) = [0, " + std::to_string(cols / 4) +
                          "), got [" + std::to_string(dmin) + ", " + std::to_string(dmax) + "]");
    }

    // Texture spans columns [-margin, cols) so every left pixel has content;
    // the right image is the in-frame part.
    const auto margin = static_cast<std::size_t>(std::ceil(dmax)) + 2;
    const std::size_t world_cols = cols + margin;
    std::mt19937_64 rng(seed);
    Grid2D noise({rows, world_cols});
    for (Real& v : noise.storage()) v = unit_uniform(rng);
    const Grid2D world = box_filter_axis(box_filter_axis(noise, 1, 1), 0, 1);

    SyntheticScene scene{Grid2D({rows, cols}), Grid2D({rows, cols}), std::move(gt), Grid2D({rows, cols}), seed, spec};
    for (std::size_t y = 0; y < rows; ++y) {
        for (std::size_t x = 0; x < cols; ++x) scene.right(y, x) = world(y, x + margin);

        Real nearest_right = std::numeric_limits<Real>::infinity();
        for (std::size_t xi = cols; xi-- > 0;) {
            const Real pos = static_cast<Real>(xi) - scene.gt(y, xi);
            const Real wpos = pos + static_cast<Real>(margin);
            const auto x0 = static_cast<std::size_t>(std::floor(wpos));
            const Real t = wpos - std::floor(wpos);
            const Real a = world(y, x0);
            scene.left(y, xi) = t == 0 ? a : (1 - t) * a + t * world(y, std::min(x0 + 1, world_cols - 1));

            // A pixel further right that lands at or left of this match is nearer
            // the camera and hides it.
            const bool in_frame = pos >= 0;
            const bool visible = pos < nearest_right;
            scene.valid(y, xi) = (in_frame && visible) ? 1 : 0;
            nearest_right = std::min(nearest_right, pos);
        }
    }
    return scene;
}

void add_image_noise(SyntheticScene& scene, Real sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
    for (Grid2D* img : {&scene.left, &scene.right}) {
        for (Real& v : img->storage()) v = std::clamp(v + sigma * unit_normal(rng), Real(0), Real(1));
    }
}

Grid2D block_match_oracle(const Grid2D& left, const Grid2D& right, std::size_t dmax, std::size_t radius) {
    if (left.shape() != right.shape()) throw ShapeError("block matching needs equally sized images");
    const std::size_t rows = left.dim(0), cols = left.dim(1);
    Grid2D best_cost({rows, cols}, std::numeric_limits<Real>::infinity());
    Grid2D best_d({rows, cols});
    Grid2D diff({rows, cols});
    for (std::size_t d = 0; d < dmax; ++d) {
        for (std::size_t y = 0; y < rows; ++y) {
            for (std::size_t x = 0; x < cols; ++x) {
                const std::size_t xr = x >= d ? x - d : 0;
                diff(y, x) = std::fabs(left(y, x) - right(y, xr));
            }
        }
        // Window sums; a box mean ranks candidates exactly like a sum.
        const Grid2D cost = box_filter_axis(box_filter_axis(diff, 1, radius), 0, radius);
        for (std::size_t i = 0; i < cost.size(); ++i) {
            if (cost.data()[i] < best_cost.data()[i]) {
                best_cost.data()[i] = cost.data()[i];
                best_d.data()[i] = static_cast<Real>(d);
            }
        }
    }
    return best_d;
}

}  // namespace cfstereo
