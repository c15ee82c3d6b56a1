#include "cfstereo/evaluation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cfstereo {
namespace {

void check_shapes(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask) {
    if (pred.shape() != gt.shape()) {
        throw ShapeError("prediction " + shape_string(pred) + " and ground truth " + shape_string(gt) + " differ");
    }
    if (mask && mask->shape() != gt.shape()) throw ShapeError("mask shape differs from ground truth");
}

// Applies fn(error, gt) over valid pixels and returns (hits, valid count).
template <typename Pred>
std::pair<std::size_t, std::size_t> count_valid(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask,
                                                Pred&& hit) {
    check_shapes(pred, gt, mask);
    std::size_t hits = 0, valid = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (!gt_valid(gt, mask, i)) continue;
        ++valid;
        if (hit(std::fabs(pred.data()[i] - gt.data()[i]), gt.data()[i], i)) ++hits;
    }
    if (valid == 0) throw DataError("no valid ground-truth pixels");
    return {hits, valid};
}

bool d1_outlier(double err, double gt) { return err > 3.0 && err > 0.05 * gt; }

}  // namespace

bool gt_valid(const Grid2D& gt, const Grid2D* mask, std::size_t i) {
    const Real v = gt.data()[i];
    return std::isfinite(v) && v > 0 && (!mask || mask->data()[i] != 0);
}

double bad_tau(const Grid2D& pred, const Grid2D& gt, double tau, const Grid2D* mask) {
    const auto [hits, valid] = count_valid(pred, gt, mask, [&](double e, double, std::size_t) { return e > tau; });
    return static_cast<double>(hits) / static_cast<double>(valid);
}

double d1_all(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask) {
    const auto [hits, valid] =
        count_valid(pred, gt, mask, [](double e, double g, std::size_t) { return d1_outlier(e, g); });
    return static_cast<double>(hits) / static_cast<double>(valid);
}

double avg_error(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask) {
    double total = 0.0;
    const auto [hits, valid] = count_valid(pred, gt, mask, [&](double e, double, std::size_t) {
        total += e;
        return false;
    });
    (void)hits;
    return total / static_cast<double>(valid);
}

FilteredMetrics filtered_metrics(const Grid2D& pred, const Grid2D& gt, const Grid2D& uncertainty,
                                 double sqrt_u_threshold, const Grid2D* mask) {
    check_shapes(pred, gt, mask);
    if (uncertainty.shape() != gt.shape()) throw ShapeError("uncertainty shape differs from ground truth");
    std::size_t valid = 0, kept = 0, outliers = 0, kept_outliers = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (!gt_valid(gt, mask, i)) continue;
        ++valid;
        const bool bad = d1_outlier(std::fabs(pred.data()[i] - gt.data()[i]), gt.data()[i]);
        outliers += bad;
        if (std::sqrt(uncertainty.data()[i]) >= sqrt_u_threshold) continue;
        ++kept;
        kept_outliers += bad;
    }
    if (valid == 0) throw DataError("no valid ground-truth pixels");
    if (kept == 0) throw DataError("uncertainty threshold removed every valid pixel");
    return FilteredMetrics{static_cast<double>(kept) / static_cast<double>(valid),
                           static_cast<double>(kept_outliers) / static_cast<double>(kept),
                           static_cast<double>(outliers) / static_cast<double>(valid)};
}

Grid2D downsample_gt(const Grid2D& gt, std::size_t factor, const Grid2D* mask) {
    if (factor == 0 || (factor & (factor - 1)) != 0) throw ShapeError("downsample factor must be a power of two");
    if (mask && mask->shape() != gt.shape()) throw ShapeError("mask shape differs from ground truth");
    if (gt.dim(0) % factor || gt.dim(1) % factor) {
        throw ShapeError("ground truth " + shape_string(gt) + " not divisible by " + std::to_string(factor));
    }
    Grid2D out({gt.dim(0) / factor, gt.dim(1) / factor});
    for (std::size_t y = 0; y < out.dim(0); ++y) {
        for (std::size_t x = 0; x < out.dim(1); ++x) {
            double s = 0.0;
            bool ok = true;
            for (std::size_t dy = 0; dy < factor && ok; ++dy) {
                for (std::size_t dx = 0; dx < factor && ok; ++dx) {
                    const std::size_t i = (y * factor + dy) * gt.dim(1) + x * factor + dx;
                    ok = gt_valid(gt, mask, i);
                    s += gt.data()[i];
                }
            }
            out(y, x) = ok ? static_cast<Real>(s / static_cast<double>(factor * factor * factor))
                           : std::numeric_limits<Real>::quiet_NaN();
        }
    }
    return out;
}

double coverage_rate(const Grid2D& gt, const HypothesisPlanes& planes, const Grid2D* mask) {
    planes.check_spatial(gt.dim(0), gt.dim(1));
    if (mask && mask->shape() != gt.shape()) throw ShapeError("mask shape differs from ground truth");
    std::size_t covered = 0, valid = 0;
    const std::size_t cols = gt.dim(1);
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (!gt_valid(gt, mask, i)) continue;
        ++valid;
        const std::size_t y = i / cols, x = i % cols;
        const Real g = gt.data()[i];
        if (planes.lowest(y, x) <= g && g <= planes.highest(y, x)) ++covered;
    }
    if (valid == 0) throw DataError("no valid ground-truth pixels");
    return static_cast<double>(covered) / static_cast<double>(valid);
}

}  // namespace cfstereo
