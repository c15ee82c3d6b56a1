#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cfstereo/cost_volume.hpp"
#include "cfstereo/grid.hpp"

namespace cfstereo {

/// A ground-truth pixel counts when it is finite, > 0 and, if a mask is
/// given, its mask value is non-zero. Every metric throws DataError when no
/// pixel counts.
bool gt_valid(const Grid2D& gt, const Grid2D* mask, std::size_t i);

/// Fraction of valid pixels with |pred - gt| > tau.
double bad_tau(const Grid2D& pred, const Grid2D& gt, double tau, const Grid2D* mask = nullptr);

/// Fraction of valid pixels with |pred - gt| > 3 and |pred - gt| > 0.05 gt.
double d1_all(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask = nullptr);

/// Mean |pred - gt| over valid pixels.
double avg_error(const Grid2D& pred, const Grid2D& gt, const Grid2D* mask = nullptr);

struct FilteredMetrics {
    double kept_fraction = 0;  ///< retained share of the valid pixels
    double d1_kept = 0;        ///< D1 over retained valid pixels
    double d1_all = 0;         ///< D1 over all valid pixels
};

/// Drops pixels with sqrt(U) >= threshold before computing D1.
FilteredMetrics filtered_metrics(const Grid2D& pred, const Grid2D& gt, const Grid2D& uncertainty,
                                 double sqrt_u_threshold, const Grid2D* mask = nullptr);

/// Ground truth reduced by `factor` (power of two) to a coarser stage: each
/// block's mean divided by `factor`, valid only when every source pixel is.
/// Invalid outputs are NaN.
Grid2D downsample_gt(const Grid2D& gt, std::size_t factor, const Grid2D* mask = nullptr);

/// Fraction of valid pixels whose gt lies within [lowest, highest] plane.
/// `gt` must already be at the planes' resolution and units.
double coverage_rate(const Grid2D& gt, const HypothesisPlanes& planes, const Grid2D* mask = nullptr);

/// Ordered groups of equally ranked methods, best first.
using Ranking = std::vector<std::vector<std::string>>;

/// One ranking of methods. Methods in the same inner list tie.
struct RankBallot {
    Ranking order;
};

/// Parses "A,B=C,D": commas separate ranks, '=' joins tied methods.
RankBallot parse_ballot(const std::string& line);

/// Schulze (beatpath) fusion of ballots over an explicit candidate set.
/// Candidates missing from a ballot rank below its listed ones. Throws
/// DataError for a method outside `candidates` or a repeated method.
Ranking schulze_rank(const std::vector<RankBallot>& ballots, const std::vector<std::string>& candidates);

/// Same, with candidates taken from the ballots in order of appearance.
Ranking schulze_rank(const std::vector<RankBallot>& ballots);

}  // namespace cfstereo
