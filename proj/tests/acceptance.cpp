// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfstereo/cascade.hpp"
#include "cfstereo/cost_volume.hpp"
#include "cfstereo/evaluation.hpp"
#include "cfstereo/io.hpp"
#include "cfstereo/parallel.hpp"
#include "cfstereo/pipeline.hpp"
#include "cfstereo/synth.hpp"
#include "support/files.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace cfstereo;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr std::size_t kScenes = 20;
constexpr std::size_t kRows = 128, kCols = 256, kDmax = 64;

PipelineConfig desk_config() {
    PipelineConfig cfg;
    cfg.dmax = kDmax;
    return cfg;
}

SyntheticScene scene_for(std::size_t i) {
    return random_dot_stereogram(kRows, kCols, scenes::cycled_spec(i), 100 + i);
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

// 1. Plane distribution examples with five planes 2..10.
Outcome fig5_values() {
    Grid3D planes({5, 1, 1}, std::vector<Real>{2, 4, 6, 8, 10});
    auto eval = [&](const std::vector<double>& p) {
        ScoreVolume sv{oracle::costs_for_probabilities(p, 1, 1), PerPixelPlanes{planes}, 3};
        auto d = soft_argmin(sv);
        auto u = uncertainty(sv, d);
        return std::pair{d.values(0, 0), u.values(0, 0)};
    };
    auto [da, ua] = eval({0, 0, 1, 0, 0});
    auto [db, ub] = eval({0, 0, 0.8, 0.2, 0});
    const double tol = 1e-6;
    const bool ok = std::fabs(da - 6.0) <= tol && std::fabs(ua) <= tol && std::fabs(db - 6.4) <= tol &&
                    std::fabs(ub - 0.64) <= tol;
    return {ok, "(a) d=" + fixed(da, 9) + " U=" + fixed(ua, 9) + "; (b) d=" + fixed(db, 9) + " U=" + fixed(ub, 9)};
}

// 2. Overall order of the three benchmark rankings.
Outcome table2_ranking() {
    auto strict = [](std::vector<std::string> names) {
        RankBallot b;
        for (auto& n : names) b.order.push_back({n});
        return b;
    };
    const std::vector<RankBallot> ballots{
        strict({"NLCANet", "CFNet", "CVANet", "GANet", "AANet", "HSMNet"}),
        strict({"HSMNet", "CFNet", "NLCANet", "CVANet", "AANet", "GANet"}),
        strict({"CFNet", "NLCANet", "HSMNet", "CVANet", "AANet", "GANet"}),
    };
    const Ranking got = schulze_rank(ballots);
    const Ranking want = strict({"CFNet", "NLCANet", "HSMNet", "CVANet", "AANet", "GANet"}).order;
    std::string order;
    for (const auto& g : got) {
        if (!order.empty()) order += " > ";
        for (std::size_t i = 0; i < g.size(); ++i) order += (i ? "=" : "") + g[i];
    }
    return {got == want, order};
}

// 3. Volume construction against the literal loop oracle.
Outcome volume_oracle_equivalence() {
    std::mt19937_64 rng(3003);
    std::uniform_int_distribution<std::size_t> side(1, 16), planes_d(2, 8);
    const std::size_t group_choices[] = {1, 2, 4};
    double worst = 0.0;
    std::size_t integer_mismatch = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t ng = group_choices[t % 3];
        const std::size_t nc = ng * std::uniform_int_distribution<std::size_t>(1, 8 / ng)(rng);
        const std::size_t rows = side(rng), cols = side(rng), n = planes_d(rng);
        auto l = oracle::random_features(nc, rows, cols, rng);
        auto r = oracle::random_features(nc, rows, cols, rng);

        auto dense = build_dense_volume(l, r, ng, 1, 2 * n);
        auto dense_o = oracle::volume_oracle(l, r, ng, n, [](std::size_t k, std::size_t, std::size_t) { return double(k); });
        worst = std::max(worst, oracle::max_abs_diff(dense.data.values(), dense_o.values()));

        Grid3D frac({n, rows, cols});
        std::uniform_real_distribution<double> dv(-1.0, double(cols) + 1.0);
        for (auto& v : frac.storage()) v = dv(rng);
        auto sparse = build_sparse_volume(l, r, ng, 1, PerPixelPlanes{frac});
        auto sparse_o = oracle::volume_oracle(l, r, ng, n, [&](std::size_t k, std::size_t y, std::size_t x) { return frac(k, y, x); });
        worst = std::max(worst, oracle::max_abs_diff(sparse.data.values(), sparse_o.values()));

        Grid3D ints({n, rows, cols});
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < rows * cols; ++i) ints.storage()[k * rows * cols + i] = double(k);
        auto sparse_int = build_sparse_volume(l, r, ng, 1, PerPixelPlanes{ints});
        integer_mismatch += !(sparse_int.data == dense.data);
    }
    const bool ok = worst <= 1e-6 && integer_mismatch == 0;
    std::ostringstream os;
    os << "200 instances, max |diff| " << worst << ", integer sparse != dense in " << integer_mismatch;
    return {ok, os.str()};
}

// 4. Range widening and plane sampling algebra.
Outcome range_algebra() {
    // Recentred floor windows may differ by rounding only.
    auto shrinks = [](double lo, double hi, double lo2, double hi2) { return lo2 > lo + 1e-9 || hi2 < hi - 1e-9; };
    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> dd(0, 40), uu(0, 16), aa(-1, 3), bb(0, 4), step(0, 2), unit(0, 1);
    std::uniform_int_distribution<std::size_t> nd(2, 20);
    std::size_t mono = 0, contain = 0, spacing = 0;
    for (int t = 0; t < 500; ++t) {
        DisparityMap d{oracle::random_map(2, 3, 0, 40, rng), 3};
        UncertaintyMap u{oracle::random_map(2, 3, 0, 16, rng), 3};
        if (t % 10 == 0) u.values = Grid2D({2, 3}, 0.0);
        const RangeParams p{aa(rng), bb(rng)};
        const RangeParams pa{p.alpha + step(rng), p.beta}, pb{p.alpha, p.beta + step(rng)};
        const std::size_t planes = nd(rng);

        const auto base = next_range(d, u, p, 0.25, planes, 256);
        const auto base_w = widen_range(d, u, p);
        for (const auto& q : {pa, pb}) {
            const auto r = next_range(d, u, q, 0.25, planes, 256);
            const auto w = widen_range(d, u, q);
            for (std::size_t i = 0; i < r.lower.size(); ++i)
                mono += shrinks(base.lower.storage()[i], base.upper.storage()[i], r.lower.storage()[i], r.upper.storage()[i]);
            for (std::size_t i = 0; i < w.lower.size(); ++i)
                mono += shrinks(base_w.lower.storage()[i], base_w.upper.storage()[i], w.lower.storage()[i],
                                w.upper.storage()[i]);
        }

        for (std::size_t i = 0; i < d.values.size(); ++i) {
            const double half = (p.alpha + 1) * std::sqrt(u.values.storage()[i]) + p.beta;
            const double gt = d.values.storage()[i] + (2 * unit(rng) - 1) * half;
            contain += !(base_w.lower.storage()[i] <= gt && gt <= base_w.upper.storage()[i]);
        }

        const auto pl = sample_planes(base, planes);
        for (std::size_t i = 0; i < base.lower.size(); ++i) {
            const double lo = base.lower.storage()[i], hi = base.upper.storage()[i];
            const double gap = (hi - lo) / double(planes - 1);
            const std::size_t plane_size = base.lower.size();
            if (std::fabs(pl.values.storage()[i] - lo) > 1e-9) ++spacing;
            if (std::fabs(pl.values.storage()[(planes - 1) * plane_size + i] - hi) > 1e-9) ++spacing;
            for (std::size_t k = 1; k < planes; ++k) {
                const double step_k = pl.values.storage()[k * plane_size + i] - pl.values.storage()[(k - 1) * plane_size + i];
                if (std::fabs(step_k - gap) > 1e-9) ++spacing;
            }
        }
    }
    std::ostringstream os;
    os << "500 trials: monotonicity violations " << mono << ", containment failures " << contain
       << ", endpoint/spacing errors " << spacing;
    return {mono == 0 && contain == 0 && spacing == 0, os.str()};
}

// 5. End-to-end quality on the synthetic scenes.
Outcome desk_scale_run() {
    const auto cfg = desk_config();
    std::size_t failures = 0;
    double worst_median = 0, worst_coverage = 1, worst_margin = -1;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < kScenes; ++i) {
        const auto scene = scene_for(i);
        const auto out = run_pipeline(scene.left, scene.right, cfg);
        const Grid2D mask = scenes::interior_mask(scene);
        const double median = scenes::median_abs_error(out.disparity, scene.gt, mask);
        const Grid2D gt1 = downsample_gt(scene.gt, 2, &mask);
        const double coverage = coverage_rate(gt1, out.stage(1).planes);
        const double bad2 = bad_tau(out.disparity, scene.gt, 2.0, &mask);
        const double bm_bad2 = bad_tau(block_match_oracle(scene.left, scene.right, kDmax, 3), scene.gt, 2.0, &mask);
        const double margin = bad2 - bm_bad2;
        worst_median = std::max(worst_median, median);
        worst_coverage = std::min(worst_coverage, coverage);
        worst_margin = std::max(worst_margin, margin);
        const bool ok = median <= 1.0 && coverage >= 0.95 && margin <= 0.05;
        failures += !ok;
        std::printf("  scene %2zu %-22s median %.3f coverage %.4f bad2.0 %.4f block-match %.4f%s\n", i,
                    to_string(scene.spec).c_str(), median, coverage, bad2, bm_bad2, ok ? "" : "  <-- fails");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os << kScenes << " scenes, worst median " << fixed(worst_median, 3) << " px, worst coverage "
       << fixed(worst_coverage) << ", worst bad2.0 margin " << fixed(worst_margin) << ", " << fixed(secs, 1) << " s";
    return {failures == 0 && secs < 60.0, os.str()};
}

// 6. Uncertainty filtering on noisy scenes.
Outcome filtering_direction() {
    const auto cfg = desk_config();
    std::size_t increases = 0;
    double reduction_sum = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < kScenes; ++i) {
        auto scene = scene_for(i);
        add_image_noise(scene, 0.05, 100 + i);
        const auto out = run_pipeline(scene.left, scene.right, cfg);
        const auto fm = filtered_metrics(out.disparity, scene.gt, out.uncertainty, 2.5, &scene.valid);
        const double reduction = fm.d1_all > 0 ? (fm.d1_all - fm.d1_kept) / fm.d1_all : 0.0;
        reduction_sum += reduction;
        increases += fm.d1_kept > fm.d1_all;
        std::printf("  scene %2zu kept %.4f d1_all %.4f d1_kept %.4f reduction %.3f\n", i, fm.kept_fraction,
                    fm.d1_all, fm.d1_kept, reduction);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double mean = reduction_sum / kScenes;
    std::ostringstream os;
    os << "D1 increased on " << increases << " scenes, mean relative reduction " << fixed(mean) << ", "
       << fixed(secs, 1) << " s";
    return {increases == 0 && mean > 0 && secs < 60.0, os.str()};
}

// 7. Output bytes independent of the worker count.
Outcome thread_determinism() {
    files::TempDir dir("determinism");
    const auto cfg = desk_config();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < kScenes; ++i) {
        const auto scene = scene_for(i);
        std::string reference_disp, reference_unc;
        for (std::size_t threads : {1u, 2u, 8u}) {
            set_thread_count(threads);
            const auto out = run_pipeline(scene.left, scene.right, cfg);
            write_pfm(dir / "d.pfm", out.disparity);
            write_pfm(dir / "u.pfm", out.uncertainty);
            const auto disp = files::read_bytes(dir / "d.pfm"), unc = files::read_bytes(dir / "u.pfm");
            if (threads == 1) {
                reference_disp = disp;
                reference_unc = unc;
            } else {
                mismatches += disp != reference_disp || unc != reference_unc;
            }
        }
    }
    set_thread_count(0);
    return {mismatches == 0, std::to_string(kScenes) + " scenes x {1, 2, 8} threads, " + std::to_string(mismatches) +
                                 " mismatching outputs"};
}

// 8. File format round trips and the golden PFM.
Outcome format_fidelity() {
    files::TempDir dir("formats");
    std::mt19937_64 rng(8008);
    std::uniform_int_distribution<std::size_t> side(1, 64);
    std::normal_distribution<float> value(0.0f, 50.0f);
    std::size_t pfm_bad = 0, pgm_bad = 0;
    for (int t = 0; t < 100; ++t) {
        Grid2D g({side(rng), side(rng)});
        for (auto& v : g.storage()) v = static_cast<double>(value(rng));
        write_pfm(dir / "a.pfm", g);
        const auto back = read_pfm(dir / "a.pfm");
        write_pfm(dir / "b.pfm", back);
        pfm_bad += !(back == g) || files::read_bytes(dir / "a.pfm") != files::read_bytes(dir / "b.pfm");

        const unsigned maxval = t % 2 ? 65535u : 255u;
        std::uniform_int_distribution<unsigned> level(0, maxval);
        Grid2D img({side(rng), side(rng)});
        for (auto& v : img.storage()) v = double(level(rng)) / maxval;
        write_pgm(dir / "a.pgm", img, maxval);
        const auto img_back = read_pnm(dir / "a.pgm");
        write_pgm(dir / "b.pgm", img_back, maxval);
        pgm_bad += !(img_back == img) || files::read_bytes(dir / "a.pgm") != files::read_bytes(dir / "b.pgm");
    }
    write_pfm(dir / "golden.pfm", Grid2D({1, 1}, 3.5));
    const std::string golden = std::string("Pf\n1 1\n-1\n") + std::string("\x00\x00\x60\x40", 4);
    const bool golden_ok = files::read_bytes(dir / "golden.pfm") == golden;
    std::ostringstream os;
    os << "100 PFM / 100 PGM round trips, failures " << pfm_bad << " / " << pgm_bad << ", golden 1x1 PFM "
       << (golden_ok ? "matches" : "differs");
    return {pfm_bad == 0 && pgm_bad == 0 && golden_ok, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"uncertainty examples", fig5_values},
        {"benchmark rank fusion", table2_ranking},
        {"volume oracle equivalence", volume_oracle_equivalence},
        {"range and plane algebra", range_algebra},
        {"desk-scale end-to-end", desk_scale_run},
        {"uncertainty filtering", filtering_direction},
        {"thread determinism", thread_determinism},
        {"format fidelity", format_fidelity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("criterion %zu %s: %s [%.2f s] %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
