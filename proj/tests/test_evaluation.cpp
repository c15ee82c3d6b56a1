#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "cfstereo/evaluation.hpp"
#include "support/oracles.hpp"

using namespace cfstereo;

namespace {

Grid2D row_of(std::vector<Real> v) {
    const std::size_t n = v.size();
    return Grid2D({1, n}, std::move(v));
}

const std::vector<std::string> kKitti{"NLCANet", "CFNet", "CVANet", "GANet", "AANet", "HSMNet"};
const std::vector<std::string> kMiddlebury{"HSMNet", "CFNet", "NLCANet", "CVANet", "AANet", "GANet"};
const std::vector<std::string> kEth3d{"CFNet", "NLCANet", "HSMNet", "CVANet", "AANet", "GANet"};

RankBallot strict(const std::vector<std::string>& names) {
    RankBallot b;
    for (const auto& n : names) b.order.push_back({n});
    return b;
}

Ranking strict_ranking(const std::vector<std::string>& names) { return strict(names).order; }

}  // namespace

TEST_CASE("bad-tau examples") {
    CHECK(bad_tau(row_of({10.5, 23}), row_of({10, 20}), 2.0) == 0.5);
    CHECK(bad_tau(row_of({10, 20}), row_of({10, 20}), 0.0) == 0.0);
    CHECK_THROWS_AS(bad_tau(row_of({1, 2}), row_of({0, -1}), 1.0), DataError);
}

TEST_CASE("D1 examples") {
    CHECK(d1_all(row_of({10.5, 25, 7}), row_of({10, 20, 0})) == 0.5);
    CHECK(d1_all(row_of({104}), row_of({100})) == 0.0);
    CHECK(d1_all(row_of({106}), row_of({100})) == 1.0);
    CHECK(d1_all(row_of({3, 4}), row_of({3, 4})) == 0.0);
}

TEST_CASE("average error examples") {
    CHECK(avg_error(row_of({11, 17}), row_of({10, 20})) == 2.0);
    CHECK(avg_error(row_of({10, 20}), row_of({10, 20})) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(avg_error(row_of({1, 2}), row_of({inf, std::nan("")})), DataError);
}

TEST_CASE("masks, invalid values and shape checks") {
    Grid2D mask = row_of({1, 0});
    CHECK(bad_tau(row_of({10, 50}), row_of({10, 20}), 1.0, &mask) == 0.0);
    CHECK(avg_error(row_of({10, 50}), row_of({10, std::numeric_limits<double>::infinity()})) == 0.0);
    CHECK_THROWS_AS(bad_tau(row_of({1}), row_of({1, 2}), 1.0), ShapeError);
}

TEST_CASE("metric properties on random maps") {
    std::mt19937_64 rng(70);
    for (int t = 0; t < 100; ++t) {
        auto gt = oracle::random_map(4, 5, -5, 80, rng);
        auto pred = oracle::random_map(4, 5, 0, 80, rng);
        gt(0, 0) = 1.0;
        const double d1 = d1_all(pred, gt), b3 = bad_tau(pred, gt, 3.0);
        CHECK(d1 >= 0.0);
        CHECK(d1 <= b3);
        CHECK(b3 <= 1.0);
        CHECK(avg_error(pred, gt) >= 0.0);
        auto id = filtered_metrics(pred, gt, pred, std::numeric_limits<double>::infinity());
        CHECK(id.kept_fraction == 1.0);
        CHECK(id.d1_kept == d1);
        CHECK(id.d1_all == d1);
    }
}

TEST_CASE("uncertainty filtering drops the flagged pixel") {
    auto gt = row_of({10, 10, 10, 10});
    auto pred = row_of({10, 10.5, 10, 30});
    auto unc = row_of({0.1, 0.2, 0.1, 9.0});
    auto fm = filtered_metrics(pred, gt, unc, 2.5);
    CHECK(fm.kept_fraction == 0.75);
    CHECK(fm.d1_kept == 0.0);
    CHECK(fm.d1_all == 0.25);
    CHECK_THROWS_AS(filtered_metrics(pred, gt, row_of({9, 9, 9, 9}), 2.5), DataError);
}

TEST_CASE("coverage rate") {
    Grid3D planes({2, 1, 4}, std::vector<Real>{1, 1, 1, 1, 3, 3, 3, 3});
    HypothesisPlanes h{PerPixelPlanes{planes}};
    CHECK(coverage_rate(row_of({1, 2, 3, 2.5}), h) == 1.0);
    CHECK(coverage_rate(row_of({1, 2, 3, 3.5}), h) == 0.75);
    CHECK(coverage_rate(row_of({2, 2, 2, 2}), HypothesisPlanes{UniformPlanes{3}}) == 1.0);
}

TEST_CASE("ground truth downsampling") {
    Grid2D gt({2, 4}, std::vector<Real>{2, 4, 8, 8, 6, 8, 8, std::nan("")});
    auto d = downsample_gt(gt, 2);
    CHECK(d(0, 0) == 2.5);
    CHECK(std::isnan(d(0, 1)));
    CHECK_THROWS_AS(downsample_gt(gt, 3), ShapeError);
}

TEST_CASE("ballot parsing") {
    auto b = parse_ballot(" A , B=C ,D");
    REQUIRE(b.order.size() == 3);
    CHECK(b.order[0] == std::vector<std::string>{"A"});
    CHECK(b.order[1] == std::vector<std::string>{"B", "C"});
    CHECK(b.order[2] == std::vector<std::string>{"D"});
    CHECK_THROWS_AS(parse_ballot("A,,B"), DataError);
}

TEST_CASE("Schulze fusion of the three benchmark rankings") {
    auto r = schulze_rank({strict(kKitti), strict(kMiddlebury), strict(kEth3d)});
    CHECK(r == strict_ranking({"CFNet", "NLCANet", "HSMNet", "CVANet", "AANet", "GANet"}));
}

TEST_CASE("Schulze basics") {
    CHECK(schulze_rank({strict({"X", "Y", "Z"})}) == strict_ranking({"X", "Y", "Z"}));
    auto tie = schulze_rank({strict({"A", "B"}), strict({"B", "A"})});
    REQUIRE(tie.size() == 1);
    CHECK(tie[0] == std::vector<std::string>{"A", "B"});
    CHECK_THROWS_AS(schulze_rank({strict({"A", "Q"})}, {"A", "B"}), DataError);
    CHECK_THROWS_AS(schulze_rank({strict({"A", "A"})}), DataError);
    // Unlisted candidates rank below listed ones.
    auto partial = schulze_rank({strict({"B"})}, {"A", "B"});
    CHECK(partial == strict_ranking({"B", "A"}));
}

TEST_CASE("Schulze is invariant to ballot order and renaming") {
    std::mt19937_64 rng(71);
    std::vector<std::string> names{"a", "b", "c", "d", "e"};
    for (int t = 0; t < 50; ++t) {
        std::vector<RankBallot> ballots;
        for (int k = 0; k < 5; ++k) {
            auto n = names;
            std::shuffle(n.begin(), n.end(), rng);
            ballots.push_back(strict(n));
        }
        auto base = schulze_rank(ballots, names);
        auto shuffled = ballots;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(schulze_rank(shuffled, names) == base);

        std::map<std::string, std::string> rename;
        for (const auto& n : names) rename[n] = "m_" + n;
        std::vector<RankBallot> renamed = ballots;
        for (auto& b : renamed)
            for (auto& g : b.order)
                for (auto& n : g) n = rename[n];
        std::vector<std::string> renamed_names;
        for (const auto& n : names) renamed_names.push_back(rename[n]);
        auto r = schulze_rank(renamed, renamed_names);
        REQUIRE(r.size() == base.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::vector<std::string> expected;
            for (const auto& n : base[i]) expected.push_back(rename[n]);
            std::sort(expected.begin(), expected.end());
            CHECK(r[i] == expected);
        }
    }
}
