#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cfstereo/parallel.hpp"
#include "cfstereo/tensor_ops.hpp"
#include "support/oracles.hpp"

using namespace cfstereo;

TEST_CASE("softmax of (0, ln 3) is (0.25, 0.75)") {
    Grid3D logits({2, 1, 1}, std::vector<Real>{0.0, std::log(3.0)});
    auto p = softmax_along_planes(logits);
    CHECK(p(0, 0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p(1, 0, 0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("softmax sums to one and ignores per-pixel shifts") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Grid3D logits({7, 3, 5});
        std::uniform_real_distribution<double> d(-40, 40);
        for (auto& v : logits.storage()) v = d(rng);
        auto p = softmax_along_planes(logits);
        Grid3D shifted = logits;
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t x = 0; x < 5; ++x) {
                const double c = d(rng) * 10;
                for (std::size_t n = 0; n < 7; ++n) shifted(n, y, x) += c;
            }
        auto q = softmax_along_planes(shifted);
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t x = 0; x < 5; ++x) {
                double s = 0;
                for (std::size_t n = 0; n < 7; ++n) {
                    s += p(n, y, x);
                    CHECK(p(n, y, x) >= 0.0);
                    CHECK(std::fabs(p(n, y, x) - q(n, y, x)) < 1e-9);
                }
                CHECK(std::fabs(s - 1.0) < 1e-6);
            }
    }
}

TEST_CASE("softmax survives huge logits and rejects NaN") {
    Grid3D big({2, 1, 1}, std::vector<Real>{1e300, 1e300});
    auto p = softmax_along_planes(big);
    CHECK(p(0, 0, 0) == doctest::Approx(0.5));
    Grid3D bad({2, 1, 2}, std::vector<Real>{0, 0, 1, std::numeric_limits<double>::quiet_NaN()});
    CHECK_THROWS_AS(softmax_along_planes(bad), DataError);
}

TEST_CASE("bilinear upsampling of [0, 1]") {
    Grid2D m({1, 2}, std::vector<Real>{0.0, 1.0});
    auto u = bilinear_upsample2x(m);
    REQUIRE(u.dim(0) == 2);
    REQUIRE(u.dim(1) == 4);
    const double expected[] = {0.0, 0.25, 0.75, 1.0};
    for (int r = 0; r < 2; ++r)
        for (int x = 0; x < 4; ++x) CHECK(u(r, x) == doctest::Approx(expected[x]).epsilon(1e-15));
}

TEST_CASE("upsampling keeps constants and stays within the input range") {
    Grid3D c({3, 2, 5}, 4.25);
    auto u = trilinear_upsample2x(c);
    CHECK(u.dim(0) == 6);
    CHECK(u.dim(1) == 4);
    CHECK(u.dim(2) == 10);
    for (double v : u.values()) CHECK(v == 4.25);

    std::mt19937_64 rng(5);
    auto m = oracle::random_map(4, 6, -2, 3, rng);
    auto [lo, hi] = min_max(m.values());
    auto up = bilinear_upsample2x(m);
    auto [ulo, uhi] = min_max(up.values());
    CHECK(ulo >= lo);
    CHECK(uhi <= hi);
}

TEST_CASE("average pooling of 0..7 gives 3.5") {
    Grid3D v({2, 2, 2}, std::vector<Real>{0, 1, 2, 3, 4, 5, 6, 7});
    auto p = avgpool_volume(v);
    REQUIRE(p.size() == 1);
    CHECK(p(0, 0, 0) == 3.5);
}

TEST_CASE("average pooling preserves the global mean and checks parity") {
    std::mt19937_64 rng(9);
    Grid4D v({3, 4, 6, 8});
    std::uniform_real_distribution<double> d(-1, 1);
    for (auto& x : v.storage()) x = d(rng);
    auto p = avgpool_volume(v);
    CHECK(p.dim(0) == 3);
    CHECK(p.dim(1) == 2);
    CHECK(p.dim(2) == 3);
    CHECK(p.dim(3) == 4);
    CHECK(sum(p.values()) / p.size() == doctest::Approx(sum(v.values()) / v.size()).epsilon(1e-12));
    CHECK_THROWS_AS(avgpool_volume(Grid3D({2, 3, 2})), ShapeError);
}

TEST_CASE("box filter matches a clamped direct sum") {
    std::mt19937_64 rng(21);
    Grid3D v({5, 4, 7});
    std::uniform_real_distribution<double> d(-1, 1);
    for (auto& x : v.storage()) x = d(rng);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for (std::size_t r : {0u, 1u, 2u}) {
            auto f = box_filter_axis(v, axis, r);
            for (std::size_t a = 0; a < 5; ++a)
                for (std::size_t b = 0; b < 4; ++b)
                    for (std::size_t c = 0; c < 7; ++c) {
                        std::array<std::size_t, 3> idx{a, b, c};
                        double s = 0;
                        const long len = static_cast<long>(v.dim(axis));
                        for (long k = -static_cast<long>(r); k <= static_cast<long>(r); ++k) {
                            auto j = idx;
                            j[axis] = static_cast<std::size_t>(std::clamp<long>(static_cast<long>(idx[axis]) + k, 0, len - 1));
                            s += v(j[0], j[1], j[2]);
                        }
                        CHECK(f(a, b, c) == doctest::Approx(s / (2 * r + 1)).epsilon(1e-12));
                    }
        }
    }
}

TEST_CASE("grids reject zero dimensions and mismatched data") {
    CHECK_THROWS_AS(Grid2D({0, 3}), ShapeError);
    CHECK_THROWS_AS(Grid2D({2, 2}, std::vector<Real>{1, 2, 3}), ShapeError);
    CHECK(shape_string(Grid3D({1, 2, 3})) == "(1, 2, 3)");
}

TEST_CASE("parallel_for covers every index and reports the first failure") {
    for (std::size_t threads : {1u, 3u, 8u}) {
        set_thread_count(threads);
        std::vector<int> hit(1000, 0);
        parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
        CHECK(std::count(hit.begin(), hit.end(), 1) == 1000);
        try {
            parallel_for(1000, [](std::size_t i) {
                if (i == 700 || i == 10) throw DataError("item " + std::to_string(i));
            });
            FAIL("no exception");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()) == "item 10");
        }
    }
    set_thread_count(0);
    CHECK(thread_count() >= 1);
}
