#include <gtest/gtest.h>

#include <cmath>

#include "cubelp/generators.hpp"
#include "cubelp/geodesic.hpp"
#include "support.hpp"

using namespace cubelp;
using cubelp::testing::error_code_of;
using cubelp::testing::random_point;

namespace {

// Minimizes a convex function on [0,1] by ternary search.
template <class F>
double argmin01(F f) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double a = lo + (hi - lo) / 3.0;
        const double b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    return 0.5 * (lo + hi);
}

// Coordinates of the grid(2,2,2) point 2u for u in the unit cube.
Point scaled_grid_point(const Point& u) {
    std::vector<double> a;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for (std::size_t k = 0; k < 2; ++k) a.push_back(std::clamp(2.0 * u[axis] - k, 0.0, 1.0));
    }
    return Point(a);
}

}  // namespace

TEST(Geodesic, SquareDiagonal) {
    const auto sq = hypercube(2);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto path = geodesic(sq, Point({0, 0}), Point({1, 1}), PValue(p));
        EXPECT_NEAR(path.length(), std::pow(2.0, 1.0 / p), 1e-12);
        EXPECT_EQ(path.interior_breaks(), 0u);
    }
}

TEST(Geodesic, SquareCubeBookClosedFormAtTwo) {
    const auto X = square_cube_book();  // d a b c
    const auto path = geodesic(X, Point({0, 1, 0, 0}), Point({1, 0, 1, 1}), PValue(2));
    ASSERT_EQ(path.interior_breaks(), 1u);
    const double z = 1.0 / (1.0 + std::sqrt(2.0));
    EXPECT_NEAR(path.breaks()[1][0], z, 1e-9);
    EXPECT_NEAR(path.length(), std::sqrt(z * z + 1) + std::sqrt((1 - z) * (1 - z) + 2), 1e-12);
    EXPECT_LE(check_zero_tension(X, path, 1e-9).worst_residual, 1e-9);
}

TEST(Geodesic, CompletenessByRootFinding) {
    // One break point on the shared edge d: minimizing over its coordinate
    // alone yields the only path satisfying both local conditions.
    const auto X = square_cube_book();
    SplitMix64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const Point x({rng.uniform(), rng.uniform(0.1, 1.0), 0, 0});
        const Point y({rng.uniform(), 0, rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)});
        for (double p : {1.5, 2.0, 3.0}) {
            auto f = [&](double z) {
                return std::pow(std::pow(std::fabs(x[0] - z), p) + std::pow(x[1], p), 1 / p) +
                       std::pow(std::pow(std::fabs(z - y[0]), p) + std::pow(y[2], p) +
                                    std::pow(y[3], p),
                                1 / p);
            };
            const double z = argmin01(f);
            const auto path = geodesic(X, x, y, PValue(p));
            EXPECT_NEAR(path.length(), f(z), 1e-9);
            ASSERT_EQ(path.interior_breaks(), 1u);
            EXPECT_NEAR(path.breaks()[1][0], z, 1e-6);
            const PiecewisePath built(X, {x, Point({z, 0, 0, 0}), y}, PValue(p));
            EXPECT_TRUE(check_local_conditions(X, built, 1e-6).ok());
            EXPECT_LE(sup_distance(built, path), 1e-6);
        }
    }
}

TEST(Geodesic, CornerShortcut) {
    const auto X = corner_complex();  // a1 a2 b1 b2; corner square {a2,b1}
    const Point x({0.3, 0.9, 0, 0});
    const Point y({0, 0, 0.9, 0.3});
    const Point v({0, 0, 0, 0});
    const PValue p(2);
    const PiecewisePath through_v(X, {x, v, y}, p);
    const auto cr = check_no_shortcut(X, through_v, 1e-8);
    EXPECT_FALSE(cr.ok());
    const auto g = geodesic(X, x, y, p);
    EXPECT_LT(g.length(), through_v.length() - 1e-3);
    EXPECT_TRUE(check_local_conditions(X, g, 1e-8).ok());

    // Symmetric points at equality of the normalized criterion pass through v.
    const Point xs({0.9, 0.9, 0, 0});
    const Point ys({0, 0, 0.9, 0.9});
    const auto r = geodesic_report(X, xs, ys, p);
    EXPECT_NEAR(r.path.length(), 2 * 0.9 * std::sqrt(2.0), 1e-9);
}

TEST(Geodesic, ScaleInvariance) {
    const auto cube = hypercube(3);
    const auto g = grid(2, 2, 2);
    SplitMix64 rng(8);
    for (int i = 0; i < 8; ++i) {
        const Point u({rng.uniform(), rng.uniform(), rng.uniform()});
        const Point w({rng.uniform(), rng.uniform(), rng.uniform()});
        for (double p : {1.5, 2.0, 3.0}) {
            const double d1 = distance(cube, u, w, PValue(p));
            const double d2 = distance(g, scaled_grid_point(u), scaled_grid_point(w), PValue(p));
            EXPECT_NEAR(d2, 2.0 * d1, 1e-8) << "p=" << p;
        }
    }
}

TEST(Geodesic, ThreeCubeRestartsAgree) {
    const auto X = grid(3, 1, 1);  // x1 x2 x3 y1 z1
    SplitMix64 rng(4);
    for (int i = 0; i < 5; ++i) {
        const Point x({rng.uniform(0.1, 0.9), 0, 0, rng.uniform(), rng.uniform()});
        const Point y({1, 1, rng.uniform(0.1, 0.9), rng.uniform(), rng.uniform()});
        const auto gs = enumerate_galleries(X, x, y);
        ASSERT_EQ(gs.size(), 1u);
        ASSERT_EQ(gs[0].cubes.size(), 3u);
        for (double p : {1.5, 2.0, 3.0}) {
            const auto base = optimize_gallery(gs[0], x, y, PValue(p));
            for (std::uint64_t s = 1; s <= 10; ++s) {
                SolverOptions o;
                o.init_seed = s;
                const auto r = optimize_gallery(gs[0], x, y, PValue(p), o);
                EXPECT_NEAR(r.length, base.length, 1e-10);
                ASSERT_EQ(r.raw_breaks.size(), base.raw_breaks.size());
                for (std::size_t b = 0; b < r.raw_breaks.size(); ++b) {
                    for (std::size_t h = 0; h < X.hyperplane_count(); ++h) {
                        EXPECT_NEAR(r.raw_breaks[b][h], base.raw_breaks[b][h], 1e-7);
                    }
                }
            }
        }
    }
}

TEST(Geodesic, FixturesUniqueAndLocallyGeodesic) {
    SplitMix64 rng(13);
    for (const auto& nc : bundled_fixtures()) {
        for (int i = 0; i < 10; ++i) {
            const Point x = random_point(nc.complex, rng);
            const Point y = random_point(nc.complex, rng);
            for (double p : {1.5, 2.0, 3.0}) {
                const auto r = geodesic_report(nc.complex, x, y, PValue(p));
                EXPECT_LE(r.max_optimal_gap, 1e-6) << nc.name;
                EXPECT_TRUE(check_local_conditions(nc.complex, r.path, 1e-8).ok()) << nc.name;
            }
        }
    }
}

TEST(Geodesic, HyperplaneCrossedAtMostOnce) {
    SplitMix64 rng(19);
    for (const auto& nc : bundled_fixtures()) {
        for (int i = 0; i < 10; ++i) {
            const auto path = geodesic(nc.complex, random_point(nc.complex, rng),
                                       random_point(nc.complex, rng), PValue(2.5));
            for (std::size_t h = 0; h < nc.complex.hyperplane_count(); ++h) {
                int side = -1, flips = 0;
                for (const auto& b : path.breaks()) {
                    const int s = b[h] == 0.0 ? 0 : (b[h] == 1.0 ? 1 : -1);
                    if (s < 0) continue;
                    if (side >= 0 && s != side) ++flips;
                    side = s;
                }
                EXPECT_LE(flips, 1) << nc.name;
            }
        }
    }
}

TEST(Geodesic, ProjectionLaw) {
    const auto X = book_of_squares(2);  // spine s is the shared factor
    SplitMix64 rng(23);
    SignVector spine;
    spine.set(0);
    SignVector pages;
    pages.set(1);
    pages.set(2);
    for (int i = 0; i < 10; ++i) {
        const Point x({rng.uniform(), rng.uniform(0.1, 1), 0});
        const Point y({rng.uniform(), 0, rng.uniform(0.1, 1)});
        for (double p : {1.5, 2.0, 3.0}) {
            const auto path = geodesic(X, x, y, PValue(p));
            double ld = 0.0, ly = 0.0;
            const auto& b = path.breaks();
            for (std::size_t k = 0; k + 1 < b.size(); ++k) {
                ld += masked_norm(b[k], b[k + 1], spine, PValue(p));
                ly += masked_norm(b[k], b[k + 1], pages, PValue(p));
            }
            EXPECT_NEAR(ld, std::fabs(x[0] - y[0]), 1e-8);
            EXPECT_NEAR(ly, x[1] + y[2], 1e-8);  // pages unfold to a segment
        }
    }
}

TEST(Geodesic, Bicombing) {
    const auto t = tree({{0, 1}, {1, 2}});
    const Point mid = bicombing(t, Point({0.5, 0}), Point({1, 0.5}), 0.5, PValue(2));
    EXPECT_NEAR(mid[0], 1.0, 1e-12);
    EXPECT_NEAR(mid[1], 0.0, 1e-12);

    SplitMix64 rng(29);
    for (const auto& nc : bundled_fixtures()) {
        const Point x = random_point(nc.complex, rng);
        const Point y = random_point(nc.complex, rng);
        const Point same = bicombing(nc.complex, x, x, 0.3, PValue(2));
        for (std::size_t h = 0; h < x.size(); ++h) EXPECT_EQ(same[h], x[h]);
        for (double s : {0.2, 0.5, 0.7}) {
            const Point a = bicombing(nc.complex, x, y, s, PValue(3));
            const Point b = bicombing(nc.complex, y, x, 1 - s, PValue(3));
            for (std::size_t h = 0; h < x.size(); ++h) EXPECT_NEAR(a[h], b[h], 1e-7) << nc.name;
        }
    }
}

TEST(Geodesic, FaultInjection) {
    // A break point moved along the shared face either breaks a condition or
    // lengthens the path.
    SplitMix64 rng(31);
    std::size_t injected = 0;
    for (const auto& nc : bundled_fixtures()) {
        for (int i = 0; i < 10; ++i) {
            const auto g = geodesic(nc.complex, random_point(nc.complex, rng),
                                    random_point(nc.complex, rng), PValue(2));
            auto breaks = g.breaks();
            for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
                const auto d = intersect(g.segment_cubes()[k - 1], g.segment_cubes()[k]);
                if (!d || d->dimension() == 0) continue;
                std::size_t h = 0;
                while (!d->support[h]) ++h;
                auto a = breaks[k].ambient();
                a[h] = a[h] + 0.05 <= 1.0 ? a[h] + 0.05 : a[h] - 0.05;
                auto moved = breaks;
                moved[k] = Point(a);
                const PiecewisePath bad(nc.complex, moved, PValue(2));
                const bool fails = !check_local_conditions(nc.complex, bad, 1e-8).ok();
                EXPECT_TRUE(fails || bad.length() > g.length() + 1e-6) << nc.name;
                ++injected;
            }
        }
    }
    EXPECT_GT(injected, 0u);
}

TEST(Geodesic, Errors) {
    const auto sq = hypercube(2);
    EXPECT_EQ(error_code_of([&] { geodesic(sq, Point({0, 0}), Point({1, 1}), PValue(1)); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(error_code_of([&] { geodesic(sq, Point({0, 0}), Point({1, 1, 0}), PValue(2)); }),
              ErrorCode::InvalidArgument);
    const auto corner = corner_complex();
    EXPECT_EQ(error_code_of([&] {
                  PiecewisePath(corner, {Point({1, 1, 0, 0}), Point({0, 0, 1, 1})}, PValue(2));
              }),
              ErrorCode::NoCommonCube);
}
