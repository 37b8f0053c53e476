#include <gtest/gtest.h>

#include <cmath>

#include "cubelp/generators.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/lp.hpp"
#include "support.hpp"

using namespace cubelp;
using cubelp::testing::error_code_of;

TEST(Lp, ClosedForms) {
    const std::vector<double> a{3.0, 4.0};
    EXPECT_DOUBLE_EQ(lp_norm(a, PValue(2)), 5.0);
    EXPECT_DOUBLE_EQ(lp_norm(a, PValue(1)), 7.0);
    EXPECT_DOUBLE_EQ(lp_norm(a, PValue::infinity()), 4.0);
    const std::vector<double> ones{1.0, 1.0};
    EXPECT_NEAR(lp_norm(ones, PValue(3)), std::cbrt(2.0), 1e-15);
    for (std::size_t n = 1; n <= 6; ++n) {
        const std::vector<double> v(n, 1.0);
        for (double p : {1.5, 2.0, 3.0, 7.0}) {
            EXPECT_NEAR(lp_norm(v, PValue(p)), std::pow(double(n), 1.0 / p), 1e-14);
        }
    }
    EXPECT_EQ(lp_norm(std::vector<double>{}, PValue(2)), 0.0);
    EXPECT_EQ(lp_norm(std::vector<double>{1e-300, 1e-300}, PValue(2)) > 0.0, true);
}

TEST(Lp, InvalidExponent) {
    EXPECT_EQ(error_code_of([] { PValue(0.5); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(error_code_of([] { PValue(std::nan("")); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(error_code_of([] { PValue(1.0).require_smooth(); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(error_code_of([] { PValue::infinity().require_smooth(); }),
              ErrorCode::InvalidArgument);
}

TEST(Lp, NormAxiomsAndMonotonicity) {
    SplitMix64 rng(17);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> u(4), v(4), w(4);
        for (std::size_t j = 0; j < 4; ++j) {
            u[j] = rng.uniform(-1, 1);
            v[j] = rng.uniform(-1, 1);
            w[j] = u[j] + v[j];
        }
        double prev = INFINITY;
        for (double p : {1.0, 1.5, 2.0, 3.0, 8.0, double(INFINITY)}) {
            const PValue P(p);
            const double nu = lp_norm(u, P);
            EXPECT_GT(nu, 0.0);
            EXPECT_LE(lp_norm(w, P), nu + lp_norm(v, P) + 1e-12);
            std::vector<double> s(u);
            for (double& x : s) x *= -2.5;
            EXPECT_NEAR(lp_norm(s, P), 2.5 * nu, 1e-12);
            EXPECT_LE(nu, prev + 1e-12);
            prev = nu;
        }
    }
}

TEST(Lp, CubeDistance) {
    const auto sq = hypercube(2);
    for (double p : {1.5, 2.0, 3.0}) {
        EXPECT_NEAR(cube_distance(sq, Point({0, 0}), Point({1, 1}), PValue(p)),
                    std::pow(2.0, 1.0 / p), 1e-15);
    }
    EXPECT_EQ(cube_distance(sq, Point({0.3, 0.7}), Point({0.3, 0.7}), PValue(2)), 0.0);
    const auto corner = corner_complex();
    EXPECT_EQ(error_code_of([&] {
                  cube_distance(corner, Point({1, 1, 0, 0}), Point({0, 0, 1, 1}), PValue(2));
              }),
              ErrorCode::NoCommonCube);
}

TEST(Lp, UnfoldedRectangle) {
    // book_of_squares(2) with pages p1 and p2 unfolds to a 2x1 rectangle.
    const auto book = book_of_squares(2);  // s p1 p2
    const double d = distance(book, Point({0, 1, 0}), Point({1, 0, 1}), PValue(2));
    EXPECT_NEAR(d, std::sqrt(5.0), 1e-9);
}

TEST(Lp, FactorComponent) {
    const auto sq = hypercube(2);
    SignVector f;
    f.set(0);
    const auto c = factor_component(sq, Point({0.2, 0.8}), Point({0.5, 0.5}), f);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0], -0.3, 1e-15);
    SignVector all;
    all.set(0);
    all.set(1);
    EXPECT_EQ(factor_component(sq, Point({0.2, 0.8}), Point({0.5, 0.5}), all).size(), 2u);
    EXPECT_TRUE(factor_component(sq, Point({0.2, 0.8}), Point({0.5, 0.5}), {}).empty());
}

TEST(Lp, PowerMap) {
    const auto X = hypercube(3);
    const SignVector v;
    const Point x({0.25, 1.0, 0.6});
    const Point same = power_map(X, x, v, PValue(2));
    for (std::size_t h = 0; h < 3; ++h) EXPECT_DOUBLE_EQ(same[h], x[h]);
    const Point four = power_map(X, x, v, PValue(4));
    EXPECT_DOUBLE_EQ(four[0], 0.0625);
    EXPECT_DOUBLE_EQ(four[1], 1.0);

    // Relative to a corner other than the origin.
    SignVector w;
    w.set(0);
    const Point r = power_map(X, Point({0.75, 0.0, 0.0}), w, PValue(4));
    EXPECT_DOUBLE_EQ(r[0], 1.0 - 0.0625);

    SplitMix64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const Point y({rng.uniform(), rng.uniform(), rng.uniform()});
        SignVector a;
        a.set(rng.below(3));
        a.set(rng.below(3));
        for (double p : {1.5, 3.0, 4.0}) {
            const Point m = power_map(X, y, v, PValue(p));
            const double lhs = std::pow(factor_norm(m, v, a, PValue(2)), 2.0);
            const double rhs = std::pow(factor_norm(y, v, a, PValue(p)), p);
            EXPECT_NEAR(lhs, rhs, 1e-12);
        }
    }
}
