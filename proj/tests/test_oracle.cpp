#include <gtest/gtest.h>

#include <cmath>

#include "cubelp/generators.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/oracle.hpp"
#include "support.hpp"

using namespace cubelp;
using cubelp::testing::random_point;

TEST(Oracle, SingleCubeIsExact) {
    const auto sq = hypercube(2);
    EXPECT_NEAR(oracle_distance(sq, Point({0, 0}), Point({1, 1}), PValue(2), 0.1), std::sqrt(2.0),
                1e-12);
}

TEST(Oracle, UpperBoundAndAgreement) {
    SplitMix64 rng(41);
    for (const auto& nc : bundled_fixtures()) {
        for (int i = 0; i < 3; ++i) {
            const Point x = random_point(nc.complex, rng);
            const Point y = random_point(nc.complex, rng);
            for (double p : {1.5, 2.0, 3.0}) {
                const double g = distance(nc.complex, x, y, PValue(p));
                const double o = oracle_distance(nc.complex, x, y, PValue(p), 0.05);
                EXPECT_GE(o, g - 1e-9) << nc.name;
                EXPECT_LE(o, g + 0.05) << nc.name;
            }
        }
    }
}

TEST(Oracle, MonotoneRefinement) {
    SplitMix64 rng(43);
    const auto X = square_cube_book();
    for (int i = 0; i < 4; ++i) {
        const Point x = random_point(X, rng);
        const Point y = random_point(X, rng);
        double prev = INFINITY;
        for (double eps : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
            const double o = oracle_distance(X, x, y, PValue(2), eps);
            EXPECT_LE(o, prev + 1e-15);
            prev = o;
        }
    }
}

TEST(Oracle, Certification) {
    const auto X = corner_complex();
    const Point x({0.3, 0.9, 0, 0});
    const Point y({0, 0, 0.9, 0.3});
    const double g = distance(X, x, y, PValue(2));
    EXPECT_TRUE(oracle_certify(X, x, y, PValue(2), 0.02));
    EXPECT_TRUE(oracle_certify(X, x, y, PValue(2), 0.02, g));
    EXPECT_FALSE(oracle_certify(X, x, y, PValue(2), 0.02, g + 0.2));
    EXPECT_FALSE(oracle_certify(X, x, y, PValue(2), 0.02, g - 0.2));
}

TEST(Oracle, WedgeInstances) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto w = random_vertex_wedge(1000 + s);
        const double g = distance(w.complex, w.x, w.y, PValue(2));
        const double o = oracle_distance(w.complex, w.x, w.y, PValue(2), 0.02);
        EXPECT_GE(o, g - 1e-9);
        EXPECT_LE(o, g + 0.05);
    }
}
