#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubelp/complex.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/lp.hpp"
#include "cubelp/random.hpp"

namespace cubelp {

struct CheckReport {
    std::string suite;
    std::size_t samples = 0;
    std::size_t violations = 0;
    // Smallest slack seen (right side minus left side of the inequality).
    double worst_margin = 0.0;
    // JSON document of the configuration achieving worst_margin.
    std::string witness;
    std::map<std::string, double> constants;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    double tol = 1e-8;
    // 0 means available parallelism.
    std::size_t threads = 0;
    std::size_t max_attempts = 20000;
    SolverOptions solver;
};

// Default constants for p >= 2.
double default_convexity_k(PValue p);
double default_smoothness_c(PValue p);
// Exponent used by the uniform convexity suite: p for p >= 2, else 2.
double convexity_exponent(PValue p);

// Uniform point: a maximal cube chosen uniformly, then a uniform point in it.
Point sample_point(const std::vector<CubeRef>& cubes, std::size_t n, SplitMix64& rng);

// Largest distance between two vertices, which bounds all distances.
double vertex_diameter(const CubeComplex& X, PValue p, const SolverOptions& options = {});

CheckReport midpoint_convexity_suite(const CubeComplex& X, PValue p, const SuiteOptions& options);
CheckReport busemann_suite(const CubeComplex& X, PValue p, const SuiteOptions& options);
CheckReport uniform_convexity_suite(const CubeComplex& X, PValue p, std::optional<double> k,
                                    const SuiteOptions& options);
CheckReport uniform_smoothness_suite(const CubeComplex& X, PValue p, std::optional<double> C,
                                     double r, double R, const SuiteOptions& options);

double bolicity_radius(double C, double delta, double r);
// Smallest integer N with (1-k)^(1/p) < 1 - C/N.
double bolicity_threshold(double k, double C, PValue p);

CheckReport bolicity_b1_suite(const CubeComplex& X, PValue p, double delta, double r,
                              std::optional<double> C, const SuiteOptions& options);
CheckReport bolicity_b2_suite(const CubeComplex& X, PValue p, std::optional<double> k, double C,
                              const SuiteOptions& options);

// Recomputes the margin of a witness document produced by any suite.
double replay_witness(const CubeComplex& X, const std::string& witness,
                      const SolverOptions& options = {});

// Single-configuration slacks, shared by the suites and the tests.
double midpoint_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& y2,
                      PValue p, const SolverOptions& options = {});
double busemann_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& x2,
                      const Point& y2, double t, PValue p, const SolverOptions& options = {});
double uniform_convexity_slack(const CubeComplex& X, const Point& x, const Point& y,
                               const Point& z, PValue p, double k, double exponent,
                               const SolverOptions& options = {});
double uniform_smoothness_slack(const CubeComplex& X, const Point& x, const Point& y,
                                const Point& z, PValue p, double C, double r, double R,
                                const SolverOptions& options = {});
double b1_slack(const CubeComplex& X, const Point& a, const Point& a2, const Point& b,
                const Point& b2, PValue p, double delta, const SolverOptions& options = {});
double b2_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& z, PValue p,
                double N, double C, const SolverOptions& options = {});

using PathFunctional = std::function<double(const PiecewisePath&)>;

// Parses "length" or "break0[:label]" (coordinate of the first interior
// break point on the given hyperplane, default the first free one).
PathFunctional make_functional(const CubeComplex& X, const std::string& spec);

struct SweepRow {
    double p;
    double value;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<double> gaps;
    double max_gap = 0.0;
};

SweepTable p_sweep(const CubeComplex& X, const Point& x, const Point& y,
                   const PathFunctional& functional, const std::vector<double>& grid,
                   const SolverOptions& options = {});

// n points from a to b, geometrically spaced.
std::vector<double> geometric_grid(double a, double b, std::size_t n);
// "log:a:b:n", "lin:a:b:n" or a comma separated list.
std::vector<double> parse_grid(const std::string& spec);

struct SweepLimits {
    double at_one;
    double at_infinity;
};

// Linear extrapolation in p-1 from {1.01, 1.001} and in 1/p from {32, 64}.
SweepLimits sweep_limits(const CubeComplex& X, const Point& x, const Point& y,
                         const PathFunctional& functional, const SolverOptions& options = {});

struct LatticeCheck {
    double x_numeric;
    double y_numeric;
    double x_closed;
    double y_closed;
    double residual;
};

// Minimizes ((1-x)^p + y^p + 2x^p)^(1/p) + ((1-x)^p + (1-y)^p + 2x^p)^(1/p)
// on the unit square.
LatticeCheck rank4_lattice_check(PValue p);

struct AngleCheck {
    double angle;
    double threshold;
    bool passes;
};

AngleCheck decagon_angle_check(int n);

}  // namespace cubelp
