#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubelp/complex.hpp"
#include "cubelp/lp.hpp"

namespace cubelp {

// Sequence of maximal cubes of a hull, consecutive ones intersecting.
struct Gallery {
    std::vector<CubeRef> cubes;

    std::string key(std::size_t n) const;
};

// Break points x_0 = x, ..., x_{k+1} = y, consecutive ones sharing a cube,
// parametrized on [0,1] at constant speed.
class PiecewisePath {
public:
    PiecewisePath(const CubeComplex& X, std::vector<Point> breaks, PValue p);

    const std::vector<Point>& breaks() const { return breaks_; }
    const std::vector<CubeRef>& segment_cubes() const { return cubes_; }
    const std::vector<double>& cumulative() const { return cumulative_; }
    PValue p() const { return p_; }
    double length() const { return cumulative_.back(); }
    double speed() const { return length(); }
    std::size_t interior_breaks() const { return breaks_.size() - 2; }

    Point evaluate(double t) const;

private:
    std::vector<Point> breaks_;
    std::vector<CubeRef> cubes_;
    std::vector<double> cumulative_;
    PValue p_;
};

Point evaluate(const PiecewisePath& path, double t);

// Removes coincident break points and breaks whose neighbours share a cube.
PiecewisePath canonical_path(const CubeComplex& X, std::vector<Point> breaks, PValue p);

// Largest ambient max-norm gap between the two paths at equal parameters.
double sup_distance(const PiecewisePath& a, const PiecewisePath& b, std::size_t samples = 256);

struct SolverOptions {
    double length_tol = 1e-9;
    // Relative length window defining the set of optimal galleries.
    double tie_tol = 1e-12;
    double uniqueness_tol = 1e-6;
    double gradient_tol = 1e-11;
    double merge_length = 1e-12;
    std::size_t max_iterations = 3000;
    std::size_t gallery_cap = 100000;
    // Random starting break points (for restart experiments).
    std::optional<std::uint64_t> init_seed;
};

struct OptimizeResult {
    std::vector<Point> raw_breaks;
    double length = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    std::size_t merges = 0;
};

std::vector<Gallery> enumerate_galleries(const CubeComplex& X, const Point& x, const Point& y,
                                         std::size_t cap = 100000);

// Admissible lower bound: chained box distances through the shared faces.
double gallery_lower_bound(const Gallery& g, const Point& x, const Point& y, PValue p);

OptimizeResult optimize_gallery(const Gallery& g, const Point& x, const Point& y, PValue p,
                                const SolverOptions& options = {});

PiecewisePath optimize_breakpoints(const CubeComplex& X, const Gallery& g, const Point& x,
                                   const Point& y, PValue p, const SolverOptions& options = {});

struct GeodesicReport {
    PiecewisePath path;
    std::size_t galleries = 0;
    std::size_t solved = 0;
    std::size_t optimal = 0;
    double max_optimal_gap = 0.0;  // sup-distance among optimal galleries
    std::string gallery;
};

GeodesicReport geodesic_report(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                               const SolverOptions& options = {});

PiecewisePath geodesic(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                       const SolverOptions& options = {});

double distance(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                const SolverOptions& options = {});

Point bicombing(const CubeComplex& X, const Point& x, const Point& y, double t, PValue p,
                const SolverOptions& options = {});

struct ConditionReport {
    std::vector<bool> zero_tension_ok;
    std::vector<bool> no_shortcut_ok;
    std::vector<double> zero_tension_residual;
    std::vector<double> no_shortcut_residual;
    double worst_residual = 0.0;

    bool ok() const;
};

ConditionReport check_zero_tension(const CubeComplex& X, const PiecewisePath& path, double tol);
ConditionReport check_no_shortcut(const CubeComplex& X, const PiecewisePath& path, double tol);
ConditionReport check_local_conditions(const CubeComplex& X, const PiecewisePath& path,
                                       double tol);

}  // namespace cubelp
