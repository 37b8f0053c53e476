#pragma once

#include <cstddef>
#include <optional>

#include "cubelp/complex.hpp"
#include "cubelp/lp.hpp"

namespace cubelp {

struct OracleOptions {
    std::size_t max_nodes = 200000;
    // Error constant c in the bound max(1, breaks) * c * eps.
    double calibration = 1.0;
    // Nodes within refine_band * step of the optimum seed the next level.
    double refine_band = 0.25;
};

struct OracleResult {
    double distance = 0.0;
    std::size_t nodes = 0;
    std::size_t levels = 0;
};

// Shortest path through dyadic nets on the faces shared by maximal cubes of
// the hull. Any net path is a path of the complex, so this bounds the true
// distance from above. Each level keeps the best path of the previous one,
// so halving eps never increases the result.
OracleResult oracle_search(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                           double eps, const OracleOptions& options = {});

double oracle_distance(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                       double eps, const OracleOptions& options = {});

// Compares the oracle with a solver length (the geodesic when absent).
bool oracle_certify(const CubeComplex& X, const Point& x, const Point& y, PValue p, double eps,
                    std::optional<double> claimed_length = std::nullopt,
                    const OracleOptions& options = {});

}  // namespace cubelp
