#pragma once

#include <string>
#include <vector>

#include "cubelp/complex.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/lp.hpp"

namespace cubelp {

// C = A_1 x ... x A_k and C' = B_1 x ... x B_k with increasing ratios
// ||x - v||_{A_j} / ||y - v||_{B_j}.
struct Decomposition {
    std::vector<SignVector> A;
    std::vector<SignVector> B;
    std::vector<double> ratios;

    std::size_t k() const { return A.size(); }
    bool same_partition(const Decomposition& other) const;
};

std::vector<std::vector<std::string>> factor_labels(const CubeComplex& X,
                                                    const std::vector<SignVector>& factors);

// Extracted from the geodesic from x to y: each break point where the path
// leaves hyperplanes of C and enters hyperplanes of C' contributes a factor.
Decomposition canonical_decomposition(const CubeComplex& X, const Point& x, const SignVector& v,
                                      const Point& y, PValue p, double merge_tol = 1e-7,
                                      const SolverOptions& options = {});

double distance_formula(const Point& x, const SignVector& v, const Point& y,
                        const Decomposition& dec, PValue p);

struct WedgeProduct {
    CubeComplex complex;
    std::vector<std::size_t> hyperplanes;  // ambient indices kept
    Point x;
    Point y;
};

// Product over j of the wedge of A_j and B_j at v, with x and y embedded.
WedgeProduct wedge_product_embedding(const CubeComplex& X, const Point& x, const SignVector& v,
                                     const Point& y, const Decomposition& dec);

double amgm_combined_ratio(double a, double b, double c, double d, PValue p);
// Whether a/b < c/d implies the combined ratio stays below c/d.
bool amgm_check(double a, double b, double c, double d, PValue p);

}  // namespace cubelp
