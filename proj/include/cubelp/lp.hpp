#pragma once

#include <span>
#include <vector>

#include "cubelp/complex.hpp"

namespace cubelp {

// Exponent p in [1, inf]. Operations that need smoothness call require_smooth().
class PValue {
public:
    explicit PValue(double p);
    static PValue infinity();

    double value() const { return p_; }
    bool is_finite() const;
    bool is_smooth() const { return p_ > 1.0 && is_finite(); }
    void require_smooth() const;

private:
    double p_;
};

double lp_norm(std::span<const double> v, PValue p);

// Norm of the ambient difference restricted to the hyperplanes in `mask`.
double masked_norm(const Point& a, const Point& b, const SignVector& mask, PValue p);

// Throws NoCommonCube unless x, y lie in a common cube.
double cube_distance(const CubeComplex& X, const Point& x, const Point& y, PValue p);

// (x - z) restricted to F, in hyperplane order.
std::vector<double> factor_component(const CubeComplex& X, const Point& x, const Point& z,
                                     const SignVector& factor);

// ||x - v|| over the factor F, with v a vertex.
double factor_norm(const Point& x, const SignVector& v, const SignVector& factor, PValue p);

// Coordinates relative to v raised to p/2. x and v must share a cube.
Point power_map(const CubeComplex& X, const Point& x, const SignVector& v, PValue p);

}  // namespace cubelp
