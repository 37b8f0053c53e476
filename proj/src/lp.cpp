#include "cubelp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubelp/errors.hpp"

namespace cubelp {

PValue::PValue(double p) : p_(p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be at least 1");
}

PValue PValue::infinity() { return PValue(std::numeric_limits<double>::infinity()); }

bool PValue::is_finite() const { return std::isfinite(p_); }

void PValue::require_smooth() const {
    if (!is_smooth()) throw Error(ErrorCode::InvalidArgument, "p must lie in (1, inf)");
}

double lp_norm(std::span<const double> v, PValue p) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0.0 || !p.is_finite()) return m;
    const double q = p.value();
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x) / m, q);
    return m * std::pow(s, 1.0 / q);
}

double masked_norm(const Point& a, const Point& b, const SignVector& mask, PValue p) {
    std::vector<double> d;
    for (std::size_t h = 0; h < a.size(); ++h) {
        if (mask[h]) d.push_back(a[h] - b[h]);
    }
    return lp_norm(d, p);
}

double cube_distance(const CubeComplex& X, const Point& x, const Point& y, PValue p) {
    const auto c = minimal_cube_pair(X, x, y);
    if (!c) throw Error(ErrorCode::NoCommonCube, "points share no cube");
    return masked_norm(x, y, c->support, p);
}

std::vector<double> factor_component(const CubeComplex& X, const Point& x, const Point& z,
                                     const SignVector& factor) {
    const auto c = minimal_cube_pair(X, x, z);
    if (!c) throw Error(ErrorCode::NoCommonCube, "points share no cube");
    std::vector<double> out;
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (factor[h]) out.push_back(x[h] - z[h]);
    }
    return out;
}

double factor_norm(const Point& x, const SignVector& v, const SignVector& factor, PValue p) {
    std::vector<double> d;
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (factor[h]) d.push_back(x[h] - (v[h] ? 1.0 : 0.0));
    }
    return lp_norm(d, p);
}

Point power_map(const CubeComplex& X, const Point& x, const SignVector& v, PValue p) {
    const Point vp = Point::vertex(v, x.size());
    if (!minimal_cube_pair(X, x, vp)) {
        throw Error(ErrorCode::NoCommonCube, "v is not a vertex of a cube containing x");
    }
    const double e = p.value() / 2.0;
    std::vector<double> c = x.ambient();
    for (std::size_t h = 0; h < c.size(); ++h) {
        const double t = v[h] ? 1.0 - c[h] : c[h];
        const double s = std::pow(t, e);
        c[h] = v[h] ? 1.0 - s : s;
    }
    return Point(std::move(c));
}

}  // namespace cubelp
