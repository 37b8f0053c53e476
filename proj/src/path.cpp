#include <algorithm>
#include <cmath>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

PiecewisePath::PiecewisePath(const CubeComplex& X, std::vector<Point> breaks, PValue p)
    : breaks_(std::move(breaks)), p_(p) {
    if (breaks_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "a path needs at least two break points");
    }
    cumulative_.push_back(0.0);
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        const auto c = minimal_cube_pair(X, breaks_[i], breaks_[i + 1]);
        if (!c) {
            throw Error(ErrorCode::NoCommonCube,
                        "break points " + std::to_string(i) + " and " + std::to_string(i + 1) +
                            " share no cube");
        }
        cubes_.push_back(*c);
        cumulative_.push_back(cumulative_.back() +
                              masked_norm(breaks_[i], breaks_[i + 1], c->support, p));
    }
}

Point PiecewisePath::evaluate(double t) const {
    if (t <= 0.0 || length() == 0.0) return breaks_.front();
    if (t >= 1.0) return breaks_.back();
    const double s = t * length();
    std::size_t i = 0;
    while (i + 2 < cumulative_.size() && cumulative_[i + 1] < s) ++i;
    const double seg = cumulative_[i + 1] - cumulative_[i];
    const double lambda = seg > 0.0 ? std::clamp((s - cumulative_[i]) / seg, 0.0, 1.0) : 0.0;
    const auto& a = breaks_[i].ambient();
    const auto& b = breaks_[i + 1].ambient();
    std::vector<double> c(a.size());
    for (std::size_t h = 0; h < a.size(); ++h) c[h] = a[h] + lambda * (b[h] - a[h]);
    return Point(std::move(c));
}

Point evaluate(const PiecewisePath& path, double t) { return path.evaluate(t); }

namespace {

double max_gap(const Point& a, const Point& b) {
    double m = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) m = std::max(m, std::fabs(a[h] - b[h]));
    return m;
}

}  // namespace

PiecewisePath canonical_path(const CubeComplex& X, std::vector<Point> breaks, PValue p) {
    std::vector<Point> kept;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        const bool last = i + 1 == breaks.size();
        if (!kept.empty() && max_gap(kept.back(), breaks[i]) < kSnapTolerance) {
            if (!last) continue;
            if (kept.size() > 1) kept.pop_back();
        }
        kept.push_back(breaks[i]);
    }
    if (kept.size() == 1) kept.push_back(breaks.back());

    // Neighbours in a common cube: the straight segment is no longer.
    std::size_t i = 1;
    while (i + 1 < kept.size()) {
        if (minimal_cube_pair(X, kept[i - 1], kept[i + 1])) {
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
            if (i > 1) --i;
        } else {
            ++i;
        }
    }
    return PiecewisePath(X, std::move(kept), p);
}

double sup_distance(const PiecewisePath& a, const PiecewisePath& b, std::size_t samples) {
    std::vector<double> ts;
    for (std::size_t i = 0; i <= samples; ++i) ts.push_back(static_cast<double>(i) / samples);
    for (const PiecewisePath* path : {&a, &b}) {
        if (path->length() == 0.0) continue;
        for (double c : path->cumulative()) ts.push_back(c / path->length());
    }
    double m = 0.0;
    for (double t : ts) m = std::max(m, max_gap(a.evaluate(t), b.evaluate(t)));
    return m;
}

}  // namespace cubelp
