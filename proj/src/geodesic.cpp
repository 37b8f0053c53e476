#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <json.hpp>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

GeodesicReport geodesic_report(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                               const SolverOptions& options) {
    p.require_smooth();
    if (!X.contains(x) || !X.contains(y)) {
        throw Error(ErrorCode::InvalidArgument, "endpoint not in the complex");
    }
    const std::size_t n = X.hyperplane_count();
    if (auto c = minimal_cube_pair(X, x, y)) {
        Gallery g{{*c}};
        return GeodesicReport{PiecewisePath(X, {x, y}, p), 1, 1, 1, 0.0, g.key(n)};
    }

    struct Candidate {
        double bound;
        std::string key;
        const Gallery* gallery;
    };
    const auto galleries = enumerate_galleries(X, x, y, options.gallery_cap);
    std::vector<Candidate> order;
    for (const auto& g : galleries) {
        order.push_back({gallery_lower_bound(g, x, y, p), g.key(n), &g});
    }
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.key < b.key;
    });

    struct Solved {
        double length;
        std::string key;
        PiecewisePath path;
    };
    std::vector<Solved> solved;
    double best = std::numeric_limits<double>::infinity();
    std::optional<Error> failure;
    for (const auto& c : order) {
        if (c.bound > best + options.length_tol) break;
        try {
            auto path = optimize_breakpoints(X, *c.gallery, x, y, p, options);
            const double len = path.length();
            best = std::min(best, len);
            solved.push_back({len, c.key, std::move(path)});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoConvergence) throw;
            failure = e;
        }
    }
    if (solved.empty()) {
        if (failure) throw *failure;
        throw Error(ErrorCode::NoConvergence, "no gallery could be optimized");
    }

    std::size_t winner = 0;
    for (std::size_t i = 1; i < solved.size(); ++i) {
        const auto& a = solved[i];
        const auto& b = solved[winner];
        if (a.length < b.length || (a.length == b.length && a.key < b.key)) winner = i;
    }
    GeodesicReport report{solved[winner].path, galleries.size(), solved.size(), 0, 0.0,
                          solved[winner].key};
    const double window = options.tie_tol * std::max(1.0, best);
    for (const auto& s : solved) {
        if (s.length > best + window) continue;
        ++report.optimal;
        const double gap = sup_distance(s.path, report.path);
        report.max_optimal_gap = std::max(report.max_optimal_gap, gap);
        if (gap > options.uniqueness_tol) {
            nlohmann::json w{{"galleries", {report.gallery, s.key}},
                             {"lengths", {best, s.length}},
                             {"sup_distance", gap}};
            throw Error(ErrorCode::UniquenessViolation,
                        "two optimal galleries give different paths", w.dump());
        }
    }
    return report;
}

PiecewisePath geodesic(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                       const SolverOptions& options) {
    return geodesic_report(X, x, y, p, options).path;
}

double distance(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                const SolverOptions& options) {
    return geodesic(X, x, y, p, options).length();
}

Point bicombing(const CubeComplex& X, const Point& x, const Point& y, double t, PValue p,
                const SolverOptions& options) {
    return geodesic(X, x, y, p, options).evaluate(t);
}

}  // namespace cubelp
