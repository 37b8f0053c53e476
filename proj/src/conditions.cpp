#include <algorithm>
#include <cmath>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

bool ConditionReport::ok() const {
    return std::all_of(zero_tension_ok.begin(), zero_tension_ok.end(), [](bool b) { return b; }) &&
           std::all_of(no_shortcut_ok.begin(), no_shortcut_ok.end(), [](bool b) { return b; });
}

namespace {

std::vector<std::size_t> members(const SignVector& s, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < n; ++h) {
        if (s[h]) out.push_back(h);
    }
    return out;
}

SignVector subset(const std::vector<std::size_t>& items, std::size_t mask) {
    SignVector s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (mask >> i & 1) s.set(items[i]);
    }
    return s;
}

}  // namespace

ConditionReport check_zero_tension(const CubeComplex& X, const PiecewisePath& path, double tol) {
    (void)X;
    ConditionReport report;
    const auto& b = path.breaks();
    const auto& cubes = path.segment_cubes();
    const auto& cum = path.cumulative();
    for (std::size_t i = 1; i + 1 < b.size(); ++i) {
        const auto d = intersect(cubes[i - 1], cubes[i]);
        double residual = 0.0;
        const double d1 = cum[i] - cum[i - 1];
        const double d2 = cum[i + 1] - cum[i];
        if (d && d1 > 0.0 && d2 > 0.0) {
            double s = 0.0;
            for (std::size_t h = 0; h < b[i].size(); ++h) {
                if (!d->support[h]) continue;
                const double v = (b[i - 1][h] - b[i][h]) / d1 + (b[i + 1][h] - b[i][h]) / d2;
                s += v * v;
            }
            residual = std::sqrt(s);
        }
        report.zero_tension_ok.push_back(residual <= tol);
        report.zero_tension_residual.push_back(residual);
        report.worst_residual = std::max(report.worst_residual, residual);
    }
    return report;
}

ConditionReport check_no_shortcut(const CubeComplex& X, const PiecewisePath& path, double tol) {
    ConditionReport report;
    const auto& b = path.breaks();
    const auto& cubes = path.segment_cubes();
    const std::size_t n = X.hyperplane_count();
    const PValue p = path.p();
    for (std::size_t i = 1; i + 1 < b.size(); ++i) {
        const auto d = intersect(cubes[i - 1], cubes[i]);
        double residual = 0.0;
        if (d) {
            const auto A = members(cubes[i - 1].support & ~d->support, n);
            const auto B = members(cubes[i].support & ~d->support, n);
            if (A.size() + B.size() > 24) {
                throw Error(ErrorCode::ScaleExceeded, "too many factor bipartitions");
            }
            const SignVector all_a = subset(A, (std::size_t{1} << A.size()) - 1);
            const SignVector all_b = subset(B, (std::size_t{1} << B.size()) - 1);
            for (std::size_t ma = 1; ma < (std::size_t{1} << A.size()); ++ma) {
                const SignVector a2 = subset(A, ma);
                const SignVector a1 = all_a & ~a2;
                for (std::size_t mb = 1; mb < (std::size_t{1} << B.size()); ++mb) {
                    const SignVector b1 = subset(B, mb);
                    const SignVector b2 = all_b & ~b1;
                    if (!X.has_cube(make_cube(d->base, d->support | b1 | a2))) continue;
                    const double lhs =
                        masked_norm(b[i - 1], b[i], a1, p) * masked_norm(b[i + 1], b[i], b2, p);
                    const double rhs =
                        masked_norm(b[i - 1], b[i], a2, p) * masked_norm(b[i + 1], b[i], b1, p);
                    residual = std::max(residual, rhs - lhs);
                }
            }
        }
        report.no_shortcut_ok.push_back(residual <= tol);
        report.no_shortcut_residual.push_back(residual);
        report.worst_residual = std::max(report.worst_residual, residual);
    }
    return report;
}

ConditionReport check_local_conditions(const CubeComplex& X, const PiecewisePath& path,
                                       double tol) {
    ConditionReport report = check_zero_tension(X, path, tol);
    const ConditionReport shortcut = check_no_shortcut(X, path, tol);
    report.no_shortcut_ok = shortcut.no_shortcut_ok;
    report.no_shortcut_residual = shortcut.no_shortcut_residual;
    report.worst_residual = std::max(report.worst_residual, shortcut.worst_residual);
    return report;
}

}  // namespace cubelp
