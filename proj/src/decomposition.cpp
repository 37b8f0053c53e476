#include "cubelp/decomposition.hpp"

#include <cmath>

#include "cubelp/errors.hpp"

namespace cubelp {

namespace {

// Hyperplanes where x sits away from the vertex v.
SignVector offset_set(const Point& x, const SignVector& v) {
    SignVector s;
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (x[h] != (v[h] ? 1.0 : 0.0)) s.set(h);
    }
    return s;
}

double ratio(const Point& x, const SignVector& v, const Point& y, const SignVector& a,
             const SignVector& b, PValue p) {
    return factor_norm(x, v, a, p) / factor_norm(y, v, b, p);
}

}  // namespace

bool Decomposition::same_partition(const Decomposition& other) const {
    return A == other.A && B == other.B;
}

std::vector<std::vector<std::string>> factor_labels(const CubeComplex& X,
                                                    const std::vector<SignVector>& factors) {
    std::vector<std::vector<std::string>> out;
    for (const auto& f : factors) {
        std::vector<std::string> names;
        for (std::size_t h = 0; h < X.hyperplane_count(); ++h) {
            if (f[h]) names.push_back(X.hyperplanes()[h]);
        }
        out.push_back(std::move(names));
    }
    return out;
}

Decomposition canonical_decomposition(const CubeComplex& X, const Point& x, const SignVector& v,
                                      const Point& y, PValue p, double merge_tol,
                                      const SolverOptions& options) {
    const std::size_t n = X.hyperplane_count();
    if (!X.has_vertex(v)) throw Error(ErrorCode::InvalidArgument, "v is not a vertex");
    const Point vp = Point::vertex(v, n);
    const auto c1 = minimal_cube_pair(X, x, vp);
    const auto c2 = minimal_cube_pair(X, y, vp);
    if (!c1 || !c2) {
        throw Error(ErrorCode::PreconditionViolated, "x or y shares no cube with v");
    }
    if ((c1->support & c2->support).any()) {
        throw Error(ErrorCode::NotVertexIntersection, "the two cubes meet in more than v");
    }
    const SignVector I = offset_set(x, v);
    const SignVector J = offset_set(y, v);
    if (I.none() || J.none()) {
        throw Error(ErrorCode::PreconditionViolated, "x and y must both differ from v");
    }

    // Hyperplanes of C are grouped by the first break where the path reaches
    // v's side, those of C' by the last break still on v's side. A break may
    // drop without adding or add without dropping; its factor is then empty
    // on one side.
    const PiecewisePath path = geodesic(X, x, y, p, options);
    const auto& b = path.breaks();
    std::vector<SignVector> offsets;
    for (const auto& z : b) offsets.push_back(offset_set(z, v));
    std::vector<SignVector> drops(b.size());
    std::vector<SignVector> adds(b.size());
    for (std::size_t h = 0; h < n; ++h) {
        if (I[h]) {
            std::size_t s = 0;
            while (s < b.size() && offsets[s][h]) ++s;
            if (s == b.size()) throw Error(ErrorCode::DecompositionMismatch, "path never leaves C");
            drops[s].set(h);
        }
        if (J[h]) {
            std::size_t s = b.size();
            while (s > 0 && offsets[s - 1][h]) --s;
            if (s == 0) throw Error(ErrorCode::DecompositionMismatch, "path starts inside C'");
            adds[s - 1].set(h);
        }
    }
    Decomposition dec;
    for (std::size_t s = 0; s < b.size(); ++s) {
        if (drops[s].none() && adds[s].none()) continue;
        dec.A.push_back(drops[s]);
        dec.B.push_back(adds[s]);
    }

    // Equal ratios cannot be separated: maximality merges them.
    for (std::size_t j = 0; j < dec.k(); ++j) dec.ratios.push_back(ratio(x, v, y, dec.A[j], dec.B[j], p));
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t j = 0; j + 1 < dec.k(); ++j) {
            if (dec.ratios[j + 1] - dec.ratios[j] > merge_tol * std::max(1.0, dec.ratios[j])) {
                continue;
            }
            if (dec.ratios[j] - dec.ratios[j + 1] > merge_tol * std::max(1.0, dec.ratios[j])) {
                throw Error(ErrorCode::DecompositionMismatch, "factor ratios decrease");
            }
            dec.A[j] |= dec.A[j + 1];
            dec.B[j] |= dec.B[j + 1];
            dec.A.erase(dec.A.begin() + static_cast<std::ptrdiff_t>(j + 1));
            dec.B.erase(dec.B.begin() + static_cast<std::ptrdiff_t>(j + 1));
            dec.ratios.erase(dec.ratios.begin() + static_cast<std::ptrdiff_t>(j + 1));
            dec.ratios[j] = ratio(x, v, y, dec.A[j], dec.B[j], p);
            merged = true;
            break;
        }
    }

    // Corner cubes B_1 .. B_j x A_{j+1} .. A_k.
    for (std::size_t j = 1; j < dec.k(); ++j) {
        SignVector support;
        for (std::size_t i = 0; i < j; ++i) support |= dec.B[i];
        for (std::size_t i = j; i < dec.k(); ++i) support |= dec.A[i];
        if (!X.has_cube(make_cube(v, support))) {
            throw Error(ErrorCode::DecompositionMismatch, "corner cube missing");
        }
    }
    return dec;
}

double distance_formula(const Point& x, const SignVector& v, const Point& y,
                        const Decomposition& dec, PValue p) {
    SignVector all_a;
    SignVector all_b;
    for (std::size_t j = 0; j < dec.k(); ++j) {
        if ((all_a & dec.A[j]).any() || (all_b & dec.B[j]).any()) {
            throw Error(ErrorCode::DecompositionMismatch, "factors overlap");
        }
        all_a |= dec.A[j];
        all_b |= dec.B[j];
    }
    if (dec.A.size() != dec.B.size() || all_a != offset_set(x, v) || all_b != offset_set(y, v)) {
        throw Error(ErrorCode::DecompositionMismatch, "factors do not partition the cubes");
    }
    std::vector<double> terms;
    for (std::size_t j = 0; j < dec.k(); ++j) {
        terms.push_back(factor_norm(x, v, dec.A[j], p) + factor_norm(y, v, dec.B[j], p));
    }
    return lp_norm(terms, p);
}

WedgeProduct wedge_product_embedding(const CubeComplex& X, const Point& x, const SignVector& v,
                                     const Point& y, const Decomposition& dec) {
    const std::size_t n = X.hyperplane_count();
    std::vector<std::size_t> keep;
    SignVector all;
    for (std::size_t j = 0; j < dec.k(); ++j) all |= dec.A[j] | dec.B[j];
    for (std::size_t h = 0; h < n; ++h) {
        if (all[h]) keep.push_back(h);
    }
    auto local = [&](const SignVector& f) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (f[keep[i]]) out.push_back(i);
        }
        return out;
    };
    // Per factor: the origin, nonempty subsets of A_j, nonempty subsets of B_j.
    std::vector<SignVector> verts{SignVector{}};
    for (std::size_t j = 0; j < dec.k(); ++j) {
        std::vector<SignVector> options{SignVector{}};
        for (const auto& side : {local(dec.A[j]), local(dec.B[j])}) {
            for (std::size_t mask = 1; mask < (std::size_t{1} << side.size()); ++mask) {
                SignVector s;
                for (std::size_t i = 0; i < side.size(); ++i) {
                    if (mask >> i & 1) s.set(side[i]);
                }
                options.push_back(s);
            }
        }
        if (verts.size() * options.size() > kMaxVertices) {
            throw Error(ErrorCode::ScaleExceeded, "wedge product beyond desk scale");
        }
        std::vector<SignVector> next;
        for (const auto& a : verts) {
            for (const auto& o : options) next.push_back(a | o);
        }
        verts = std::move(next);
    }
    std::vector<std::string> names;
    for (std::size_t h : keep) names.push_back(X.hyperplanes()[h]);
    auto embed = [&](const Point& z) {
        std::vector<double> c;
        for (std::size_t h : keep) c.push_back(std::fabs(z[h] - (v[h] ? 1.0 : 0.0)));
        return Point(std::move(c));
    };
    return WedgeProduct{CubeComplex::trusted(std::move(names), std::move(verts)), keep, embed(x),
                        embed(y)};
}

double amgm_combined_ratio(double a, double b, double c, double d, PValue p) {
    const double q = p.value();
    return std::pow(std::pow(a, q) + std::pow(c, q), 1.0 / q) /
           std::pow(std::pow(b, q) + std::pow(d, q), 1.0 / q);
}

bool amgm_check(double a, double b, double c, double d, PValue p) {
    if (!(a > 0 && b > 0 && c > 0 && d > 0)) {
        throw Error(ErrorCode::InvalidArgument, "amgm_check needs positive inputs");
    }
    if (!(a / b < c / d)) return true;
    return amgm_combined_ratio(a, b, c, d, p) < c / d;
}

}  // namespace cubelp
