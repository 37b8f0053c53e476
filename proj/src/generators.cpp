#include "cubelp/generators.hpp"

#include <algorithm>
#include <deque>

#include "cubelp/errors.hpp"
#include "cubelp/random.hpp"

namespace cubelp {

namespace {

std::vector<std::string> labels(const std::string& prefix, std::size_t count,
                                std::size_t first = 1) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(first + i));
    return out;
}

SignVector bits(std::initializer_list<std::size_t> set) {
    SignVector s;
    for (std::size_t h : set) s.set(h);
    return s;
}

}  // namespace

CubeComplex hypercube(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "hypercube dimension must be positive");
    if (n > 13) throw Error(ErrorCode::ScaleExceeded, "hypercube beyond desk scale");
    std::vector<SignVector> verts;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        verts.emplace_back(mask);
    }
    return CubeComplex::trusted(labels("h", n), std::move(verts));
}

CubeComplex tree(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const std::size_t m = edges.size() + 1;
    if (edges.size() > kMaxHyperplanes) {
        throw Error(ErrorCode::ScaleExceeded, "tree has too many edges");
    }
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(m);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges[e];
        if (a >= m || b >= m || a == b) {
            throw Error(ErrorCode::InvalidArgument, "edge list is not a tree");
        }
        adj[a].push_back({b, e});
        adj[b].push_back({a, e});
    }
    // Sign vector of a node = edges on its path from node 0.
    std::vector<SignVector> verts(m);
    std::vector<bool> seen(m, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for (const auto& [b, e] : adj[a]) {
            if (seen[b]) continue;
            seen[b] = true;
            ++reached;
            verts[b] = verts[a];
            verts[b].set(e);
            queue.push_back(b);
        }
    }
    if (reached != m) throw Error(ErrorCode::InvalidArgument, "edge list is not a tree");
    return CubeComplex::trusted(labels("e", edges.size(), 0), std::move(verts));
}

CubeComplex book_of_squares(std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "book needs at least one page");
    if (k + 1 > kMaxHyperplanes) throw Error(ErrorCode::ScaleExceeded, "too many pages");
    std::vector<std::string> names{"s"};
    for (const auto& l : labels("p", k)) names.push_back(l);
    std::vector<SignVector> verts;
    for (std::size_t spine = 0; spine < 2; ++spine) {
        for (std::size_t page = 0; page <= k; ++page) {
            SignVector v;
            if (spine) v.set(0);
            if (page > 0) v.set(page);
            verts.push_back(v);
        }
    }
    return CubeComplex::trusted(std::move(names), std::move(verts));
}

CubeComplex corner_complex() {
    // a1 a2 b1 b2
    std::vector<SignVector> verts{
        bits({}),     bits({0}),    bits({1}),    bits({0, 1}),
        bits({2}),    bits({3}),    bits({2, 3}), bits({1, 2}),
    };
    return CubeComplex::trusted({"a1", "a2", "b1", "b2"}, std::move(verts));
}

CubeComplex square_cube_book() {
    // d a b c
    std::vector<SignVector> verts;
    for (std::size_t d = 0; d < 2; ++d) {
        for (SignVector page : {bits({}), bits({1}), bits({2}), bits({3}), bits({2, 3})}) {
            if (d) page.set(0);
            verts.push_back(page);
        }
    }
    return CubeComplex::trusted({"d", "a", "b", "c"}, std::move(verts));
}

CubeComplex grid(std::size_t n1, std::size_t n2, std::size_t n3) {
    if (n1 == 0 || n2 == 0 || n3 == 0) {
        throw Error(ErrorCode::InvalidArgument, "grid sides must be positive");
    }
    if (n1 + n2 + n3 > kMaxHyperplanes || (n1 + 1) * (n2 + 1) * (n3 + 1) > kMaxVertices) {
        throw Error(ErrorCode::ScaleExceeded, "grid beyond desk scale");
    }
    std::vector<std::string> names = labels("x", n1);
    for (const auto& l : labels("y", n2)) names.push_back(l);
    for (const auto& l : labels("z", n3)) names.push_back(l);
    // Threshold encoding: coordinate i along an axis sets its first i hyperplanes.
    std::vector<SignVector> verts;
    for (std::size_t i = 0; i <= n1; ++i) {
        for (std::size_t j = 0; j <= n2; ++j) {
            for (std::size_t k = 0; k <= n3; ++k) {
                SignVector v;
                for (std::size_t a = 0; a < i; ++a) v.set(a);
                for (std::size_t b = 0; b < j; ++b) v.set(n1 + b);
                for (std::size_t c = 0; c < k; ++c) v.set(n1 + n2 + c);
                verts.push_back(v);
            }
        }
    }
    return CubeComplex::trusted(std::move(names), std::move(verts));
}

CubeComplex long_rectangle() { return grid(12, 1, 1); }

WedgeInstance random_vertex_wedge(std::uint64_t seed, const WedgeLimits& limits) {
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const std::size_t a = 1 + rng.below(limits.max_side);
        const std::size_t b = 1 + rng.below(limits.max_side);
        const std::size_t n = a + b;
        // compatible[i][j]: hyperplane i of C may span a cube with j of C'.
        std::vector<std::vector<bool>> compatible(a, std::vector<bool>(b));
        for (auto& row : compatible) {
            for (std::size_t j = 0; j < b; ++j) row[j] = rng.uniform() < 0.5;
        }
        std::vector<SignVector> verts;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            bool ok = true;
            for (std::size_t i = 0; i < a && ok; ++i) {
                if (!(mask >> i & 1)) continue;
                for (std::size_t j = 0; j < b && ok; ++j) {
                    if ((mask >> (a + j) & 1) && !compatible[i][j]) ok = false;
                }
            }
            if (ok) verts.emplace_back(mask);
        }
        if (verts.size() > limits.max_vertices) continue;
        std::vector<std::string> names = labels("i", a);
        for (const auto& l : labels("j", b)) names.push_back(l);
        CubeComplex X = CubeComplex::trusted(std::move(names), std::move(verts));
        if (X.dimension() > limits.max_dimension) continue;

        std::vector<double> xc(n, 0.0);
        std::vector<double> yc(n, 0.0);
        for (std::size_t i = 0; i < a; ++i) xc[i] = rng.uniform(0.05, 0.95);
        for (std::size_t j = 0; j < b; ++j) yc[a + j] = rng.uniform(0.05, 0.95);
        return WedgeInstance{std::move(X), SignVector{}, Point(std::move(xc)),
                             Point(std::move(yc))};
    }
    throw Error(ErrorCode::ScaleExceeded, "no wedge instance within limits");
}

std::vector<NamedComplex> bundled_fixtures() {
    return {
        {"square", hypercube(2)},
        {"hypercube3", hypercube(3)},
        {"book2", book_of_squares(2)},
        {"corner", corner_complex()},
        {"square_cube_book", square_cube_book()},
        {"grid222", grid(2, 2, 2)},
        {"long_rectangle", long_rectangle()},
    };
}

}  // namespace cubelp
