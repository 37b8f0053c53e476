#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "cubelp/complex.hpp"
#include "cubelp/errors.hpp"
#include "cubelp/random.hpp"

namespace cubelp::testing {

// Uniform point of a uniformly chosen maximal cube, drawn independently of
// the library sampler.
inline Point random_point(const CubeComplex& X, SplitMix64& rng) {
    const auto cubes = X.maximal_cubes();
    const CubeRef& c = cubes[rng.below(cubes.size())];
    std::vector<double> a(X.hyperplane_count());
    for (std::size_t h = 0; h < a.size(); ++h) {
        a[h] = c.support[h] ? rng.uniform(0.02, 0.98) : (c.base[h] ? 1.0 : 0.0);
    }
    return Point(std::move(a));
}

inline std::size_t hamming(const SignVector& a, const SignVector& b) { return (a ^ b).count(); }

// Graph distance on the vertex set by breadth-first search.
inline std::vector<std::size_t> bfs(const std::vector<SignVector>& verts, std::size_t from) {
    std::vector<std::size_t> dist(verts.size(), SIZE_MAX);
    std::vector<std::size_t> queue{from};
    dist[from] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t a = queue[q];
        for (std::size_t b = 0; b < verts.size(); ++b) {
            if (dist[b] == SIZE_MAX && hamming(verts[a], verts[b]) == 1) {
                dist[b] = dist[a] + 1;
                queue.push_back(b);
            }
        }
    }
    return dist;
}

// Convex hull by interval closure: repeatedly add every vertex lying on a
// shortest edge path between two members until nothing changes.
inline std::set<std::size_t> interval_closure(const std::vector<SignVector>& verts,
                                              std::set<std::size_t> seed) {
    std::vector<std::vector<std::size_t>> d(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) d[i] = bfs(verts, i);
    bool changed = true;
    while (changed) {
        changed = false;
        const std::vector<std::size_t> members(seed.begin(), seed.end());
        for (std::size_t a : members) {
            for (std::size_t b : members) {
                for (std::size_t z = 0; z < verts.size(); ++z) {
                    if (!seed.count(z) && d[a][z] + d[z][b] == d[a][b]) {
                        seed.insert(z);
                        changed = true;
                    }
                }
            }
        }
    }
    return seed;
}

// Vertices of the smallest face of the ambient cube holding x.
inline std::vector<SignVector> face_vertices(const Point& x) {
    std::vector<std::size_t> free;
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (x[h] > 0.0 && x[h] < 1.0) free.push_back(h);
    }
    std::vector<SignVector> out;
    for (std::size_t m = 0; m < (std::size_t{1} << free.size()); ++m) {
        SignVector v = x.base();
        for (std::size_t i = 0; i < free.size(); ++i) {
            if (m >> i & 1) v.set(free[i]);
        }
        out.push_back(v);
    }
    return out;
}

inline ErrorCode error_code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a domain error");
}

}  // namespace cubelp::testing
