#include <algorithm>
#include <cmath>
#include <functional>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

std::string Gallery::key(std::size_t n) const {
    std::string s;
    for (const auto& c : cubes) {
        if (!s.empty()) s += '|';
        s += cube_key(c, n);
    }
    return s;
}

namespace {

// Fixed side seen last along the sequence, and whether it already flipped.
struct Discipline {
    std::vector<signed char> side;
    std::vector<char> flipped;

    bool see(std::size_t h, bool s) {
        const signed char v = s ? 1 : 0;
        if (side[h] < 0) {
            side[h] = v;
        } else if (side[h] != v) {
            if (flipped[h]) return false;
            flipped[h] = 1;
            side[h] = v;
        }
        return true;
    }

    bool see_cube(const CubeRef& c, const std::vector<std::size_t>& active) {
        for (std::size_t h : active) {
            if (!c.support[h] && !see(h, c.base[h])) return false;
        }
        return true;
    }

    bool see_point(const Point& x, const std::vector<std::size_t>& active) {
        for (std::size_t h : active) {
            if ((x[h] == 0.0 || x[h] == 1.0) && !see(h, x[h] == 1.0)) return false;
        }
        return true;
    }
};

}  // namespace

std::vector<Gallery> enumerate_galleries(const CubeComplex& X, const Point& x, const Point& y,
                                         std::size_t cap) {
    if (!X.contains(x) || !X.contains(y)) {
        throw Error(ErrorCode::InvalidArgument, "endpoint not in the complex");
    }
    if (auto c = minimal_cube_pair(X, x, y)) return {Gallery{{*c}}};

    const Point ends[2] = {x, y};
    const CubeComplex H = hull_complex(X, ends);
    const std::size_t n = X.hyperplane_count();
    const auto active = separating_hyperplanes(H.vertices(), n);
    const auto cubes = H.maximal_cubes();

    std::vector<Gallery> out;
    std::size_t visited = 0;
    const std::size_t visit_cap = cap * 50;
    std::vector<std::size_t> seq;
    std::vector<CubeRef> faces;
    std::vector<bool> used(cubes.size(), false);

    std::function<void(Discipline)> extend = [&](Discipline state) {
        if (++visited > visit_cap) {
            throw Error(ErrorCode::ScaleExceeded, "gallery search exceeded its cap");
        }
        const CubeRef& last = cubes[seq.back()];
        if (contains(last, y)) {
            if (!state.see_point(y, active)) return;
            Gallery g;
            for (std::size_t i : seq) g.cubes.push_back(cubes[i]);
            out.push_back(std::move(g));
            if (out.size() > cap) {
                throw Error(ErrorCode::ScaleExceeded, "gallery count exceeded its cap");
            }
            return;
        }
        for (std::size_t m = 0; m < cubes.size(); ++m) {
            if (used[m]) continue;
            const CubeRef& next = cubes[m];
            const auto face = intersect(last, next);
            if (!face || contains(next, x)) continue;
            // A face reused by a cube further along can be skipped over by a
            // shorter gallery, which is enumerated separately.
            bool redundant = false;
            for (const auto& f : faces) {
                if (next.contains(f)) {
                    redundant = true;
                    break;
                }
            }
            for (std::size_t j = 0; j + 1 < seq.size() && !redundant; ++j) {
                if (cubes[seq[j]].contains(*face)) redundant = true;
            }
            if (redundant) continue;
            Discipline s = state;
            if (!s.see_cube(next, active)) continue;
            used[m] = true;
            seq.push_back(m);
            faces.push_back(*face);
            extend(std::move(s));
            faces.pop_back();
            seq.pop_back();
            used[m] = false;
        }
    };

    for (std::size_t m = 0; m < cubes.size(); ++m) {
        if (!contains(cubes[m], x)) continue;
        Discipline s{std::vector<signed char>(n, -1), std::vector<char>(n, 0)};
        if (!s.see_point(x, active) || !s.see_cube(cubes[m], active)) continue;
        used[m] = true;
        seq.push_back(m);
        extend(std::move(s));
        seq.pop_back();
        used[m] = false;
    }
    return out;
}

double gallery_lower_bound(const Gallery& g, const Point& x, const Point& y, PValue p) {
    const std::size_t n = x.size();
    std::vector<double> lo = x.ambient();
    std::vector<double> hi = x.ambient();
    double total = 0.0;
    std::vector<double> gap(n);
    auto hop = [&](const std::vector<double>& nlo, const std::vector<double>& nhi) {
        for (std::size_t h = 0; h < n; ++h) {
            gap[h] = std::max({0.0, nlo[h] - hi[h], lo[h] - nhi[h]});
        }
        total += lp_norm(gap, p);
        lo = nlo;
        hi = nhi;
    };
    std::vector<double> flo(n);
    std::vector<double> fhi(n);
    for (std::size_t i = 0; i + 1 < g.cubes.size(); ++i) {
        const auto f = intersect(g.cubes[i], g.cubes[i + 1]);
        if (!f) throw Error(ErrorCode::DisjointCubes, "consecutive gallery cubes are disjoint");
        for (std::size_t h = 0; h < n; ++h) {
            flo[h] = f->support[h] ? 0.0 : (f->base[h] ? 1.0 : 0.0);
            fhi[h] = f->support[h] ? 1.0 : flo[h];
        }
        hop(flo, fhi);
    }
    hop(y.ambient(), y.ambient());
    return total;
}

}  // namespace cubelp
