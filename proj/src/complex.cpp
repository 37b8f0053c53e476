#include "cubelp/complex.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <json.hpp>

#include "cubelp/errors.hpp"

namespace cubelp {

namespace {

std::string bits_string(const SignVector& v, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t h = 0; h < n; ++h) {
        if (v[h]) s[h] = '1';
    }
    return s;
}

struct CubeHash {
    std::size_t operator()(const CubeRef& c) const {
        std::hash<SignVector> hash;
        return hash(c.base) * 0x9e3779b97f4a7c15ULL ^ hash(c.support);
    }
};

SignVector single(std::size_t h) {
    SignVector s;
    s.set(h);
    return s;
}

}  // namespace

bool sign_less(const SignVector& a, const SignVector& b) {
    for (std::size_t h = 0; h < kMaxHyperplanes; ++h) {
        if (a[h] != b[h]) return b[h];
    }
    return false;
}

SignVector median(const SignVector& u, const SignVector& v, const SignVector& w) {
    return (u & v) | (v & w) | (u & w);
}

bool CubeRef::contains(const CubeRef& other) const {
    if ((other.support & ~support).any()) return false;
    return ((other.base ^ base) & ~support).none();
}

CubeRef make_cube(const SignVector& base, const SignVector& support) {
    return CubeRef{base & ~support, support};
}

std::optional<CubeRef> intersect(const CubeRef& a, const CubeRef& b) {
    const SignVector both_fixed = ~a.support & ~b.support;
    if (((a.base ^ b.base) & both_fixed).any()) return std::nullopt;
    const SignVector support = a.support & b.support;
    return make_cube(a.base | b.base, support);
}

CubeRef join(const CubeRef& a, const CubeRef& b) {
    const SignVector differ = (a.base ^ b.base) & ~a.support & ~b.support;
    return make_cube(a.base, a.support | b.support | differ);
}

std::string cube_key(const CubeRef& c, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t h = 0; h < n; ++h) {
        if (c.support[h]) {
            s[h] = '*';
        } else if (c.base[h]) {
            s[h] = '1';
        }
    }
    return s;
}

Point::Point(std::vector<double> ambient) : coords_(std::move(ambient)) {
    for (double& t : coords_) {
        if (!(t >= -kSnapTolerance && t <= 1.0 + kSnapTolerance)) {
            throw Error(ErrorCode::InvalidArgument, "coordinate outside [0,1]");
        }
        if (t < kSnapTolerance) t = 0.0;
        if (t > 1.0 - kSnapTolerance) t = 1.0;
    }
}

Point Point::vertex(const SignVector& v, std::size_t n) {
    std::vector<double> c(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) c[h] = v[h] ? 1.0 : 0.0;
    return Point(std::move(c));
}

Point Point::from_base(const SignVector& base, std::size_t n,
                       std::span<const std::pair<std::size_t, double>> coords) {
    std::vector<double> c(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) c[h] = base[h] ? 1.0 : 0.0;
    for (const auto& [h, t] : coords) {
        if (h >= n) throw Error(ErrorCode::InvalidArgument, "hyperplane index out of range");
        c[h] = base[h] ? 1.0 - t : t;
    }
    return Point(std::move(c));
}

SignVector Point::base() const {
    SignVector b;
    for (std::size_t h = 0; h < coords_.size(); ++h) {
        if (coords_[h] == 1.0) b.set(h);
    }
    return b;
}

SignVector Point::support() const {
    SignVector s;
    for (std::size_t h = 0; h < coords_.size(); ++h) {
        if (coords_[h] != 0.0 && coords_[h] != 1.0) s.set(h);
    }
    return s;
}

bool contains(const CubeRef& c, const Point& x) {
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (c.support[h]) continue;
        if (x[h] != (c.base[h] ? 1.0 : 0.0)) return false;
    }
    return true;
}

struct CubeComplex::Index {
    std::unordered_map<SignVector, std::size_t> vertex_index;
    std::unordered_map<std::string, std::size_t> label_index;
    mutable std::shared_mutex mutex;
    mutable std::unordered_map<CubeRef, bool, CubeHash> cube_cache;
};

void validate_vertices(std::size_t n, const std::vector<SignVector>& vertices) {
    using nlohmann::json;
    if (vertices.empty()) throw Error(ErrorCode::ParseError, "vertex set is empty");
    std::unordered_map<SignVector, std::size_t> index;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!index.emplace(vertices[i], i).second) {
            throw Error(ErrorCode::ParseError, "duplicate vertex " + std::to_string(i));
        }
    }

    // Connectivity over Hamming-distance-one edges.
    std::vector<bool> seen(vertices.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (std::size_t h = 0; h < n; ++h) {
            auto it = index.find(vertices[i] ^ single(h));
            if (it != index.end() && !seen[it->second]) {
                seen[it->second] = true;
                ++reached;
                queue.push_back(it->second);
            }
        }
    }
    if (reached != vertices.size()) {
        json component = json::array();
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (seen[i]) component.push_back(i);
        }
        throw Error(ErrorCode::Disconnected,
                    "vertex graph has more than one component",
                    json{{"component", component}}.dump());
    }

    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            for (std::size_t k = j + 1; k < vertices.size(); ++k) {
                const SignVector m = median(vertices[i], vertices[j], vertices[k]);
                if (!index.count(m)) {
                    json w{{"triple", {i, j, k}}, {"median", bits_string(m, n)}};
                    throw Error(ErrorCode::NotMedian, "vertex set is not median-closed",
                                w.dump());
                }
            }
        }
    }
}

CubeComplex::CubeComplex(std::vector<std::string> hyperplanes, std::vector<SignVector> vertices)
    : CubeComplex(std::move(hyperplanes), std::move(vertices), true) {}

CubeComplex CubeComplex::trusted(std::vector<std::string> hyperplanes,
                                 std::vector<SignVector> vertices) {
    return CubeComplex(std::move(hyperplanes), std::move(vertices), false);
}

CubeComplex::CubeComplex(std::vector<std::string> hyperplanes, std::vector<SignVector> vertices,
                         bool validate)
    : hyperplanes_(std::move(hyperplanes)),
      vertices_(std::move(vertices)),
      index_(std::make_shared<Index>()) {
    const std::size_t n = hyperplanes_.size();
    if (n > kMaxHyperplanes) {
        throw Error(ErrorCode::ScaleExceeded, "more than " + std::to_string(kMaxHyperplanes) +
                                                  " hyperplanes");
    }
    if (vertices_.size() > kMaxVertices) {
        throw Error(ErrorCode::ScaleExceeded, "more than " + std::to_string(kMaxVertices) +
                                                  " vertices");
    }
    for (std::size_t h = 0; h < n; ++h) {
        if (!index_->label_index.emplace(hyperplanes_[h], h).second) {
            throw Error(ErrorCode::ParseError, "duplicate hyperplane label " + hyperplanes_[h]);
        }
    }
    SignVector outside;
    for (std::size_t h = n; h < kMaxHyperplanes; ++h) outside.set(h);
    for (const auto& v : vertices_) {
        if ((v & outside).any()) {
            throw Error(ErrorCode::ParseError, "vertex sets a bit beyond the hyperplane list");
        }
    }
    if (validate) validate_vertices(n, vertices_);
    if (vertices_.empty()) throw Error(ErrorCode::ParseError, "vertex set is empty");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        index_->vertex_index.emplace(vertices_[i], i);
    }
}

bool CubeComplex::has_vertex(const SignVector& v) const {
    return index_->vertex_index.count(v) > 0;
}

std::optional<std::size_t> CubeComplex::vertex_index(const SignVector& v) const {
    auto it = index_->vertex_index.find(v);
    if (it == index_->vertex_index.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> CubeComplex::hyperplane_index(std::string_view label) const {
    auto it = index_->label_index.find(std::string(label));
    if (it == index_->label_index.end()) return std::nullopt;
    return it->second;
}

bool CubeComplex::has_cube(const CubeRef& c) const {
    if (c.support.none()) return has_vertex(c.base);
    {
        std::shared_lock lock(index_->mutex);
        auto it = index_->cube_cache.find(c);
        if (it != index_->cube_cache.end()) return it->second;
    }
    std::vector<std::size_t> free;
    for (std::size_t h = 0; h < hyperplanes_.size(); ++h) {
        if (c.support[h]) free.push_back(h);
    }
    bool ok = true;
    const std::size_t corners = std::size_t{1} << free.size();
    for (std::size_t mask = 0; mask < corners && ok; ++mask) {
        SignVector v = c.base;
        for (std::size_t b = 0; b < free.size(); ++b) {
            if (mask >> b & 1) v.set(free[b]);
        }
        ok = has_vertex(v);
    }
    std::unique_lock lock(index_->mutex);
    index_->cube_cache.emplace(c, ok);
    return ok;
}

bool CubeComplex::contains(const Point& x) const {
    if (x.size() != hyperplanes_.size()) return false;
    return has_cube(x.minimal_cube());
}

std::vector<CubeRef> CubeComplex::cubes() const {
    std::vector<CubeRef> out;
    const std::size_t n = hyperplanes_.size();
    std::function<void(const CubeRef&, std::size_t)> grow = [&](const CubeRef& c,
                                                                 std::size_t from) {
        out.push_back(c);
        for (std::size_t h = from; h < n; ++h) {
            if (c.base[h]) continue;
            CubeRef next{c.base, c.support | single(h)};
            if (has_cube(next)) grow(next, h + 1);
        }
    };
    for (const auto& v : vertices_) grow(CubeRef{v, SignVector{}}, 0);
    std::sort(out.begin(), out.end(), [n](const CubeRef& a, const CubeRef& b) {
        if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
        return cube_key(a, n) < cube_key(b, n);
    });
    return out;
}

std::vector<CubeRef> CubeComplex::maximal_cubes() const {
    std::vector<CubeRef> out;
    const std::size_t n = hyperplanes_.size();
    for (const auto& c : cubes()) {
        bool maximal = true;
        for (std::size_t h = 0; h < n && maximal; ++h) {
            if (c.support[h]) continue;
            if (has_cube(make_cube(c.base, c.support | single(h)))) maximal = false;
        }
        if (maximal) out.push_back(c);
    }
    return out;
}

std::size_t CubeComplex::dimension() const {
    std::size_t d = 0;
    for (const auto& c : maximal_cubes()) d = std::max(d, c.dimension());
    return d;
}

CubeComplex CubeComplex::restrict_to(std::vector<SignVector> subset) const {
    return trusted(hyperplanes_, std::move(subset));
}

std::optional<CubeRef> minimal_cube_pair(const CubeComplex& X, const Point& x, const Point& y) {
    const CubeRef c = join(x.minimal_cube(), y.minimal_cube());
    if (!X.has_cube(c)) return std::nullopt;
    return c;
}

std::vector<SignVector> hull_vertices(const CubeComplex& X, std::span<const Point> points) {
    const std::size_t n = X.hyperplane_count();
    SignVector constrained;
    SignVector value;
    for (std::size_t h = 0; h < n; ++h) {
        bool fixed = true;
        bool first = true;
        bool side = false;
        for (const auto& p : points) {
            if (p[h] != 0.0 && p[h] != 1.0) {
                fixed = false;
                break;
            }
            const bool s = p[h] == 1.0;
            if (first) {
                side = s;
                first = false;
            } else if (s != side) {
                fixed = false;
                break;
            }
        }
        if (fixed && !first) {
            constrained.set(h);
            if (side) value.set(h);
        }
    }
    std::vector<SignVector> out;
    for (const auto& v : X.vertices()) {
        if (((v ^ value) & constrained).none()) out.push_back(v);
    }
    return out;
}

CubeComplex hull_complex(const CubeComplex& X, std::span<const Point> points) {
    return X.restrict_to(hull_vertices(X, points));
}

std::vector<std::size_t> separating_hyperplanes(const std::vector<SignVector>& vertices,
                                                std::size_t n) {
    std::vector<std::size_t> out;
    if (vertices.empty()) return out;
    SignVector differ;
    for (const auto& v : vertices) differ |= v ^ vertices.front();
    for (std::size_t h = 0; h < n; ++h) {
        if (differ[h]) out.push_back(h);
    }
    return out;
}

CubeComplex project_complex(const CubeComplex& X, const std::vector<std::size_t>& keep) {
    std::vector<std::string> labels;
    for (std::size_t h : keep) labels.push_back(X.hyperplanes()[h]);
    std::vector<SignVector> verts;
    std::unordered_map<SignVector, bool> seen;
    for (const auto& v : X.vertices()) {
        SignVector w;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (v[keep[i]]) w.set(i);
        }
        if (seen.emplace(w, true).second) verts.push_back(w);
    }
    // Projection commutes with majority and maps edges to edges or vertices,
    // so the image stays median-closed and connected.
    return CubeComplex::trusted(std::move(labels), std::move(verts));
}

Point project_point(const Point& x, const std::vector<std::size_t>& keep) {
    std::vector<double> c;
    c.reserve(keep.size());
    for (std::size_t h : keep) c.push_back(x[h]);
    return Point(std::move(c));
}

CubeComplex median_hull(const CubeComplex& X, std::span<const Point> points) {
    const auto verts = hull_vertices(X, points);
    const auto keep = separating_hyperplanes(verts, X.hyperplane_count());
    return project_complex(X.restrict_to(verts), keep);
}

namespace {

Point cube_center(const CubeRef& c, std::size_t n) {
    std::vector<double> coords(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
        coords[h] = c.support[h] ? 0.5 : (c.base[h] ? 1.0 : 0.0);
    }
    return Point(std::move(coords));
}

}  // namespace

HullSplit split_hull(const CubeComplex& X, const CubeRef& c1, const CubeRef& c2) {
    const auto d = intersect(c1, c2);
    if (!d) throw Error(ErrorCode::DisjointCubes, "cubes do not intersect");
    const std::size_t n = X.hyperplane_count();
    const Point seeds[2] = {cube_center(c1, n), cube_center(c2, n)};
    const auto verts = hull_vertices(X, seeds);
    HullSplit out{*d, {}, {}, CubeComplex::trusted({}, {SignVector{}})};
    for (std::size_t h : separating_hyperplanes(verts, n)) {
        if (d->support[h]) {
            out.d_hyperplanes.push_back(h);
        } else {
            out.y_hyperplanes.push_back(h);
        }
    }
    out.factor = project_complex(X.restrict_to(verts), out.y_hyperplanes);
    return out;
}

}  // namespace cubelp
