#include "cubelp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
        return h;
    }
};

struct Face {
    CubeRef cube;
    std::vector<std::size_t> free;
};

class Net {
public:
    Net(const std::vector<CubeRef>& cubes, std::size_t n, double p, std::int64_t denom)
        : cubes_(cubes), n_(n), p_(p), denom_(denom), cube_nodes_(cubes.size()),
          coords_(cubes.size()) {
        for (const auto& c : cubes_) {
            std::vector<std::size_t> s;
            for (std::size_t h = 0; h < n_; ++h) {
                if (c.support[h]) s.push_back(h);
            }
            supports_.push_back(std::move(s));
        }
    }

    std::size_t add(const std::vector<double>& ambient, const Key* key) {
        if (key) {
            auto it = index_.find(*key);
            if (it != index_.end()) return it->second;
        }
        const std::size_t id = points_.size();
        points_.push_back(ambient);
        node_cubes_.emplace_back();
        const Point pt(ambient);
        for (std::size_t c = 0; c < cubes_.size(); ++c) {
            if (!contains(cubes_[c], pt)) continue;
            node_cubes_[id].push_back({c, cube_nodes_[c].size()});
            cube_nodes_[c].push_back(id);
            for (std::size_t h : supports_[c]) coords_[c].push_back(ambient[h]);
        }
        if (key) index_.emplace(*key, id);
        return id;
    }

    std::size_t add_key(const Key& key) {
        std::vector<double> a(n_);
        for (std::size_t h = 0; h < n_; ++h) {
            a[h] = static_cast<double>(key[h]) / static_cast<double>(denom_);
        }
        return add(a, &key);
    }

    std::size_t size() const { return points_.size(); }

    Key key_of(std::size_t i) const {
        Key k(n_);
        for (std::size_t h = 0; h < n_; ++h) {
            k[h] = std::llround(points_[i][h] * static_cast<double>(denom_));
        }
        return k;
    }

    std::vector<double> dijkstra(std::size_t source) const {
        std::vector<double> dist(size(), std::numeric_limits<double>::infinity());
        std::vector<char> done(size(), 0);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[source] = 0.0;
        queue.push({0.0, source});
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (const auto& [c, slot] : node_cubes_[u]) {
                const std::size_t dim = supports_[c].size();
                const double* base = coords_[c].data();
                const double* a = base + slot * dim;
                const auto& nodes = cube_nodes_[c];
                for (std::size_t j = 0; j < nodes.size(); ++j) {
                    const std::size_t w = nodes[j];
                    if (done[w]) continue;
                    const double nd = d + norm(a, base + j * dim, dim);
                    if (nd < dist[w]) {
                        dist[w] = nd;
                        queue.push({nd, w});
                    }
                }
            }
        }
        return dist;
    }

private:
    double norm(const double* a, const double* b, std::size_t dim) const {
        double t = 0.0;
        if (p_ == 2.0) {
            for (std::size_t h = 0; h < dim; ++h) t += (a[h] - b[h]) * (a[h] - b[h]);
            return std::sqrt(t);
        }
        if (p_ == 3.0) {
            for (std::size_t h = 0; h < dim; ++h) {
                const double d = std::fabs(a[h] - b[h]);
                t += d * d * d;
            }
            return std::cbrt(t);
        }
        if (p_ == 1.5) {
            for (std::size_t h = 0; h < dim; ++h) {
                const double d = std::fabs(a[h] - b[h]);
                t += d * std::sqrt(d);
            }
            return std::cbrt(t * t);
        }
        for (std::size_t h = 0; h < dim; ++h) t += std::pow(std::fabs(a[h] - b[h]), p_);
        return std::pow(t, 1.0 / p_);
    }

    std::vector<CubeRef> cubes_;
    std::vector<std::vector<std::size_t>> supports_;
    std::size_t n_;
    double p_;
    std::int64_t denom_;
    std::vector<std::vector<double>> points_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> node_cubes_;
    std::vector<std::vector<std::size_t>> cube_nodes_;
    std::vector<std::vector<double>> coords_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
};

// Grid points of `face` at spacing `step` (in units of 1/denom) within
// `radius` steps of `center`, or the whole face when center is null.
void add_grid(Net& net, const Face& face, std::size_t n, std::int64_t denom, std::int64_t step,
              const Key* center, std::int64_t radius) {
    Key k(n);
    for (std::size_t h = 0; h < n; ++h) k[h] = face.cube.base[h] ? denom : 0;
    std::vector<std::int64_t> lo(face.free.size());
    std::vector<std::int64_t> hi(face.free.size());
    for (std::size_t a = 0; a < face.free.size(); ++a) {
        if (center) {
            const std::int64_t c = (*center)[face.free[a]];
            lo[a] = std::max<std::int64_t>(0, c - radius * step);
            hi[a] = std::min<std::int64_t>(denom, c + radius * step);
            lo[a] = (lo[a] + step - 1) / step * step;
        } else {
            lo[a] = 0;
            hi[a] = denom;
        }
    }
    std::vector<std::int64_t> cur = lo;
    if (face.free.empty()) {
        net.add_key(k);
        return;
    }
    while (true) {
        for (std::size_t a = 0; a < face.free.size(); ++a) k[face.free[a]] = cur[a];
        net.add_key(k);
        std::size_t a = 0;
        while (a < cur.size()) {
            cur[a] += step;
            if (cur[a] <= hi[a]) break;
            cur[a] = lo[a];
            ++a;
        }
        if (a == cur.size()) break;
    }
}

bool key_in(const CubeRef& c, const Key& k, std::int64_t denom) {
    for (std::size_t h = 0; h < k.size(); ++h) {
        if (c.support[h]) continue;
        if (k[h] != (c.base[h] ? denom : 0)) return false;
    }
    return true;
}

}  // namespace

OracleResult oracle_search(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                           double eps, const OracleOptions& options) {
    p.require_smooth();
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (!X.contains(x) || !X.contains(y)) {
        throw Error(ErrorCode::InvalidArgument, "endpoint not in the complex");
    }
    if (minimal_cube_pair(X, x, y)) return {cube_distance(X, x, y, p), 2, 0};

    const std::size_t n = X.hyperplane_count();
    const Point ends[2] = {x, y};
    const auto cubes = hull_complex(X, ends).maximal_cubes();

    std::vector<Face> faces;
    std::size_t max_dim = 0;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        for (std::size_t j = i + 1; j < cubes.size(); ++j) {
            const auto f = intersect(cubes[i], cubes[j]);
            if (!f) continue;
            if (std::any_of(faces.begin(), faces.end(),
                            [&](const Face& g) { return g.cube == *f; })) {
                continue;
            }
            Face face{*f, {}};
            for (std::size_t h = 0; h < n; ++h) {
                if (f->support[h]) face.free.push_back(h);
            }
            max_dim = std::max(max_dim, face.free.size());
            faces.push_back(std::move(face));
        }
    }

    int finest = 0;
    while (std::ldexp(1.0, -finest) > eps) ++finest;
    if (finest > 20) throw Error(ErrorCode::ScaleExceeded, "eps too small");
    const std::int64_t denom = std::int64_t{1} << finest;
    int level = std::min(finest, 3);
    auto full_size = [&](int l) {
        double total = 0.0;
        for (const auto& f : faces) total += std::pow(std::ldexp(1.0, l) + 1.0, f.free.size());
        return total;
    };
    while (level > 0 && full_size(level) > static_cast<double>(options.max_nodes) / 4) --level;

    // Each level is a fresh net: the endpoints, the seeds carried over from
    // the previous level (which include its best path, so refinement never
    // increases the result) and grid windows around those seeds.
    std::vector<Key> centers;
    OracleResult result;
    while (true) {
        Net net(cubes, n, p.value(), denom);
        const std::size_t sx = net.add(x.ambient(), nullptr);
        const std::size_t sy = net.add(y.ambient(), nullptr);
        if (result.levels == 0) {
            for (const auto& f : faces) add_grid(net, f, n, denom, denom >> level, nullptr, 0);
        } else {
            const std::int64_t step = denom >> level;
            for (const auto& c : centers) net.add_key(c);
            for (const auto& c : centers) {
                for (const auto& f : faces) {
                    if (key_in(f.cube, c, denom)) add_grid(net, f, n, denom, step, &c, 3);
                }
            }
        }
        if (net.size() > options.max_nodes) {
            throw Error(ErrorCode::ScaleExceeded, "oracle net exceeds its node budget");
        }
        ++result.levels;
        const auto dx = net.dijkstra(sx);
        result.distance = dx[sy];
        result.nodes = net.size();
        if (level >= finest) break;

        // Seeds are nodes whose best path through them is within a fraction
        // of a grid step of the current optimum.
        const auto dy = net.dijkstra(sy);
        const double h = std::ldexp(1.0, -level);
        const double cutoff = result.distance + options.refine_band * h;
        centers.clear();
        for (std::size_t u = 2; u < net.size(); ++u) {
            if (dx[u] + dy[u] <= cutoff) centers.push_back(net.key_of(u));
        }
        ++level;
    }
    return result;
}

double oracle_distance(const CubeComplex& X, const Point& x, const Point& y, PValue p,
                       double eps, const OracleOptions& options) {
    return oracle_search(X, x, y, p, eps, options).distance;
}

bool oracle_certify(const CubeComplex& X, const Point& x, const Point& y, PValue p, double eps,
                    std::optional<double> claimed_length, const OracleOptions& options) {
    try {
        std::size_t breaks = 0;
        double solver = 0.0;
        if (claimed_length) {
            solver = *claimed_length;
            breaks = geodesic(X, x, y, p).interior_breaks();
        } else {
            const auto path = geodesic(X, x, y, p);
            solver = path.length();
            breaks = path.interior_breaks();
        }
        const double oracle = oracle_distance(X, x, y, p, eps, options);
        const double bound =
            static_cast<double>(std::max<std::size_t>(1, breaks)) * options.calibration * eps;
        return oracle >= solver - 1e-9 && std::fabs(oracle - solver) <= bound;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace cubelp
