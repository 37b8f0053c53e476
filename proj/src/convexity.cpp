#include "cubelp/convexity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cubelp/errors.hpp"

namespace cubelp {

using nlohmann::json;

double default_convexity_k(PValue p) {
    if (p.value() >= 2.0) return std::pow(2.0, -p.value());
    return (p.value() - 1.0) / 8.0;
}

double default_smoothness_c(PValue p) {
    const double q = p.value() - 1.0;
    return q * q / 4.0;
}

double convexity_exponent(PValue p) { return std::max(p.value(), 2.0); }

Point sample_point(const std::vector<CubeRef>& cubes, std::size_t n, SplitMix64& rng) {
    const CubeRef& c = cubes[rng.below(cubes.size())];
    std::vector<double> a(n);
    for (std::size_t h = 0; h < n; ++h) {
        a[h] = c.support[h] ? rng.uniform() : (c.base[h] ? 1.0 : 0.0);
    }
    return Point(std::move(a));
}

double vertex_diameter(const CubeComplex& X, PValue p, const SolverOptions& options) {
    const std::size_t n = X.hyperplane_count();
    const auto& vs = X.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            // The length metric dominates the ambient norm; skip pairs that
            // cannot beat the current maximum.
            if (static_cast<double>((vs[i] ^ vs[j]).count()) <= best) continue;
            best = std::max(best, distance(X, Point::vertex(vs[i], n), Point::vertex(vs[j], n),
                                           p, options));
        }
    }
    return best;
}

namespace {

json point_json(const Point& x) { return x.ambient(); }

Point json_point(const json& j) { return Point(j.get<std::vector<double>>()); }

struct Sample {
    double margin = std::numeric_limits<double>::infinity();
    json witness;
};

using Sampler = std::function<Sample(std::size_t index, SplitMix64& rng)>;

// Runs samples across workers. Each sample draws from its own substream and
// results are reduced in index order, so the report does not depend on the
// number of workers.
CheckReport run_suite(const std::string& name, const SuiteOptions& options,
                      const Sampler& sampler) {
    std::vector<Sample> results(options.samples);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failure_index = std::numeric_limits<std::size_t>::max();
    std::mutex guard;
    auto work = [&] {
        while (true) {
            const std::size_t i = next++;
            if (i >= options.samples) return;
            try {
                SplitMix64 rng = substream(options.seed, i);
                results[i] = sampler(i, rng);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < failure_index) {
                    failure_index = i;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };
    std::size_t threads = options.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(1, options.samples));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    CheckReport report;
    report.suite = name;
    report.samples = options.samples;
    report.worst_margin = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].margin < -options.tol) ++report.violations;
        if (results[i].margin < report.worst_margin) {
            report.worst_margin = results[i].margin;
            worst = i;
        }
    }
    if (!results.empty()) {
        json w = results[worst].witness;
        w["suite"] = name;
        w["sample"] = worst;
        w["margin"] = results[worst].margin;
        report.witness = w.dump();
    } else {
        report.worst_margin = 0.0;
    }
    return report;
}

void require_diameter(const CubeComplex& X, PValue p, double needed, const SolverOptions& o) {
    const double diam = vertex_diameter(X, p, o);
    if (diam < needed) {
        json w{{"diameter", diam}, {"required", needed}};
        throw Error(ErrorCode::InsufficientDiameter,
                    "complex too small for the requested distance scale", w.dump());
    }
}

[[noreturn]] void out_of_attempts(std::size_t index) {
    throw Error(ErrorCode::InsufficientDiameter,
                "no admissible configuration found for sample " + std::to_string(index));
}

// A point on the geodesic from a towards a random target, at distance at
// most `radius` from a, placed at a random fraction in [lo, 1] of the
// largest admissible step.
Point step_towards(const CubeComplex& X, const std::vector<CubeRef>& cubes, const Point& a,
                   double radius, double lo, PValue p, SplitMix64& rng, const SolverOptions& o) {
    const Point w = sample_point(cubes, X.hyperplane_count(), rng);
    const auto path = geodesic(X, a, w, p, o);
    if (path.length() == 0.0) return a;
    const double t = std::min(1.0, radius / path.length()) * rng.uniform(lo, 1.0);
    return path.evaluate(t);
}

}  // namespace

double midpoint_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& y2,
                      PValue p, const SolverOptions& o) {
    const Point m1 = bicombing(X, x, y, 0.5, p, o);
    const Point m2 = bicombing(X, x, y2, 0.5, p, o);
    return 0.5 * distance(X, y, y2, p, o) - distance(X, m1, m2, p, o);
}

double busemann_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& x2,
                      const Point& y2, double t, PValue p, const SolverOptions& o) {
    const Point a = bicombing(X, x, y, t, p, o);
    const Point b = bicombing(X, x2, y2, t, p, o);
    return (1.0 - t) * distance(X, x, x2, p, o) + t * distance(X, y, y2, p, o) -
           distance(X, a, b, p, o);
}

double uniform_convexity_slack(const CubeComplex& X, const Point& x, const Point& y,
                               const Point& z, PValue p, double k, double e,
                               const SolverOptions& o) {
    const Point m = bicombing(X, y, z, 0.5, p, o);
    return 0.5 * std::pow(distance(X, x, y, p, o), e) + 0.5 * std::pow(distance(X, x, z, p, o), e) -
           k * std::pow(distance(X, y, z, p, o), e) - std::pow(distance(X, x, m, p, o), e);
}

double uniform_smoothness_slack(const CubeComplex& X, const Point& x, const Point& y,
                                const Point& z, PValue p, double C, double r, double R,
                                const SolverOptions& o) {
    const Point m = bicombing(X, y, z, 0.5, p, o);
    return distance(X, x, z, p, o) - 0.5 * distance(X, y, z, p, o) + C * r * r / R -
           distance(X, x, m, p, o);
}

double b1_slack(const CubeComplex& X, const Point& a, const Point& a2, const Point& b,
                const Point& b2, PValue p, double delta, const SolverOptions& o) {
    const double excess = distance(X, a, b, p, o) + distance(X, a2, b2, p, o) -
                          distance(X, a, b2, p, o) - distance(X, a2, b, p, o);
    return delta - excess;
}

double b2_slack(const CubeComplex& X, const Point& x, const Point& y, const Point& z, PValue p,
                double N, double C, const SolverOptions& o) {
    const Point m = bicombing(X, y, z, 0.5, p, o);
    return N - C - distance(X, x, m, p, o);
}

CheckReport midpoint_convexity_suite(const CubeComplex& X, PValue p, const SuiteOptions& options) {
    p.require_smooth();
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    auto report = run_suite("midpoint", options, [&](std::size_t, SplitMix64& rng) {
        const Point x = sample_point(cubes, n, rng);
        const Point y = sample_point(cubes, n, rng);
        const Point y2 = sample_point(cubes, n, rng);
        Sample s;
        s.margin = midpoint_slack(X, x, y, y2, p, options.solver);
        s.witness = {{"p", p.value()}, {"points", {point_json(x), point_json(y), point_json(y2)}}};
        return s;
    });
    report.constants = {{"p", p.value()}};
    return report;
}

CheckReport busemann_suite(const CubeComplex& X, PValue p, const SuiteOptions& options) {
    p.require_smooth();
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    const auto& o = options.solver;
    auto report = run_suite("busemann", options, [&](std::size_t, SplitMix64& rng) {
        const Point x = sample_point(cubes, n, rng);
        const Point y = sample_point(cubes, n, rng);
        const Point x2 = sample_point(cubes, n, rng);
        const Point y2 = sample_point(cubes, n, rng);
        const auto g1 = geodesic(X, x, y, p, o);
        const auto g2 = geodesic(X, x2, y2, p, o);
        const double dx = distance(X, x, x2, p, o);
        const double dy = distance(X, y, y2, p, o);
        Sample s;
        for (int i = 1; i <= 9; ++i) {
            const double t = i / 10.0;
            const double slack = (1.0 - t) * dx + t * dy -
                                 distance(X, g1.evaluate(t), g2.evaluate(t), p, o);
            if (slack < s.margin) {
                s.margin = slack;
                s.witness = {{"p", p.value()},
                             {"t", t},
                             {"points",
                              {point_json(x), point_json(y), point_json(x2), point_json(y2)}}};
            }
        }
        return s;
    });
    report.constants = {{"p", p.value()}};
    return report;
}

CheckReport uniform_convexity_suite(const CubeComplex& X, PValue p, std::optional<double> k,
                                    const SuiteOptions& options) {
    p.require_smooth();
    const double kk = k.value_or(default_convexity_k(p));
    const double e = convexity_exponent(p);
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    auto report = run_suite("uniform_convexity", options, [&](std::size_t, SplitMix64& rng) {
        const Point x = sample_point(cubes, n, rng);
        const Point y = sample_point(cubes, n, rng);
        const Point z = sample_point(cubes, n, rng);
        Sample s;
        s.margin = uniform_convexity_slack(X, x, y, z, p, kk, e, options.solver);
        s.witness = {{"p", p.value()},
                     {"k", kk},
                     {"exponent", e},
                     {"points", {point_json(x), point_json(y), point_json(z)}}};
        return s;
    });
    report.constants = {{"p", p.value()}, {"k", kk}, {"exponent", e}};
    return report;
}

CheckReport uniform_smoothness_suite(const CubeComplex& X, PValue p, std::optional<double> C,
                                     double r, double R, const SuiteOptions& options) {
    p.require_smooth();
    if (!(r > 0.0) || R < 2.0 * r) {
        throw Error(ErrorCode::InvalidArgument, "uniform smoothness needs r > 0 and R >= 2r");
    }
    const double cc = C.value_or(default_smoothness_c(p));
    const auto& o = options.solver;
    require_diameter(X, p, R, o);
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    auto report = run_suite("uniform_smoothness", options, [&](std::size_t i, SplitMix64& rng) {
        for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
            const Point y = sample_point(cubes, n, rng);
            const Point z = sample_point(cubes, n, rng);
            if (distance(X, y, z, p, o) < R) continue;
            const Point x = step_towards(X, cubes, y, r, 0.0, p, rng, o);
            if (distance(X, x, y, p, o) > r) continue;
            Sample s;
            s.margin = uniform_smoothness_slack(X, x, y, z, p, cc, r, R, o);
            s.witness = {{"p", p.value()},
                         {"C", cc},
                         {"r", r},
                         {"R", R},
                         {"points", {point_json(x), point_json(y), point_json(z)}}};
            return s;
        }
        out_of_attempts(i);
    });
    report.constants = {{"p", p.value()}, {"C", cc}, {"r", r}, {"R", R}};
    return report;
}

double bolicity_radius(double C, double delta, double r) {
    if (!(delta > 0.0) || r < 0.0) throw Error(ErrorCode::InvalidArgument, "need delta > 0, r >= 0");
    return std::max(2.0 * C * r * r / delta, 2.0 * r);
}

double bolicity_threshold(double k, double C, PValue p) {
    if (!(k > 0.0 && k < 1.0) || !(C > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < k < 1 and C > 0");
    }
    const double bound = C / (1.0 - std::pow(1.0 - k, 1.0 / p.value()));
    return std::floor(bound) + 1.0;
}

CheckReport bolicity_b1_suite(const CubeComplex& X, PValue p, double delta, double r,
                              std::optional<double> C, const SuiteOptions& options) {
    p.require_smooth();
    const double cc = C.value_or(default_smoothness_c(p));
    const double R = bolicity_radius(cc, delta, r);
    const auto& o = options.solver;
    require_diameter(X, p, R, o);
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    auto report = run_suite("bolicity_b1", options, [&](std::size_t i, SplitMix64& rng) {
        for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
            const Point a = sample_point(cubes, n, rng);
            const Point b = sample_point(cubes, n, rng);
            if (distance(X, a, b, p, o) < R) continue;
            const Point a2 = step_towards(X, cubes, a, r, 0.0, p, rng, o);
            const Point b2 = step_towards(X, cubes, b, r, 0.0, p, rng, o);
            if (distance(X, a, a2, p, o) > r || distance(X, b, b2, p, o) > r) continue;
            if (distance(X, a2, b2, p, o) < R || distance(X, a, b2, p, o) < R ||
                distance(X, a2, b, p, o) < R) {
                continue;
            }
            Sample s;
            s.margin = b1_slack(X, a, a2, b, b2, p, delta, o);
            s.witness = {{"p", p.value()},
                         {"delta", delta},
                         {"points", {point_json(a), point_json(a2), point_json(b), point_json(b2)}}};
            return s;
        }
        out_of_attempts(i);
    });
    report.constants = {{"p", p.value()}, {"C", cc}, {"delta", delta}, {"r", r}, {"R", R}};
    return report;
}

CheckReport bolicity_b2_suite(const CubeComplex& X, PValue p, std::optional<double> k, double C,
                              const SuiteOptions& options) {
    p.require_smooth();
    const double kk = k.value_or(default_convexity_k(p));
    const double N = bolicity_threshold(kk, C, p);
    const auto& o = options.solver;
    require_diameter(X, p, N, o);
    const auto cubes = X.maximal_cubes();
    const std::size_t n = X.hyperplane_count();
    auto report = run_suite("bolicity_b2", options, [&](std::size_t i, SplitMix64& rng) {
        for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
            const Point x = sample_point(cubes, n, rng);
            const Point y = step_towards(X, cubes, x, N, 0.75, p, rng, o);
            const Point z = step_towards(X, cubes, x, N, 0.75, p, rng, o);
            if (distance(X, x, y, p, o) > N || distance(X, x, z, p, o) > N) continue;
            if (distance(X, y, z, p, o) <= N) continue;
            Sample s;
            s.margin = b2_slack(X, x, y, z, p, N, C, o);
            s.witness = {{"p", p.value()},
                         {"N", N},
                         {"C", C},
                         {"points", {point_json(x), point_json(y), point_json(z)}}};
            return s;
        }
        out_of_attempts(i);
    });
    report.constants = {{"p", p.value()}, {"k", kk}, {"C", C}, {"N", N}};
    return report;
}

double replay_witness(const CubeComplex& X, const std::string& witness,
                      const SolverOptions& o) {
    json w;
    try {
        w = json::parse(witness);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("witness: ") + e.what());
    }
    try {
        const std::string suite = w.at("suite");
        const PValue p(w.at("p").get<double>());
        std::vector<Point> pts;
        for (const auto& j : w.at("points")) pts.push_back(json_point(j));
        auto need = [&](std::size_t count) {
            if (pts.size() != count) throw Error(ErrorCode::ParseError, "witness point count");
        };
        if (suite == "midpoint") {
            need(3);
            return midpoint_slack(X, pts[0], pts[1], pts[2], p, o);
        }
        if (suite == "busemann") {
            need(4);
            return busemann_slack(X, pts[0], pts[1], pts[2], pts[3], w.at("t"), p, o);
        }
        if (suite == "uniform_convexity") {
            need(3);
            return uniform_convexity_slack(X, pts[0], pts[1], pts[2], p, w.at("k"),
                                           w.at("exponent"), o);
        }
        if (suite == "uniform_smoothness") {
            need(3);
            return uniform_smoothness_slack(X, pts[0], pts[1], pts[2], p, w.at("C"), w.at("r"),
                                            w.at("R"), o);
        }
        if (suite == "bolicity_b1") {
            need(4);
            return b1_slack(X, pts[0], pts[1], pts[2], pts[3], p, w.at("delta"), o);
        }
        if (suite == "bolicity_b2") {
            need(3);
            return b2_slack(X, pts[0], pts[1], pts[2], p, w.at("N"), w.at("C"), o);
        }
        throw Error(ErrorCode::ParseError, "unknown suite in witness: " + suite);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("witness: ") + e.what());
    }
}

PathFunctional make_functional(const CubeComplex& X, const std::string& spec) {
    if (spec == "length") return [](const PiecewisePath& path) { return path.length(); };
    if (spec.rfind("break0", 0) != 0 || (spec.size() > 6 && spec[6] != ':')) {
        throw Error(ErrorCode::InvalidArgument, "unknown functional: " + spec);
    }
    std::optional<std::size_t> label;
    if (spec.size() > 7) {
        const std::string name = spec.substr(7);
        const auto h = X.hyperplane_index(name);
        if (!h) throw Error(ErrorCode::InvalidArgument, "unknown hyperplane: " + name);
        label = *h;
    }
    return [label](const PiecewisePath& path) {
        if (path.interior_breaks() == 0) {
            throw Error(ErrorCode::InvalidArgument, "path has no interior break point");
        }
        const Point& b = path.breaks()[1];
        if (label) return b[*label];
        for (std::size_t h = 0; h < b.size(); ++h) {
            if (b[h] > 0.0 && b[h] < 1.0) return b[h];
        }
        return 0.0;
    };
}

SweepTable p_sweep(const CubeComplex& X, const Point& x, const Point& y,
                   const PathFunctional& functional, const std::vector<double>& grid,
                   const SolverOptions& options) {
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw Error(ErrorCode::InvalidArgument, "p grid must be sorted");
    }
    SweepTable table;
    for (double p : grid) {
        table.rows.push_back({p, functional(geodesic(X, x, y, PValue(p), options))});
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        table.gaps.push_back(std::fabs(table.rows[i].value - table.rows[i - 1].value));
        table.max_gap = std::max(table.max_gap, table.gaps.back());
    }
    return table;
}

std::vector<double> geometric_grid(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b >= a) || n == 0) {
        throw Error(ErrorCode::InvalidArgument, "geometric grid needs 0 < a <= b and n >= 1");
    }
    if (n == 1) return {a};
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    out.back() = b;
    return out;
}

std::vector<double> parse_grid(const std::string& spec) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) {
            throw Error(ErrorCode::InvalidArgument, "bad number in grid: " + s);
        }
        return v;
    };
    std::vector<std::string> parts;
    const char sep = spec.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
    if (sep == ':') {
        if (parts.size() != 4) throw Error(ErrorCode::InvalidArgument, "grid form is kind:a:b:n");
        const double a = number(parts[1]);
        const double b = number(parts[2]);
        const double count = number(parts[3]);
        if (count < 1 || count != std::floor(count)) {
            throw Error(ErrorCode::InvalidArgument, "grid size must be a positive integer");
        }
        const auto n = static_cast<std::size_t>(count);
        if (parts[0] == "log") return geometric_grid(a, b, n);
        if (parts[0] == "lin") {
            if (n == 1) return {a};
            std::vector<double> out;
            for (std::size_t i = 0; i < n; ++i) {
                out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
            }
            return out;
        }
        throw Error(ErrorCode::InvalidArgument, "grid kind must be log or lin");
    }
    std::vector<double> out;
    for (const auto& part : parts) out.push_back(number(part));
    std::sort(out.begin(), out.end());
    return out;
}

SweepLimits sweep_limits(const CubeComplex& X, const Point& x, const Point& y,
                         const PathFunctional& functional, const SolverOptions& options) {
    auto at = [&](double p) { return functional(geodesic(X, x, y, PValue(p), options)); };
    const double a1 = at(1.001);
    const double a2 = at(1.01);
    const double b1 = at(64.0);
    const double b2 = at(32.0);
    // Lines through (p-1, value) and (1/p, value), evaluated at 0.
    const double s1 = 0.001;
    const double s2 = 0.01;
    const double u1 = 1.0 / 64.0;
    const double u2 = 1.0 / 32.0;
    return {a1 - (a2 - a1) * s1 / (s2 - s1), b1 - (b2 - b1) * u1 / (u2 - u1)};
}

namespace {

// Root of a nondecreasing function on [0, 1], or the end where it keeps sign.
template <class F>
double monotone_root(F f) {
    double lo = 0.0;
    double hi = 1.0;
    if (f(lo) >= 0.0) return lo;
    if (f(hi) <= 0.0) return hi;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

LatticeCheck rank4_lattice_check(PValue p) {
    p.require_smooth();
    const double q = p.value();
    auto pw = [q](double t) { return std::pow(t, q - 1.0); };
    auto norm1 = [q](double x, double y) {
        return std::pow(std::pow(1 - x, q) + std::pow(y, q) + 2 * std::pow(x, q), 1.0 / q);
    };
    auto norm2 = [q](double x, double y) {
        return std::pow(std::pow(1 - x, q) + std::pow(1 - y, q) + 2 * std::pow(x, q), 1.0 / q);
    };
    // F is convex: solve dF/dy = 0 for each x, then dF/dx = 0 along that
    // curve, where the total derivative equals the partial one.
    auto best_y = [&](double x) {
        return monotone_root([&](double y) {
            return pw(y) / pw(norm1(x, y)) - pw(1 - y) / pw(norm2(x, y));
        });
    };
    auto dfdx = [&](double x) {
        const double y = best_y(x);
        const double g = -pw(1 - x) + 2 * pw(x);
        return g / pw(norm1(x, y)) + g / pw(norm2(x, y));
    };
    LatticeCheck out{};
    out.x_numeric = monotone_root(dfdx);
    out.y_numeric = best_y(out.x_numeric);
    out.x_closed = 1.0 / (1.0 + std::pow(2.0, 1.0 / (q - 1.0)));
    out.y_closed = 0.5;
    out.residual =
        std::max(std::fabs(out.x_numeric - out.x_closed), std::fabs(out.y_numeric - out.y_closed));
    return out;
}

AngleCheck decagon_angle_check(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be a positive integer");
    const double dn = n;
    const double angle = std::acos(dn / std::sqrt(dn * (dn + 1.0)));
    const double threshold = 2.0 * std::numbers::pi / 10.0;
    return {angle, threshold, angle < threshold};
}

}  // namespace cubelp
