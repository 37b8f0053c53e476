#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/random.hpp"

namespace cubelp {

namespace {

std::vector<std::size_t> members(const SignVector& s, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < n; ++h) {
        if (s[h]) out.push_back(h);
    }
    return out;
}

// Break points x_1..x_k constrained to faces F_i = M_{i-1} ∩ M_i. Only the
// free coordinates of each face are variables; the rest are fixed bits.
class BreakProblem {
public:
    BreakProblem(const Gallery& g, const Point& x, const Point& y, PValue p)
        : n_(x.size()), p_(p.value()), x_(x.ambient()), y_(y.ambient()), cubes_(g.cubes) {
        for (std::size_t i = 0; i + 1 < cubes_.size(); ++i) {
            const auto f = intersect(cubes_[i], cubes_[i + 1]);
            if (!f) throw Error(ErrorCode::DisjointCubes, "consecutive gallery cubes are disjoint");
            faces_.push_back(*f);
        }
    }

    std::size_t breaks() const { return faces_.size(); }
    std::size_t variables() const { return offsets_.empty() ? 0 : offsets_.back(); }
    std::vector<std::vector<double>>& positions() { return pos_; }

    void initialize(const std::optional<std::uint64_t>& seed) {
        const std::size_t k = breaks();
        pos_.assign(k, std::vector<double>(n_));
        SplitMix64 rng(seed.value_or(0));
        for (std::size_t i = 0; i < k; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(k + 1);
            for (std::size_t h = 0; h < n_; ++h) {
                if (faces_[i].support[h]) {
                    const double line = std::clamp(x_[h] + t * (y_[h] - x_[h]), 0.0, 1.0);
                    pos_[i][h] = seed ? rng.uniform() : 0.25 + 0.5 * line;
                } else {
                    pos_[i][h] = faces_[i].base[h] ? 1.0 : 0.0;
                }
            }
        }
        rebuild();
    }

    void rebuild() {
        const std::size_t k = breaks();
        free_.clear();
        offsets_.assign(1, 0);
        for (std::size_t i = 0; i < k; ++i) {
            free_.push_back(members(faces_[i].support, n_));
            offsets_.push_back(offsets_.back() + free_.back().size());
        }
        seg_.clear();
        for (const auto& c : cubes_) seg_.push_back(members(c.support, n_));
    }

    const std::vector<double>& at(std::size_t s) const {
        if (s == 0) return x_;
        if (s == breaks() + 1) return y_;
        return pos_[s - 1];
    }

    double segment_length(std::size_t s) const {
        std::vector<double> u;
        for (std::size_t h : seg_[s]) u.push_back(at(s + 1)[h] - at(s)[h]);
        return lp_norm(u, PValue(p_));
    }

    // Smoothing radius: each segment contributes sqrt(N^2 + mu^2) - mu, which
    // keeps the length differentiable where a segment vanishes.
    void set_smoothing(double mu) { mu_ = mu; }

    double objective() const {
        double f = 0.0;
        for (std::size_t s = 0; s < cubes_.size(); ++s) {
            const double N = segment_length(s);
            f += mu_ > 0.0 ? std::hypot(N, mu_) - mu_ : N;
        }
        return f;
    }

    Eigen::VectorXd get() const {
        Eigen::VectorXd z(variables());
        for (std::size_t i = 0; i < breaks(); ++i) {
            for (std::size_t a = 0; a < free_[i].size(); ++a) z[offsets_[i] + a] = pos_[i][free_[i][a]];
        }
        return z;
    }

    void set(const Eigen::VectorXd& z) {
        for (std::size_t i = 0; i < breaks(); ++i) {
            for (std::size_t a = 0; a < free_[i].size(); ++a) {
                pos_[i][free_[i][a]] = std::clamp(z[offsets_[i] + a], 0.0, 1.0);
            }
        }
    }

    // Gradient and Hessian of the total length.
    // `mag` collects the size of the individual terms summed into each
    // gradient component, the scale against which cancellation is judged.
    void derivatives(Eigen::VectorXd& g, Eigen::MatrixXd& H, Eigen::VectorXd& mag) const {
        const std::size_t m = variables();
        g.setZero(m);
        H.setZero(m, m);
        mag.setZero(m);
        for (std::size_t s = 0; s < cubes_.size(); ++s) {
            const auto& coords = seg_[s];
            const std::size_t d = coords.size();
            std::vector<double> u(d);
            for (std::size_t a = 0; a < d; ++a) u[a] = at(s + 1)[coords[a]] - at(s)[coords[a]];
            const double N = lp_norm(u, PValue(p_));
            // Chain rule factors of the smoothed length in N.
            const double phi = std::hypot(N, mu_);
            const double c1 = mu_ > 0.0 ? N / phi : 1.0;
            const double c2 = mu_ > 0.0 ? mu_ * mu_ / (phi * phi * phi) : 0.0;
            // Variable index of each coordinate at the end (+) and start (-).
            std::vector<long> plus(d, -1);
            std::vector<long> minus(d, -1);
            for (std::size_t a = 0; a < d; ++a) {
                if (s + 1 <= breaks()) plus[a] = var(s, coords[a]);
                if (s >= 1) minus[a] = var(s - 1, coords[a]);
            }
            if (N == 0.0) {
                if (mu_ == 0.0) continue;
                for (std::size_t a = 0; a < d; ++a) {
                    if (plus[a] >= 0) H(plus[a], plus[a]) += 1.0 / mu_;
                    if (minus[a] >= 0) H(minus[a], minus[a]) += 1.0 / mu_;
                    if (plus[a] >= 0 && minus[a] >= 0) {
                        H(plus[a], minus[a]) -= 1.0 / mu_;
                        H(minus[a], plus[a]) -= 1.0 / mu_;
                    }
                }
                continue;
            }
            std::vector<double> gn(d);
            std::vector<double> w(d);
            for (std::size_t a = 0; a < d; ++a) {
                const double r = std::fabs(u[a]) / N;
                gn[a] = std::copysign(std::pow(r, p_ - 1.0), u[a]);
                w[a] = std::pow(std::max(r, 1e-9), p_ - 2.0);
            }
            const double scale = (p_ - 1.0) / N;
            for (std::size_t a = 0; a < d; ++a) {
                if (plus[a] >= 0) {
                    g[plus[a]] += c1 * gn[a];
                    mag[plus[a]] += std::fabs(c1 * gn[a]);
                }
                if (minus[a] >= 0) {
                    g[minus[a]] -= c1 * gn[a];
                    mag[minus[a]] += std::fabs(c1 * gn[a]);
                }
                for (std::size_t b = 0; b < d; ++b) {
                    const double hab = c1 * scale * ((a == b ? w[a] : 0.0) - gn[a] * gn[b]) +
                                       c2 * gn[a] * gn[b];
                    if (plus[a] >= 0 && plus[b] >= 0) H(plus[a], plus[b]) += hab;
                    if (minus[a] >= 0 && minus[b] >= 0) H(minus[a], minus[b]) += hab;
                    if (plus[a] >= 0 && minus[b] >= 0) H(plus[a], minus[b]) -= hab;
                    if (minus[a] >= 0 && plus[b] >= 0) H(minus[a], plus[b]) -= hab;
                }
            }
        }
    }

    // Drops a vanishing segment by fusing its end points when the gallery
    // allows it. Returns true if the problem changed.
    bool merge_short_segment(double threshold) {
        const std::size_t k = breaks();
        for (std::size_t s = 0; s <= k; ++s) {
            if (k == 0 || segment_length(s) >= threshold) continue;
            if (s == 0) {
                if (!contains(cubes_[1], Point(x_))) continue;
                erase_break(0, 0);
                return true;
            }
            if (s == k) {
                if (!contains(cubes_[k - 1], Point(y_))) continue;
                erase_break(k - 1, k);
                return true;
            }
            const auto fused = intersect(cubes_[s - 1], cubes_[s + 1]);
            if (!fused) continue;
            std::vector<double> mid(n_);
            for (std::size_t h = 0; h < n_; ++h) {
                mid[h] = fused->support[h] ? 0.5 * (pos_[s - 1][h] + pos_[s][h])
                                           : (fused->base[h] ? 1.0 : 0.0);
            }
            cubes_.erase(cubes_.begin() + static_cast<std::ptrdiff_t>(s));
            faces_.erase(faces_.begin() + static_cast<std::ptrdiff_t>(s));
            faces_[s - 1] = *fused;
            pos_.erase(pos_.begin() + static_cast<std::ptrdiff_t>(s));
            pos_[s - 1] = std::move(mid);
            rebuild();
            return true;
        }
        return false;
    }

    std::vector<Point> points() const {
        std::vector<Point> out{Point(x_)};
        for (const auto& b : pos_) out.emplace_back(b);
        out.emplace_back(y_);
        return out;
    }

private:
    long var(std::size_t i, std::size_t h) const {
        const auto& f = free_[i];
        auto it = std::lower_bound(f.begin(), f.end(), h);
        if (it == f.end() || *it != h) return -1;
        return static_cast<long>(offsets_[i] + static_cast<std::size_t>(it - f.begin()));
    }

    void erase_break(std::size_t b, std::size_t cube) {
        cubes_.erase(cubes_.begin() + static_cast<std::ptrdiff_t>(cube));
        faces_.erase(faces_.begin() + static_cast<std::ptrdiff_t>(b));
        pos_.erase(pos_.begin() + static_cast<std::ptrdiff_t>(b));
        rebuild();
    }

    std::size_t n_;
    double p_;
    double mu_ = 0.0;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<CubeRef> cubes_;
    std::vector<CubeRef> faces_;
    std::vector<std::vector<double>> pos_;
    std::vector<std::vector<std::size_t>> free_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::size_t>> seg_;
};

// Projected-gradient residual, each component relative to the terms it sums.
// At large p all terms can be tiny while the stationary point is still well
// determined, so an absolute threshold would stop far from it.
double projected_residual(const Eigen::VectorXd& z, const Eigen::VectorXd& g,
                          const Eigen::VectorXd& mag) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] <= 0.0 && g[i] > 0.0) continue;
        if (z[i] >= 1.0 && g[i] < 0.0) continue;
        if (mag[i] > 0.0) r = std::max(r, std::fabs(g[i]) / std::max(mag[i], 1e-300));
    }
    return r;
}

// One damped Newton step on the free variables followed by a projected
// Armijo search. Returns false when no representable progress is left.
bool newton_step(BreakProblem& problem, const Eigen::VectorXd& z, double f,
                 const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess, double residual,
                 double& lambda) {
    // Bounds held by an outward gradient stay fixed for this step.
    const Eigen::Index m = z.size();
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < m; ++i) {
        const bool low = z[i] <= 0.0 && grad[i] > 0.0;
        const bool high = z[i] >= 1.0 && grad[i] < 0.0;
        if (!low && !high) free.push_back(i);
    }
    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd Hf(nf, nf);
    Eigen::VectorXd gf(nf);
    // Marquardt scaling: damping proportional to each curvature, so that
    // coordinates with tiny curvature at large p still take full steps.
    Eigen::VectorXd scale(nf);
    double diag = 0.0;
    for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = grad[free[a]];
        for (Eigen::Index b = 0; b < nf; ++b) Hf(a, b) = hess(free[a], free[b]);
        diag = std::max(diag, std::fabs(Hf(a, a)));
    }
    if (diag == 0.0) diag = 1.0;
    for (Eigen::Index a = 0; a < nf; ++a) scale[a] = std::max(std::fabs(Hf(a, a)), 1e-300 * diag);
    if (lambda == 0.0) lambda = 1e-12;

    bool accepted = false;
    while (!accepted && lambda < 1e24) {
        Eigen::MatrixXd A = Hf;
        A.diagonal() += lambda * scale;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        Eigen::VectorXd df = ldlt.solve(-gf);
        if (ldlt.info() != Eigen::Success || !df.allFinite() || gf.dot(df) >= 0.0) {
            lambda *= 100.0;
            continue;
        }
        Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
        for (Eigen::Index a = 0; a < nf; ++a) d[free[a]] = df[a];
        double alpha = 1.0;
        for (int ls = 0; ls < 40 && !accepted; ++ls, alpha *= 0.5) {
            const Eigen::VectorXd trial = (z + alpha * d).cwiseMax(0.0).cwiseMin(1.0);
            const double decrease = grad.dot(trial - z);
            if (decrease >= 0.0) continue;
            problem.set(trial);
            const double ft = problem.objective();
            if (ft <= f + 1e-4 * decrease) {
                accepted = true;
            } else if (ft <= f + 4.0 * std::numeric_limits<double>::epsilon() * f) {
                // Change below the resolution of the length: accept if the
                // stationarity residual improves instead.
                Eigen::VectorXd g2;
                Eigen::VectorXd m2;
                Eigen::MatrixXd h2;
                problem.derivatives(g2, h2, m2);
                if (projected_residual(trial, g2, m2) < residual) accepted = true;
            }
        }
        if (!accepted) {
            problem.set(z);
            lambda *= 100.0;
        }
    }
    if (!accepted) return false;
    lambda = std::max(lambda * 0.1, 1e-14);
    return true;
}

}  // namespace

OptimizeResult optimize_gallery(const Gallery& g, const Point& x, const Point& y, PValue p,
                                const SolverOptions& options) {
    p.require_smooth();
    if (g.cubes.empty()) throw Error(ErrorCode::InvalidArgument, "empty gallery");
    if (!contains(g.cubes.front(), x) || !contains(g.cubes.back(), y)) {
        throw Error(ErrorCode::InvalidArgument, "gallery does not start at x and end at y");
    }
    bool capped = false;
    BreakProblem problem(g, x, y, p);
    problem.initialize(options.init_seed);

    // Projected Newton with Levenberg-Marquardt damping, first on smoothed
    // lengths so that no segment collapses early, then on the exact length.
    OptimizeResult result;
    Eigen::VectorXd grad;
    Eigen::VectorXd mag;
    Eigen::MatrixXd hess;
    for (const double mu : {1e-3, 1e-6, 0.0}) {
        problem.set_smoothing(mu);
        const bool exact = mu == 0.0;
        const double tol = exact ? options.gradient_tol : 1e-9;
        const std::size_t cap = exact ? options.max_iterations : 200;
        double lambda = 0.0;
        for (std::size_t it = 0; it < cap; ++it, ++result.iterations) {
            if (exact && problem.merge_short_segment(options.merge_length)) {
                ++result.merges;
                lambda = 0.0;
            }
            if (problem.variables() == 0) {
                result.residual = 0.0;
                break;
            }
            const Eigen::VectorXd z = problem.get();
            const double f = problem.objective();
            problem.derivatives(grad, hess, mag);
            result.residual = projected_residual(z, grad, mag);
            if (result.residual <= tol) break;
            if (!newton_step(problem, z, f, grad, hess, result.residual, lambda)) break;
            if (exact && it + 1 == options.max_iterations) capped = true;
        }
    }

    result.length = problem.objective();
    result.raw_breaks = problem.points();
    if (capped && result.residual > 1e-6) {
        throw Error(ErrorCode::NoConvergence,
                    "break point optimization hit its iteration cap, residual " +
                        std::to_string(result.residual));
    }
    return result;
}

PiecewisePath optimize_breakpoints(const CubeComplex& X, const Gallery& g, const Point& x,
                                   const Point& y, PValue p, const SolverOptions& options) {
    return canonical_path(X, optimize_gallery(g, x, y, p, options).raw_breaks, p);
}

}  // namespace cubelp
