#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubelp/complex.hpp"
#include "cubelp/convexity.hpp"
#include "cubelp/decomposition.hpp"
#include "cubelp/errors.hpp"
#include "cubelp/generators.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/io.hpp"
#include "cubelp/oracle.hpp"

using namespace cubelp;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

PValue parse_p(const std::string& s, bool allow_inf) {
    if (s == "inf") {
        if (!allow_inf) throw UsageError("--p inf is not accepted by this command");
        return PValue::infinity();
    }
    double v = 0.0;
    std::size_t used = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !(v > 1.0) || !std::isfinite(v)) {
        throw UsageError("--p must be a real number greater than 1");
    }
    return PValue(v);
}

CubeComplex load(const std::string& source) {
    const std::string prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) {
        const std::string name = source.substr(prefix.size());
        for (auto& f : bundled_fixtures()) {
            if (f.name == name) return std::move(f.complex);
        }
        throw UsageError("unknown builtin complex: " + name);
    }
    return load_complex_file(source);
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

struct Common {
    std::string complex;
    std::string p = "";
    std::string from;
    std::string to;
    bool as_json = false;
};

void add_complex(CLI::App* cmd, Common& c) {
    cmd->add_option("complex", c.complex, "complex file, or builtin:NAME")->required();
}

void add_endpoints(CLI::App* cmd, Common& c) {
    cmd->add_option("--from", c.from, "start point literal, e.g. 0:h1=0.25")->required();
    cmd->add_option("--to", c.to, "end point literal")->required();
}

void add_p(CLI::App* cmd, Common& c) {
    cmd->add_option("--p", c.p, "exponent p > 1")->required();
}

int run_validate(const Common& c) {
    const CubeComplex X = load(c.complex);
    const auto maximal = X.maximal_cubes();
    if (c.as_json) {
        emit({{"valid", true},
              {"hyperplanes", X.hyperplane_count()},
              {"vertices", X.vertex_count()},
              {"dimension", X.dimension()},
              {"maximal_cubes", maximal.size()}});
    } else {
        std::cout << "valid: " << X.hyperplane_count() << " hyperplanes, " << X.vertex_count()
                  << " vertices, dimension " << X.dimension() << ", " << maximal.size()
                  << " maximal cubes\n";
    }
    return 0;
}

int run_distance(const Common& c) {
    const CubeComplex X = load(c.complex);
    const PValue p = parse_p(c.p, true);
    const Point x = parse_point(X, c.from);
    const Point y = parse_point(X, c.to);
    double d = 0.0;
    if (!p.is_finite() && minimal_cube_pair(X, x, y)) {
        d = cube_distance(X, x, y, p);
    } else {
        d = distance(X, x, y, p);
    }
    if (c.as_json) {
        emit({{"distance", d}, {"p", c.p}});
    } else {
        std::cout << fmt(d) << "\n";
    }
    return 0;
}

int run_geodesic(const Common& c) {
    const CubeComplex X = load(c.complex);
    const PValue p = parse_p(c.p, false);
    const Point x = parse_point(X, c.from);
    const Point y = parse_point(X, c.to);
    const auto report = geodesic_report(X, x, y, p);
    if (c.as_json) {
        json doc = path_json(X, report.path);
        doc["galleries"] = report.galleries;
        doc["galleries_solved"] = report.solved;
        doc["optimal_galleries"] = report.optimal;
        doc["gallery"] = report.gallery;
        emit(doc);
    } else {
        std::cout << "length " << fmt(report.path.length()) << "\n";
        std::cout << "galleries " << report.galleries << " solved " << report.solved
                  << " optimal " << report.optimal << "\n";
        std::cout << "gallery " << report.gallery << "\n";
        for (const auto& b : report.path.breaks()) std::cout << "  " << point_literal(X, b) << "\n";
    }
    return 0;
}

int run_decompose(const Common& c, std::size_t vertex, double merge_tol) {
    const CubeComplex X = load(c.complex);
    const PValue p = parse_p(c.p, false);
    const Point x = parse_point(X, c.from);
    const Point y = parse_point(X, c.to);
    if (vertex >= X.vertex_count()) throw UsageError("--vertex out of range");
    const SignVector v = X.vertices()[vertex];
    const auto dec = canonical_decomposition(X, x, v, y, p, merge_tol);
    const double formula = distance_formula(x, v, y, dec, p);
    const double length = distance(X, x, y, p);
    if (c.as_json) {
        json doc = decomposition_json(X, dec);
        doc["distance_formula"] = formula;
        doc["geodesic_length"] = length;
        emit(doc);
    } else {
        std::cout << "k " << dec.k() << "\n";
        const auto a = factor_labels(X, dec.A);
        const auto b = factor_labels(X, dec.B);
        for (std::size_t j = 0; j < dec.k(); ++j) {
            auto join = [](const std::vector<std::string>& s) {
                std::string out = "{";
                for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i];
                return out + "}";
            };
            std::cout << "  A" << j + 1 << " " << join(a[j]) << "  B" << j + 1 << " " << join(b[j])
                      << "  ratio " << fmt(dec.ratios[j]) << "\n";
        }
        std::cout << "distance_formula " << fmt(formula) << "\n";
        std::cout << "geodesic_length " << fmt(length) << "\n";
    }
    return 0;
}

int run_check(const Common& c, const std::string& path_file, double tol) {
    const CubeComplex X = load(c.complex);
    std::optional<PiecewisePath> path;
    if (!path_file.empty()) {
        std::ifstream in(path_file);
        if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path_file);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("path document: ") + e.what());
        }
        path = path_from_json(X, doc);
    } else {
        if (c.from.empty() || c.to.empty() || c.p.empty()) {
            throw UsageError("check needs --path, or --p with --from and --to");
        }
        path = geodesic(X, parse_point(X, c.from), parse_point(X, c.to), parse_p(c.p, false));
    }
    const auto report = check_local_conditions(X, *path, tol);
    if (c.as_json) {
        json doc = conditions_json(report);
        doc["length"] = path->length();
        emit(doc);
    } else {
        std::cout << (report.ok() ? "ok" : "fails") << " length " << fmt(path->length())
                  << " worst residual " << fmt(report.worst_residual) << "\n";
    }
    return report.ok() ? 0 : 1;
}

int run_sweep(const Common& c, const std::string& functional, const std::string& grid_spec,
              bool limits) {
    const CubeComplex X = load(c.complex);
    const Point x = parse_point(X, c.from);
    const Point y = parse_point(X, c.to);
    const auto f = make_functional(X, functional);
    const auto grid = parse_grid(grid_spec);
    for (double p : grid) {
        if (!(p > 1.0) || !std::isfinite(p)) throw UsageError("grid values must be finite and > 1");
    }
    const auto table = p_sweep(X, x, y, f, grid);
    std::optional<SweepLimits> lim;
    if (limits) lim = sweep_limits(X, x, y, f);
    if (c.as_json) {
        json rows = json::array();
        for (const auto& r : table.rows) rows.push_back({r.p, r.value});
        json doc{{"functional", functional}, {"rows", rows}, {"max_gap", table.max_gap}};
        if (lim) doc["limits"] = {{"p_to_1", lim->at_one}, {"p_to_inf", lim->at_infinity}};
        emit(doc);
    } else {
        for (const auto& r : table.rows) std::cout << fmt(r.p) << " " << fmt(r.value) << "\n";
        if (lim) {
            std::cout << "# limit p->1 " << fmt(lim->at_one) << "\n";
            std::cout << "# limit p->inf " << fmt(lim->at_infinity) << "\n";
        }
    }
    return 0;
}

int run_oracle(const Common& c, double eps, bool certify) {
    const CubeComplex X = load(c.complex);
    const PValue p = parse_p(c.p, false);
    const Point x = parse_point(X, c.from);
    const Point y = parse_point(X, c.to);
    const auto result = oracle_search(X, x, y, p, eps);
    std::optional<bool> certified;
    double solver = 0.0;
    if (certify) {
        solver = distance(X, x, y, p);
        certified = oracle_certify(X, x, y, p, eps, solver);
    }
    if (c.as_json) {
        json doc{{"oracle_distance", result.distance},
                 {"nodes", result.nodes},
                 {"levels", result.levels},
                 {"eps", eps}};
        if (certified) {
            doc["solver_length"] = solver;
            doc["certified"] = *certified;
        }
        emit(doc);
    } else {
        std::cout << "oracle " << fmt(result.distance) << " nodes " << result.nodes << " levels "
                  << result.levels << "\n";
        if (certified) {
            std::cout << "solver " << fmt(solver) << " certified " << (*certified ? "yes" : "no")
                      << "\n";
        }
    }
    return certified && !*certified ? 1 : 0;
}

struct SuiteArgs {
    std::string name;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    double tol = 1e-8;
    std::optional<double> k;
    std::optional<double> C;
    double r = 1.0;
    std::optional<double> R;
    double delta = 0.1;
    int n = 2;
};

int run_suite(const Common& c, const SuiteArgs& s) {
    if (s.name == "rank4") {
        if (c.p.empty()) throw UsageError("rank4 needs --p");
        const auto r = rank4_lattice_check(parse_p(c.p, false));
        emit({{"suite", "rank4"},
              {"x_numeric", r.x_numeric},
              {"y_numeric", r.y_numeric},
              {"x_closed_form", r.x_closed},
              {"y_closed_form", r.y_closed},
              {"residual", r.residual}});
        return r.residual <= 1e-6 ? 0 : 1;
    }
    if (s.name == "decagon") {
        if (s.n < 1) throw UsageError("--n must be a positive integer");
        const auto a = decagon_angle_check(s.n);
        emit({{"suite", "decagon"},
              {"n", s.n},
              {"angle", a.angle},
              {"threshold", a.threshold},
              {"passes", a.passes}});
        return a.passes ? 0 : 1;
    }
    if (c.complex.empty()) throw UsageError("suite " + s.name + " needs a complex");
    if (c.p.empty()) throw UsageError("suite " + s.name + " needs --p");
    const CubeComplex X = load(c.complex);
    const PValue p = parse_p(c.p, false);
    SuiteOptions o;
    o.samples = s.samples;
    o.seed = s.seed;
    o.threads = s.threads;
    o.tol = s.tol;
    CheckReport report;
    if (s.name == "midpoint") {
        report = midpoint_convexity_suite(X, p, o);
    } else if (s.name == "busemann") {
        report = busemann_suite(X, p, o);
    } else if (s.name == "uniform-convexity") {
        report = uniform_convexity_suite(X, p, s.k, o);
    } else if (s.name == "uniform-smoothness") {
        report = uniform_smoothness_suite(X, p, s.C, s.r, s.R.value_or(2.0 * s.r), o);
    } else if (s.name == "b1") {
        report = bolicity_b1_suite(X, p, s.delta, s.r, s.C, o);
    } else if (s.name == "b2") {
        report = bolicity_b2_suite(X, p, s.k, s.C.value_or(1.0), o);
    } else {
        throw UsageError("unknown suite: " + s.name);
    }
    emit(report_json(report));
    return report.violations == 0 ? 0 : 1;
}

int run_examples(const std::string& out_dir) {
    const auto fixtures = bundled_fixtures();
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (const auto& f : fixtures) {
        if (!out_dir.empty()) {
            const auto file = std::filesystem::path(out_dir) / (f.name + ".json");
            std::ofstream out(file);
            if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
            out << complex_json(f.complex).dump(2) << "\n";
            std::cout << file.string() << "\n";
        } else {
            std::cout << f.name << ": " << f.complex.hyperplane_count() << " hyperplanes, "
                      << f.complex.vertex_count() << " vertices\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesics and convexity checks for CAT(0) cube complexes with lp metrics"};
    app.require_subcommand(1);
    Common c;
    std::size_t vertex = 0;
    double merge_tol = 1e-7;
    std::string path_file;
    double tol = 1e-8;
    std::string functional = "break0";
    std::string grid = "log:1.01:64:50";
    bool limits = false;
    double eps = 0.02;
    bool certify = false;
    SuiteArgs s;
    std::string out_dir;

    auto* validate = app.add_subcommand("validate", "load and validate a complex");
    add_complex(validate, c);
    validate->add_flag("--json", c.as_json, "JSON output");

    auto* dist = app.add_subcommand("distance", "lp distance between two points");
    add_complex(dist, c);
    add_p(dist, c);
    add_endpoints(dist, c);
    dist->add_flag("--json", c.as_json, "JSON output");

    auto* geo = app.add_subcommand("geodesic", "break points of the unique geodesic");
    add_complex(geo, c);
    add_p(geo, c);
    add_endpoints(geo, c);
    geo->add_flag("--json", c.as_json, "JSON output");

    auto* dec = app.add_subcommand("decompose", "canonical factor decomposition at a vertex");
    add_complex(dec, c);
    add_p(dec, c);
    add_endpoints(dec, c);
    dec->add_option("--vertex", vertex, "index of the shared vertex")->required();
    dec->add_option("--merge-tol", merge_tol, "ratio merge tolerance");
    dec->add_flag("--json", c.as_json, "JSON output");

    auto* check = app.add_subcommand("check", "zero-tension and no-shortcut conditions");
    add_complex(check, c);
    check->add_option("--p", c.p, "exponent p > 1");
    check->add_option("--from", c.from, "start point literal");
    check->add_option("--to", c.to, "end point literal");
    check->add_option("--path", path_file, "path document from geodesic --json");
    check->add_option("--tol", tol, "residual tolerance");
    check->add_flag("--json", c.as_json, "JSON output");

    auto* sweep = app.add_subcommand("sweep-p", "path functional over a grid of p");
    add_complex(sweep, c);
    add_endpoints(sweep, c);
    sweep->add_option("--functional", functional, "length or break0[:label]");
    sweep->add_option("--grid", grid, "log:a:b:n, lin:a:b:n or a comma list");
    sweep->add_flag("--limits", limits, "extrapolate the p->1 and p->inf limits");
    sweep->add_flag("--json", c.as_json, "JSON output");

    auto* orc = app.add_subcommand("oracle", "distance by graph search on a dyadic net");
    add_complex(orc, c);
    add_p(orc, c);
    add_endpoints(orc, c);
    orc->add_option("--eps", eps, "finest grid step")->check(CLI::PositiveNumber);
    orc->add_flag("--certify", certify, "compare against the solver");
    orc->add_flag("--json", c.as_json, "JSON output");

    auto* suite = app.add_subcommand("suite", "sampled inequality checks");
    suite->add_option("name", s.name,
                      "midpoint, busemann, uniform-convexity, uniform-smoothness, b1, b2, "
                      "rank4 or decagon")
        ->required();
    suite->add_option("complex", c.complex, "complex file, or builtin:NAME");
    suite->add_option("--p", c.p, "exponent p > 1");
    suite->add_option("--samples", s.samples, "number of samples");
    suite->add_option("--seed", s.seed, "64-bit seed");
    suite->add_option("--threads", s.threads, "worker cap, 0 for available parallelism");
    suite->add_option("--tol", s.tol, "violation tolerance");
    suite->add_option("--k", s.k, "uniform convexity constant");
    suite->add_option("--C", s.C, "smoothness constant, or the B2 constant");
    suite->add_option("--r", s.r, "small radius r");
    suite->add_option("--R", s.R, "large radius R for uniform smoothness");
    suite->add_option("--delta", s.delta, "B1 tolerance delta");
    suite->add_option("--n", s.n, "decagon parameter n");

    auto* examples = app.add_subcommand("examples", "list or write the bundled fixtures");
    examples->add_option("--out-dir", out_dir, "directory for fixture files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*validate) return run_validate(c);
        if (*dist) return run_distance(c);
        if (*geo) return run_geodesic(c);
        if (*dec) return run_decompose(c, vertex, merge_tol);
        if (*check) return run_check(c, path_file, tol);
        if (*sweep) return run_sweep(c, functional, grid, limits);
        if (*orc) return run_oracle(c, eps, certify);
        if (*suite) return run_suite(c, s);
        if (*examples) return run_examples(out_dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << error_json(e).dump() << "\n";
        return 1;
    }
    return 2;
}
