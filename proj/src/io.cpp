#include "cubelp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cubelp {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, what);
}

double parse_double(std::string_view s, const std::string& context) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
        parse_fail("bad number '" + std::string(s) + "' in " + context);
    }
    return v;
}

json bits_json(const CubeComplex& X, const SignVector& s) {
    json out = json::array();
    for (std::size_t h = 0; h < X.hyperplane_count(); ++h) {
        if (s[h]) out.push_back(X.hyperplanes()[h]);
    }
    return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

CubeComplex load_complex(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("hyperplanes") || !doc.contains("vertices")) {
        parse_fail("document needs \"hyperplanes\" and \"vertices\"");
    }
    const json& hs = doc["hyperplanes"];
    const json& vs = doc["vertices"];
    if (!hs.is_array() || !vs.is_array()) parse_fail("hyperplanes and vertices must be lists");
    std::vector<std::string> labels;
    for (const auto& h : hs) {
        if (!h.is_string()) parse_fail("hyperplane labels must be strings");
        labels.push_back(h.get<std::string>());
    }
    if (labels.size() > kMaxHyperplanes) {
        throw Error(ErrorCode::ScaleExceeded, "too many hyperplanes");
    }
    std::vector<SignVector> verts;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const json& v = vs[i];
        if (!v.is_object()) parse_fail("vertex " + std::to_string(i) + " must be an object");
        if (v.size() != labels.size()) {
            parse_fail("vertex " + std::to_string(i) + " must assign every hyperplane once");
        }
        SignVector s;
        for (std::size_t h = 0; h < labels.size(); ++h) {
            const auto it = v.find(labels[h]);
            if (it == v.end()) {
                parse_fail("vertex " + std::to_string(i) + " misses hyperplane " + labels[h]);
            }
            if (!it->is_number_integer() || (it->get<int>() != 0 && it->get<int>() != 1)) {
                parse_fail("vertex " + std::to_string(i) + " side must be 0 or 1");
            }
            s[h] = it->get<int>() == 1;
        }
        verts.push_back(s);
    }
    return CubeComplex(std::move(labels), std::move(verts));
}

CubeComplex load_complex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_complex(ss.str());
}

json complex_json(const CubeComplex& X) {
    json doc;
    doc["hyperplanes"] = X.hyperplanes();
    json vs = json::array();
    for (const auto& v : X.vertices()) {
        json o = json::object();
        for (std::size_t h = 0; h < X.hyperplane_count(); ++h) o[X.hyperplanes()[h]] = v[h] ? 1 : 0;
        vs.push_back(std::move(o));
    }
    doc["vertices"] = std::move(vs);
    return doc;
}

Point parse_point(const CubeComplex& X, std::string_view literal) {
    const std::string text(literal);
    const auto colon = literal.find(':');
    if (colon == std::string_view::npos) parse_fail("point literal needs 'index:' in " + text);
    const std::string_view head = literal.substr(0, colon);
    std::size_t index = 0;
    const auto [end, ec] = std::from_chars(head.data(), head.data() + head.size(), index);
    if (ec != std::errc() || end != head.data() + head.size() || head.empty()) {
        parse_fail("bad vertex index in " + text);
    }
    if (index >= X.vertex_count()) parse_fail("vertex index out of range in " + text);
    const SignVector base = X.vertices()[index];

    std::vector<std::pair<std::size_t, double>> coords;
    std::string_view rest = literal.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) parse_fail("coordinate needs 'label=value' in " + text);
        const auto h = X.hyperplane_index(item.substr(0, eq));
        if (!h) parse_fail("unknown hyperplane '" + std::string(item.substr(0, eq)) + "'");
        for (const auto& c : coords) {
            if (c.first == *h) parse_fail("repeated hyperplane in " + text);
        }
        const double t = parse_double(item.substr(eq + 1), text);
        if (!(t >= 0.0 && t <= 1.0)) parse_fail("coordinate outside [0,1] in " + text);
        coords.emplace_back(*h, t);
    }
    const Point x = Point::from_base(base, X.hyperplane_count(), coords);
    if (!X.contains(x)) {
        throw Error(ErrorCode::InvalidArgument, "point " + text + " is not in the complex");
    }
    return x;
}

std::string point_literal(const CubeComplex& X, const Point& x) {
    const auto idx = X.vertex_index(x.base());
    if (!idx) throw Error(ErrorCode::InvalidArgument, "point is not in the complex");
    std::string out = std::to_string(*idx) + ":";
    bool first = true;
    for (std::size_t h = 0; h < x.size(); ++h) {
        if (x[h] <= 0.0 || x[h] >= 1.0) continue;
        if (!first) out += ',';
        first = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x[h]);
        out += X.hyperplanes()[h] + "=" + buf;
    }
    return out;
}

json path_json(const CubeComplex& X, const PiecewisePath& path) {
    json breaks = json::array();
    for (const auto& b : path.breaks()) {
        breaks.push_back({{"literal", point_literal(X, b)}, {"ambient", b.ambient()}});
    }
    return {{"p", path.p().value()},
            {"length", path.length()},
            {"hyperplanes", X.hyperplanes()},
            {"breaks", std::move(breaks)}};
}

PiecewisePath path_from_json(const CubeComplex& X, const json& doc, double length_tol) {
    try {
        const PValue p(doc.at("p").get<double>());
        std::vector<Point> breaks;
        for (const auto& b : doc.at("breaks")) {
            auto a = b.at("ambient").get<std::vector<double>>();
            if (a.size() != X.hyperplane_count()) parse_fail("break point has wrong dimension");
            Point x(std::move(a));
            if (!X.contains(x)) {
                throw Error(ErrorCode::InvalidArgument, "break point is not in the complex");
            }
            if (b.contains("literal") && !(parse_point(X, b["literal"].get<std::string>()) == x)) {
                throw Error(ErrorCode::InvalidArgument, "literal and ambient coordinates differ");
            }
            breaks.push_back(std::move(x));
        }
        PiecewisePath path(X, std::move(breaks), p);
        const double stored = doc.at("length").get<double>();
        if (std::fabs(stored - path.length()) > length_tol) {
            throw Error(ErrorCode::InvalidArgument, "stored length does not match the break points");
        }
        return path;
    } catch (const json::exception& e) {
        parse_fail(std::string("path document: ") + e.what());
    }
}

json decomposition_json(const CubeComplex& X, const Decomposition& dec) {
    json factors = json::array();
    for (std::size_t j = 0; j < dec.k(); ++j) {
        factors.push_back({{"A", bits_json(X, dec.A[j])},
                           {"B", bits_json(X, dec.B[j])},
                           {"ratio", finite_or_null(dec.ratios[j])}});
    }
    return {{"k", dec.k()}, {"factors", std::move(factors)}};
}

json report_json(const CheckReport& report) {
    json witness = report.witness.empty() ? json(nullptr) : json::parse(report.witness);
    return {{"suite", report.suite},
            {"samples", report.samples},
            {"violations", report.violations},
            {"worst_margin", finite_or_null(report.worst_margin)},
            {"witness", std::move(witness)},
            {"constants", report.constants}};
}

json conditions_json(const ConditionReport& report) {
    json breaks = json::array();
    for (std::size_t i = 0; i < report.zero_tension_ok.size(); ++i) {
        json b{{"zero_tension_ok", static_cast<bool>(report.zero_tension_ok[i])},
               {"zero_tension_residual", report.zero_tension_residual[i]}};
        if (i < report.no_shortcut_ok.size()) {
            b["no_shortcut_ok"] = static_cast<bool>(report.no_shortcut_ok[i]);
            b["no_shortcut_residual"] = report.no_shortcut_residual[i];
        }
        breaks.push_back(std::move(b));
    }
    return {{"ok", report.ok()}, {"worst_residual", report.worst_residual}, {"breaks", breaks}};
}

json error_json(const Error& e) {
    json out{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.witness().empty()) {
        try {
            out["witness"] = json::parse(e.witness());
        } catch (const json::exception&) {
            out["witness"] = e.witness();
        }
    }
    return out;
}

}  // namespace cubelp
