#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cubelp/complex.hpp"
#include "cubelp/convexity.hpp"
#include "cubelp/decomposition.hpp"
#include "cubelp/errors.hpp"
#include "cubelp/geodesic.hpp"

namespace cubelp {

// Complex description: {"hyperplanes": [labels], "vertices": [{label: 0|1}]}.
// Validates the result; malformed documents raise ParseError.
CubeComplex load_complex(std::string_view text);
CubeComplex load_complex_file(const std::string& path);
nlohmann::json complex_json(const CubeComplex& X);

// Point literal "vertexIndex:h1=0.25,h2=0.7", coordinates measured away from
// the base vertex. "3:" names a vertex.
Point parse_point(const CubeComplex& X, std::string_view literal);
std::string point_literal(const CubeComplex& X, const Point& x);

nlohmann::json path_json(const CubeComplex& X, const PiecewisePath& path);
// Rebuilds a path from path_json output, checking every break point and the
// stored length against a recomputation.
PiecewisePath path_from_json(const CubeComplex& X, const nlohmann::json& doc,
                             double length_tol = 1e-12);

nlohmann::json decomposition_json(const CubeComplex& X, const Decomposition& dec);
nlohmann::json report_json(const CheckReport& report);
nlohmann::json conditions_json(const ConditionReport& report);
nlohmann::json error_json(const Error& e);

}  // namespace cubelp
