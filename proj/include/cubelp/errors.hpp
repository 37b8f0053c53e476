#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cubelp {

enum class ErrorCode {
    ParseError,
    NotMedian,
    Disconnected,
    DisjointCubes,
    ScaleExceeded,
    NoCommonCube,
    NoConvergence,
    UniquenessViolation,
    PreconditionViolated,
    NotVertexIntersection,
    DecompositionMismatch,
    InsufficientDiameter,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All domain failures raised by the library. The witness is a JSON text
// describing the offending configuration, or empty.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string witness = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    ErrorCode code_;
    std::string witness_;
};

}  // namespace cubelp
