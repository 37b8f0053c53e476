#include "cubelp/errors.hpp"

namespace cubelp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NotMedian: return "NotMedian";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::DisjointCubes: return "DisjointCubes";
        case ErrorCode::ScaleExceeded: return "ScaleExceeded";
        case ErrorCode::NoCommonCube: return "NoCommonCube";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::UniquenessViolation: return "UniquenessViolation";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::NotVertexIntersection: return "NotVertexIntersection";
        case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
        case ErrorCode::InsufficientDiameter: return "InsufficientDiameter";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string witness)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      witness_(std::move(witness)) {}

}  // namespace cubelp
