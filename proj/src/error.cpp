#include "sketchls/error.hpp"

namespace sketchls {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotPowerOfTwo: return "NotPowerOfTwo";
        case ErrorKind::NotEnoughRows: return "NotEnoughRows";
        case ErrorKind::BadSubsampleSize: return "BadSubsampleSize";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::ZeroDirection: return "ZeroDirection";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::InvalidFlag: return "InvalidFlag";
    }
    return "Unknown";
}

}  // namespace sketchls
