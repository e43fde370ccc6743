#include "statstok/error.hpp"

namespace statstok {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::EmptyScale: return "EmptyScale";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace statstok
