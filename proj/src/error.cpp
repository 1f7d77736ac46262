#include "xqr/error.hpp"

namespace xqr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateTable: return "DegenerateTable";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::EmptyTable: return "EmptyTable";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::QubitOutOfRange: return "QubitOutOfRange";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::ZeroNorm: return "ZeroNorm";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::LayoutMismatch: return "LayoutMismatch";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::EmptyMemory: return "EmptyMemory";
        case ErrorCode::WeightOutOfScale: return "WeightOutOfScale";
        case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::NullProbabilityZero: return "NullProbabilityZero";
        case ErrorCode::InvalidShape: return "InvalidShape";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IOFailure: return "IOFailure";
    }
    return "Unknown";
}

}  // namespace xqr
