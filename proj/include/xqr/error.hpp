#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xqr {

enum class ErrorCode {
    InvalidArgument,
    DegenerateTable,
    ConstantColumn,
    EmptyTable,
    DimensionMismatch,
    QubitOutOfRange,
    IndexOutOfRange,
    ZeroNorm,
    NotNormalized,
    LayoutMismatch,
    SupportViolation,
    InvalidProbability,
    OutOfRange,
    EmptyMemory,
    WeightOutOfScale,
    NonFiniteObjective,
    ZeroVariance,
    NullProbabilityZero,
    InvalidShape,
    ParseError,
    IOFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace xqr
