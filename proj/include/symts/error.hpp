#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symts {

enum class ErrorCode {
    // operator construction / inverse problems
    InvalidGrid,
    OrderExceedsAccuracy,
    GridTooShort,
    InvalidSpec,
    CoefficientLengthMismatch,
    LeadingCoefficientZero,
    LengthMismatch,
    ConstraintCountMismatch,
    InvalidConstraint,
    SingularConstraintSystem,
    // uncertainty
    DimensionMismatch,
    NotSymmetric,
    InsufficientDof,
    InvalidProbability,
    InvalidDof,
    NegativeDiagonal,
    HorizonTooLarge,
    // lexical analysis
    InvalidAlphabet,
    NonpositiveEpsilon,
    OutOfRange,
    NonFiniteSample,
    MalformedTokens,
    NoOverlap,
    EmptyInput,
    InvalidWindow,
    BothEmpty,
    NoReferences,
    // patterns
    SyntaxError,
    UnknownSymbol,
    PatternTooLarge,
    AlphabetMismatch,
    // pipeline
    InvalidConfig,
    MalformedCsv,
    MissingColumn,
    NonMonotoneTime,
    NonUniformGrid,
    Io,
};

/// Coarse classification used for process exit codes.
enum class ErrorCategory { Usage, Data, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the error-code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace symts
