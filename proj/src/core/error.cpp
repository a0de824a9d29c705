#include "symts/error.hpp"

namespace symts {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::OrderExceedsAccuracy: return "OrderExceedsAccuracy";
        case ErrorCode::GridTooShort: return "GridTooShort";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::CoefficientLengthMismatch: return "CoefficientLengthMismatch";
        case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ConstraintCountMismatch: return "ConstraintCountMismatch";
        case ErrorCode::InvalidConstraint: return "InvalidConstraint";
        case ErrorCode::SingularConstraintSystem: return "SingularConstraintSystem";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::InsufficientDof: return "InsufficientDof";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::InvalidDof: return "InvalidDof";
        case ErrorCode::NegativeDiagonal: return "NegativeDiagonal";
        case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
        case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
        case ErrorCode::NonpositiveEpsilon: return "NonpositiveEpsilon";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::MalformedTokens: return "MalformedTokens";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
        case ErrorCode::BothEmpty: return "BothEmpty";
        case ErrorCode::NoReferences: return "NoReferences";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownSymbol: return "UnknownSymbol";
        case ErrorCode::PatternTooLarge: return "PatternTooLarge";
        case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
        case ErrorCode::NonUniformGrid: return "NonUniformGrid";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidSpec:
        case ErrorCode::OrderExceedsAccuracy:
        case ErrorCode::InvalidAlphabet:
        case ErrorCode::NonpositiveEpsilon:
        case ErrorCode::SyntaxError:
        case ErrorCode::UnknownSymbol:
        case ErrorCode::PatternTooLarge:
        case ErrorCode::InvalidProbability:
        case ErrorCode::InvalidDof:
        case ErrorCode::HorizonTooLarge:
        case ErrorCode::ConstraintCountMismatch:
        case ErrorCode::InvalidConstraint:
        case ErrorCode::NoReferences:
        case ErrorCode::InvalidWindow:
            return ErrorCategory::Usage;
        case ErrorCode::SingularConstraintSystem:
        case ErrorCode::InsufficientDof:
        case ErrorCode::NegativeDiagonal:
        case ErrorCode::NotSymmetric:
        case ErrorCode::BothEmpty:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Data;
    }
}

}  // namespace symts
