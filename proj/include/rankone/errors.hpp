#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankone {

enum class ErrorCode {
    UnsortedEigenvalues,
    NonPositiveWeight,
    DimensionMismatch,
    NonFiniteValue,
    PoleProximity,
    ZeroOfF,
    BracketFailure,
    InconsistentNodes,
    InfiniteCoupling,
    NormalizationRequired,
    PoleMismatch,
    NotAZero,
    RealPoint,
    InsufficientCoefficients,
    NonPositiveOffDiagonal,
    QZero,
    QuadratureNonConvergence,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsortedEigenvalues: return "UnsortedEigenvalues";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::ZeroOfF: return "ZeroOfF";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::InconsistentNodes: return "InconsistentNodes";
        case ErrorCode::InfiniteCoupling: return "InfiniteCoupling";
        case ErrorCode::NormalizationRequired: return "NormalizationRequired";
        case ErrorCode::PoleMismatch: return "PoleMismatch";
        case ErrorCode::NotAZero: return "NotAZero";
        case ErrorCode::RealPoint: return "RealPoint";
        case ErrorCode::InsufficientCoefficients: return "InsufficientCoefficients";
        case ErrorCode::NonPositiveOffDiagonal: return "NonPositiveOffDiagonal";
        case ErrorCode::QZero: return "QZero";
        case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    }
    return "Unknown";
}

/// Validation errors (bad input) vs numerical errors (evaluation failed) is the
/// distinction the CLI maps onto exit codes.
constexpr bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsortedEigenvalues:
        case ErrorCode::NonPositiveWeight:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonFiniteValue:
        case ErrorCode::InsufficientCoefficients:
        case ErrorCode::NonPositiveOffDiagonal:
        case ErrorCode::NormalizationRequired:
        case ErrorCode::PoleMismatch:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rankone
