#ifndef ERGORATE_ERROR_HPP
#define ERGORATE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergorate {

enum class ErrorCode {
    // polynomials
    DegreeZero,
    ZeroPolynomial,
    NonConvergence,
    DegreeBoundTooSmall,
    // models and drift
    InvalidModel,
    IndexError,
    NonPositiveArgument,
    NeriViolated,
    PhiNotContracting,
    // spectrum
    RootOnCircle,
    RootOnTauCircle,
    InconsistentCount,
    LambdaOutOfRange,
    // elimination
    PatternMismatch,
    EtaExceedsG,
    // closed forms and special models
    ParamsInvalid,
    DegenerateA,
    GammaOutOfRange,
    MomentDiverges,
    // oracle
    SizeTooSmall,
};

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegreeBoundTooSmall: return "DegreeBoundTooSmall";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::NeriViolated: return "NeriViolated";
    case ErrorCode::PhiNotContracting: return "PhiNotContracting";
    case ErrorCode::RootOnCircle: return "RootOnCircle";
    case ErrorCode::RootOnTauCircle: return "RootOnTauCircle";
    case ErrorCode::InconsistentCount: return "InconsistentCount";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::EtaExceedsG: return "EtaExceedsG";
    case ErrorCode::ParamsInvalid: return "ParamsInvalid";
    case ErrorCode::DegenerateA: return "DegenerateA";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    }
    return "Unknown";
}

/// Exception type thrown by every ergorate routine. The code is stable and
/// is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// True for failures that describe the input rather than the numerics.
    bool is_validation() const noexcept
    {
        switch (code_) {
        case ErrorCode::InvalidModel:
        case ErrorCode::IndexError:
        case ErrorCode::NonPositiveArgument:
        case ErrorCode::NeriViolated:
        case ErrorCode::PhiNotContracting:
        case ErrorCode::LambdaOutOfRange:
        case ErrorCode::ParamsInvalid:
        case ErrorCode::DegenerateA:
        case ErrorCode::GammaOutOfRange:
        case ErrorCode::MomentDiverges:
        case ErrorCode::SizeTooSmall:
        case ErrorCode::DegreeZero:
        case ErrorCode::ZeroPolynomial:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorCode code_;
};

}  // namespace ergorate

#endif  // ERGORATE_ERROR_HPP
