#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hardy {

enum class ErrorCode {
    InvalidInput,
    InvalidMatrix,
    InvalidRadius,
    InfeasibleConstraints,
    NotConverged,
    NotNormalized,
    NotLogIntegrable,
    KernelMismatch,
    InconsistentDuplicates,
    Infeasible,
    DuplicateNodes,
    DegenerateBoundaryData,
    DegreeTooSmall,
    NoSolutionExists,
    HypothesisInsufficientAtScale,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotLogIntegrable: return "NotLogIntegrable";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::InconsistentDuplicates: return "InconsistentDuplicates";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::DegenerateBoundaryData: return "DegenerateBoundaryData";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::NoSolutionExists: return "NoSolutionExists";
    case ErrorCode::HypothesisInsufficientAtScale: return "HypothesisInsufficientAtScale";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (notably the CLI) can map it to an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hardy
