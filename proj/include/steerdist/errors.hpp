#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steerdist {

enum class ErrorCode {
    NotHermitian,
    NotPsd,
    NonFinite,
    NoConvergence,
    BadDimension,
    DimOverflow,
    DimMismatch,
    BadMask,
    ThetaOutOfRange,
    KappaOutOfRange,
    CopiesOutOfRange,
    TrialsOutOfRange,
    ZeroSuccessProbability,
    ScenarioMismatch,
    InvariantViolation,
    NonFiniteObjective,
    NoSignChange,
    Parse,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace steerdist
