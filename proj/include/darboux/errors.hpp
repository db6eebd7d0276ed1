#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace darboux {

enum class ErrorKind {
    OutOfDomain,
    DegenerateChart,
    DegenerateCurve,
    NonTangentCurve,
    AdaptednessViolation,
    RequiresUnitSpeed,
    ClosureIncompatible,
    BalanceImpossible,
    NonTangentialVelocity,
    DriftExceeded,
    EmptyTrajectory,
    ParseError,
    ValidationError,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// command-line front end can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

/// Exit status for a given error kind: 2 validation, 3 numeric, 4 I/O.
[[nodiscard]] int exit_code_for(ErrorKind kind);

}  // namespace darboux
