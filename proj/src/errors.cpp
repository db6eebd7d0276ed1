#include "darboux/errors.hpp"

namespace darboux {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::DegenerateChart: return "DegenerateChart";
        case ErrorKind::DegenerateCurve: return "DegenerateCurve";
        case ErrorKind::NonTangentCurve: return "NonTangentCurve";
        case ErrorKind::AdaptednessViolation: return "AdaptednessViolation";
        case ErrorKind::RequiresUnitSpeed: return "RequiresUnitSpeed";
        case ErrorKind::ClosureIncompatible: return "ClosureIncompatible";
        case ErrorKind::BalanceImpossible: return "BalanceImpossible";
        case ErrorKind::NonTangentialVelocity: return "NonTangentialVelocity";
        case ErrorKind::DriftExceeded: return "DriftExceeded";
        case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::ValidationError:
            return 2;
        case ErrorKind::IoError:
            return 4;
        default:
            return 3;
    }
}

}  // namespace darboux
