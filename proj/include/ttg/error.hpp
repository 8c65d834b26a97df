#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttg {

enum class ErrorKind {
    malformed_json,
    schema_violation,
    unknown_offer,
    config_error,
    infeasible_request,
    io_error,
    empty_data,
    grid_too_coarse,
    empty_segment,
    unbounded_variable,
    fractional_assignment,
    inconsistent_assignment,
    numerical_breakdown,
    time_limit,
    oracle_infeasible,
    invalid_argument,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_json: return "MalformedJson";
        case ErrorKind::schema_violation: return "SchemaViolation";
        case ErrorKind::unknown_offer: return "UnknownOffer";
        case ErrorKind::config_error: return "ConfigError";
        case ErrorKind::infeasible_request: return "InfeasibleRequest";
        case ErrorKind::io_error: return "IoError";
        case ErrorKind::empty_data: return "EmptyData";
        case ErrorKind::grid_too_coarse: return "GridTooCoarse";
        case ErrorKind::empty_segment: return "EmptySegment";
        case ErrorKind::unbounded_variable: return "UnboundedVariable";
        case ErrorKind::fractional_assignment: return "FractionalAssignment";
        case ErrorKind::inconsistent_assignment: return "InconsistentAssignment";
        case ErrorKind::numerical_breakdown: return "NumericalBreakdown";
        case ErrorKind::time_limit: return "TimeLimit";
        case ErrorKind::oracle_infeasible: return "OracleInfeasible";
        case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library. `field()` carries a dotted field path
/// when the error is attributable to one (schema errors, offer ids).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string field = {})
        : std::runtime_error(format(kind, message, field)),
          kind_(kind),
          message_(std::move(message)),
          field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(ErrorKind kind, const std::string& message, const std::string& field) {
        std::string out(to_string(kind));
        if (!field.empty()) {
            out += " at ";
            out += field;
        }
        out += ": ";
        out += message;
        return out;
    }

    ErrorKind kind_;
    std::string message_;
    std::string field_;
};

}  // namespace ttg
