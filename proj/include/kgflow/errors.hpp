#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgflow {

enum class error_kind {
    syntax,
    non_trig_term,
    non_linear_trig_argument,
    not_periodic,
    not_real,
    mismatched_series,
    bad_constant_term,
    step_failure,
    invalid_argument,
};

inline const char *to_string(error_kind k)
{
    switch (k) {
    case error_kind::syntax: return "SyntaxError";
    case error_kind::non_trig_term: return "NonTrigTerm";
    case error_kind::non_linear_trig_argument: return "NonLinearTrigArgument";
    case error_kind::not_periodic: return "NotPeriodic";
    case error_kind::not_real: return "NotReal";
    case error_kind::mismatched_series: return "MismatchedSeries";
    case error_kind::bad_constant_term: return "BadConstantTerm";
    case error_kind::step_failure: return "StepFailure";
    case error_kind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class error : public std::runtime_error
{
public:
    error(error_kind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

// Diagnostic from the Hamiltonian parser. position is a 0-based character offset.
class parse_error : public error
{
public:
    parse_error(error_kind kind, std::size_t position, const std::string &what)
        : error(kind, what + " (at position " + std::to_string(position) + ")"), position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace kgflow
