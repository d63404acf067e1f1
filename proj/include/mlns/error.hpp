#ifndef MLNS_ERROR_HPP
#define MLNS_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mlns {

// Domain error taxonomy shared by all modules. The CLI maps these to
// exit code 1; parse/usage problems at the command line map to exit 2.
enum class ErrorKind {
    parse_error,
    admissibility,
    not_pure_in_formula,
    missing_domain,
    type_mismatch,
    unbound_variable,
    division_by_zero,
    unlimited,
    pole_at_point,
    scale_exhausted,
    not_in_level,
    size_mismatch,
    not_subset,
    too_large,
    unsupported_formula,
    window_too_large,
    no_qualifying_window,
    bad_argument,
};

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::admissibility: return "AdmissibilityError";
    case ErrorKind::not_pure_in_formula: return "NotPureInFormula";
    case ErrorKind::missing_domain: return "MissingDomain";
    case ErrorKind::type_mismatch: return "TypeMismatch";
    case ErrorKind::unbound_variable: return "UnboundVariable";
    case ErrorKind::division_by_zero: return "DivisionByZero";
    case ErrorKind::unlimited: return "Unlimited";
    case ErrorKind::pole_at_point: return "PoleAtPoint";
    case ErrorKind::scale_exhausted: return "ScaleExhausted";
    case ErrorKind::not_in_level: return "NotInLevel";
    case ErrorKind::size_mismatch: return "SizeMismatch";
    case ErrorKind::not_subset: return "NotSubset";
    case ErrorKind::too_large: return "TooLarge";
    case ErrorKind::unsupported_formula: return "UnsupportedFormula";
    case ErrorKind::window_too_large: return "WindowTooLarge";
    case ErrorKind::no_qualifying_window: return "NoQualifyingWindow";
    case ErrorKind::bad_argument: return "BadArgument";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind)
    {
    }

    Error(ErrorKind kind, std::string message, std::size_t position)
        : std::runtime_error(std::move(message)), kind_(kind), position_(position)
    {
    }

    // detail carries e.g. the diverging stage j of Unlimited(j)
    Error(ErrorKind kind, std::string message, int detail)
        : std::runtime_error(std::move(message)), kind_(kind), detail_(detail)
    {
    }

    ErrorKind kind() const { return kind_; }
    const char* kind_name() const { return error_kind_name(kind_); }
    std::optional<std::size_t> position() const { return position_; }
    std::optional<int> detail() const { return detail_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
    std::optional<int> detail_;
};

} // namespace mlns

#endif
