#pragma once

#include <stdexcept>
#include <string>

namespace afy {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input lies outside the domain of a map or operation.
struct DomainError : Error { using Error::Error; };

// A linear fractional transformation was evaluated at its pole, or the
// result would be +infinity (only -infinity is modeled).
struct PoleError : Error { using Error::Error; };

// A float operation could not be decided at the current precision.
// Callers may re-run with a higher precision (doubling up to the cap).
struct PrecisionError : Error { using Error::Error; };

// Arithmetic between surds over different sqrt(d) is rejected, not coerced.
struct MixedFieldError : Error { using Error::Error; };

struct NotASurdError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct TagError : Error { using Error::Error; };
struct GrammarError : Error { using Error::Error; };
struct TerminatedOrbitError : Error { using Error::Error; };
struct DivergentIntegralError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace afy
