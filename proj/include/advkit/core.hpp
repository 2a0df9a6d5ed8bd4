#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace advkit {

using Rational = mpq_class;

// Error taxonomy shared by every module. Resource errors map to exit code 2
// in the CLI; everything else is a caller mistake.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Exact "p/q" (or "p" when integral) rendering.
std::string to_exact_string(const Rational& r);

/// Parses "p", "p/q", "-p/q" or a finite decimal like "0.25".
Rational parse_rational(std::string_view text);

/// Nearest double; only for display.
double to_double(const Rational& r);

/// Exact conversion: every finite double is a dyadic rational.
Rational from_double(double v);

inline int popcount(std::uint32_t v) { return __builtin_popcount(v); }

}  // namespace advkit
