#pragma once

#include <stdexcept>
#include <string>

namespace licrit {

// Precondition / domain violations (bad argument ranges, invalid descriptors,
// unusable configurations). CLI maps these to exit code 2.
using domain_error = std::domain_error;

// A computation that started from valid inputs failed to reach a trustworthy
// result (non-contracting extrapolation ladder, zero-count deficit after
// refinement, cross-validation disagreement). CLI maps these to exit code 1.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (zero tables, descriptor JSON). Carries a 1-based line
// number when the source is line-oriented (0 = not applicable). CLI maps these
// to exit code 2.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? ("line " + std::to_string(line) + ": " + what)
                                : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace licrit
