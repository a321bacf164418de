#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmf {

// Thrown when an operation's estimated work exceeds the configured budget.
// Carries the numbers so callers can report them (the CLI maps this to
// exit code 3 and a JSON error object).
class ResourceLimitError : public std::runtime_error {
  public:
    ResourceLimitError(const std::string &what_arg, uint64_t estimated, uint64_t budget)
        : std::runtime_error(what_arg), estimated_ops_(estimated), budget_ops_(budget) {}

    uint64_t estimated_ops() const noexcept { return estimated_ops_; }
    uint64_t budget_ops() const noexcept { return budget_ops_; }

  private:
    uint64_t estimated_ops_;
    uint64_t budget_ops_;
};

// Distinct from std::invalid_argument: the inputs were well-formed but a
// ratio's denominator degenerated to zero (e.g. an empty E set).
class ZeroDenominatorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace rmf
