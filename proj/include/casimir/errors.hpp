#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the mathematical domain of a function (xi <= 0, eps < 1, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Adaptive integration ran out of budget. Carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double best_value, double best_error)
      : std::runtime_error(what), best_value_(best_value), best_error_(best_error) {}

  double best_value() const noexcept { return best_value_; }
  double best_error() const noexcept { return best_error_; }

private:
  double best_value_;
  double best_error_;
};

/// Rejected input data. `row` is the 1-based line number in the source, 0 when
/// the problem is not tied to a single row.
class ValidationError : public std::invalid_argument {
public:
  enum class Kind { parse, header, too_few_rows, non_monotone, non_positive_frequency, negative_value };

  ValidationError(Kind kind, std::size_t row, const std::string& what)
      : std::invalid_argument(what), kind_(kind), row_(row) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }

private:
  Kind kind_;
  std::size_t row_;
};

} // namespace casimir
