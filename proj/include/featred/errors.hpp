#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace featred {

// Precondition or parameter outside the operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSpecError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  // 1-based physical line in the input; column is 0 when the whole row is at fault.
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateFeatureError : public std::runtime_error {
 public:
  DegenerateFeatureError(const std::string& what, std::string feature)
      : std::runtime_error(what), feature_(std::move(feature)) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

// A search or enumeration ran past its configured budget. Carries the best
// lower bound found so far (0 when the operation has none to offer).
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(const std::string& what, std::size_t best_lower_bound = 0,
                      std::vector<int> best_witness = {})
      : std::runtime_error(what),
        best_lower_bound_(best_lower_bound),
        best_witness_(std::move(best_witness)) {}

  std::size_t best_lower_bound() const noexcept { return best_lower_bound_; }
  const std::vector<int>& best_witness() const noexcept { return best_witness_; }

 private:
  std::size_t best_lower_bound_;
  std::vector<int> best_witness_;
};

}  // namespace featred
