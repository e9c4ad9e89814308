#pragma once

#include <stdexcept>
#include <string>

namespace nulleq {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method failed to converge or a computation lost meaning.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is valid data but the requested statistic is 0/0 (zero spread,
/// zero residual, etc).
class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Design matrix has numerical rank below its column count.
class RankDeficientError : public NumericError {
 public:
  RankDeficientError(std::string column, std::size_t index)
      : NumericError("design matrix is rank deficient at column '" + column + "'"),
        column_(std::move(column)),
        index_(index) {}

  const std::string& column() const noexcept { return column_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::string column_;
  std::size_t index_;
};

/// Malformed or unusable input data (CSV ingestion, mismatched lengths).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nulleq
