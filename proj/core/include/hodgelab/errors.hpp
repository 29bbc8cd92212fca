#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hodgelab {

/// Invalid domain or generator parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Violated precondition of an API call (unsorted input, short prefix, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed mesh text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Assembly failure on a specific cell (zero volume, inverted element).
class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(int cell, const std::string& what)
      : std::runtime_error("cell " + std::to_string(cell) + ": " + what), cell_(cell) {}

  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

/// Factorization failure, iterative non-convergence.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> residuals = {})
      : std::runtime_error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace hodgelab
