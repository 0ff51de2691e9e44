#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdiff {

/// Malformed expression text. `offset` is the byte position of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset, std::vector<std::string> expected)
      : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Evaluation outside a function's real domain (log of t <= 0, x/0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operator parameters outside their admissible range (r > n, k > n, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal numerical failure such as a stalled eigenvalue iteration.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opdiff
