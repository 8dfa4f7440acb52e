#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sigrace {

// Process exit codes shared by the library errors and the CLI.
enum class ExitCode : int {
  ok = 0,
  domain = 2,
  undecided = 3,
  budget = 4,
  mismatch = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Input outside the mathematical domain of an operation, or a violated
/// precondition.
class DomainError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::domain; }
};

/// A configured memory or effort budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::budget; }
};

/// A rigorous comparison stayed undecided at the precision cap.
class UndecidedError : public Error {
 public:
  UndecidedError(std::uint64_t n, unsigned precision_bits, const std::string& what)
      : Error(what), n_(n), precision_bits_(precision_bits) {}
  std::uint64_t n() const noexcept { return n_; }
  unsigned precision_bits() const noexcept { return precision_bits_; }
  ExitCode exit_code() const noexcept override { return ExitCode::undecided; }

 private:
  std::uint64_t n_;
  unsigned precision_bits_;
};

/// A re-derived certificate disagrees with what was serialized.
class VerificationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::mismatch; }
};

}  // namespace sigrace
