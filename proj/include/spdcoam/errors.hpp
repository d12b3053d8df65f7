#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spdcoam {

enum class ErrorKind {
  Config,          // invalid parameters or documents
  Sampling,        // grid / angular sampling below the required bound
  Truncation,      // harmonic truncation could not reach the captured-power target
  UndefinedInput,  // e.g. overlap of a zero-power field
  Consistency,     // contradictory classification evidence
  Io,
};

const char* to_string(ErrorKind kind);

// Process exit code for the CLI: 2 config, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries every violation found while validating a document, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& message, double residual_power)
      : Error(ErrorKind::Truncation, message), residual_(residual_power) {}
  double residual_power() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace spdcoam
