#include "spdcoam/errors.hpp"

namespace spdcoam {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Sampling: return "sampling";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::UndefinedInput: return "undefined-input";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
  }
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorKind::Config, join_violations(violations)),
      violations_(std::move(violations)) {}

void fail(ErrorKind kind, const std::string& message) {
  if (kind == ErrorKind::Config) throw ConfigError(message);
  throw Error(kind, message);
}

}  // namespace spdcoam
