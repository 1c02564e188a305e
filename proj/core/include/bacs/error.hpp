#pragma once

#include <stdexcept>
#include <string>

namespace bacs {

// Error classes surfaced to the command line with distinct exit codes.
// Precondition violations inside the numerical kernels use the standard
// std::invalid_argument / std::domain_error types instead.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (unknown method, bad parameter).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range input data; `line` is 1-based when known.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, long line = -1)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// File-system failures, always carrying the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace bacs
