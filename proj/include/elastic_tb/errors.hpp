#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elastic_tb {

enum class ErrorKind { domain, size, convergence, parse, config };

/// Base of every error thrown by the library. The kind drives CLI exit codes:
/// convergence failures map to 3, everything else to 2.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::size, what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_gradient_norm)
      : Error(ErrorKind::convergence, what), last_gradient_norm_(last_gradient_norm) {}
  [[nodiscard]] double last_gradient_norm() const noexcept { return last_gradient_norm_; }

private:
  double last_gradient_norm_;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

inline int exit_code_for(const Error& e) noexcept {
  return e.kind() == ErrorKind::convergence ? 3 : 2;
}

}  // namespace elastic_tb
