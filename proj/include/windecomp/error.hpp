#pragma once

#include <stdexcept>
#include <string>

namespace windecomp {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  Config,     // bad configuration or command line (exit 2)
  Data,       // malformed or inconsistent input data (exit 3)
  Invariant,  // an internal identity check failed (exit 4)
};

/**
 * Base exception for the library.
 *
 * `module` names the pipeline stage that raised the error (fleet, windgrid,
 * powerflux, ...) so the CLI can report "module: cause".
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

/// Malformed textual input (CSV rows, config lines).
class ParseError : public Error {
 public:
  ParseError(std::string module, const std::string& what)
      : Error(ErrorKind::Data, std::move(module), what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& what)
      : Error(ErrorKind::Data, std::move(module), what) {}
};

/// Binary container problems (bad magic, truncation, unordered axes).
class FormatError : public Error {
 public:
  FormatError(std::string module, const std::string& what)
      : Error(ErrorKind::Data, std::move(module), what) {}
};

class DataError : public Error {
 public:
  DataError(std::string module, const std::string& what)
      : Error(ErrorKind::Data, std::move(module), what) {}
};

class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& what)
      : Error(ErrorKind::Config, std::move(module), what) {}
};

class InvariantError : public Error {
 public:
  InvariantError(std::string module, const std::string& what)
      : Error(ErrorKind::Invariant, std::move(module), what) {}
};

}  // namespace windecomp
