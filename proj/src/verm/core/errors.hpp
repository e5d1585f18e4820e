#pragma once

#include <stdexcept>
#include <string>

namespace verm {

/// Coarse failure taxonomy. The C API and the CLI map these onto status
/// and exit codes; everything below the API boundary throws.
enum class ErrorKind {
  Data,       // malformed inputs, unresolvable locators, failed validation
  Config,     // bad configuration, missing credentials
  Transport,  // endpoint or sidecar unreachable after retries
  Malformed,  // a remote model answered, but not with a usable object
  Aborted,    // run stopped (cancellation, failure budget exceeded)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error(ErrorKind::Transport, what) {}
};

class AbortedError : public Error {
 public:
  explicit AbortedError(const std::string& what) : Error(ErrorKind::Aborted, what) {}
};

/// Remote output that could not be turned into a schema-valid object.
/// Keeps the verbatim text for auditing.
class MalformedOutput : public Error {
 public:
  MalformedOutput(const std::string& what, std::string raw)
      : Error(ErrorKind::Malformed, what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace verm
