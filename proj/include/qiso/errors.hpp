#pragma once

#include <stdexcept>
#include <string>

namespace qiso {

/// Base for every error the library raises. `code()` names the failure kind.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Malformed or inconsistent input (CLI exit code 2).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An exact procedure refused to run beyond its configured size (CLI exit code 4).
class SizeGuardExceeded : public Error {
 public:
  explicit SizeGuardExceeded(const std::string& message) : Error("SizeGuardExceeded", message) {}
};

/// Structural violation detected in an object that should have been valid.
class StructureError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const char* code, const std::string& message) {
  if (!condition) throw InvalidInput(code, message);
}

}  // namespace qiso
