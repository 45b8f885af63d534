#pragma once

#include <stdexcept>
#include <string>

namespace g0molc {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MomentUndefined : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateLeadingCoefficient : public DomainError {
 public:
  using DomainError::DomainError;
};

class SampleTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

// Root is not enclosed by the solver's initial bracket.
class NoBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration / input document.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace g0molc
