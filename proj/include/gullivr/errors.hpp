#pragma once

#include <stdexcept>
#include <string>

namespace gullivr {

/// Argument outside the domain of an operation (bad coordinates, negative
/// radius, non-positive scale, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation not permitted in the current mode (e.g. teleporting in GM).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Missing or inconsistent configuration entry.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gullivr
