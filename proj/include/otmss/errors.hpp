#pragma once

#include <stdexcept>
#include <string>

namespace otmss {

/// Argument outside the modelled domain (e.g. eta >= 0, post-inflation).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Geometric pair-amplitude series with ratio >= 1.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluation routes disagree; signals a convention bug.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& message, std::string field = {}, int line = 0)
      : std::runtime_error(message), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  std::string field_;
  int line_;
};

} // namespace otmss
