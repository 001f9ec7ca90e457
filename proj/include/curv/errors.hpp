#pragma once

#include <stdexcept>
#include <string>

namespace curv {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument ranges (parameters outside their mathematical domain).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Geodesic between two points is not unique (e.g. antipodal points on a sphere).
class GeodesicError : public Error {
 public:
  explicit GeodesicError(const std::string& what) : Error(what) {}
};

/// A configured resource cap (cell count, atom count) would be exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what) {}
};

/// Scenario configuration is malformed or fails validation.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace curv
