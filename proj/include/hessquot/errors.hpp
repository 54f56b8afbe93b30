#pragma once

#include <stdexcept>
#include <string>

namespace hessquot {

/// Eigenvalues of U left the Garding cone where F is undefined.
class ConeViolation : public std::runtime_error {
 public:
  explicit ConeViolation(const std::string& what) : std::runtime_error(what) {}
};

class InitFailure : public std::runtime_error {
 public:
  explicit InitFailure(const std::string& what) : std::runtime_error(what) {}
};

class LineSearchStall : public std::runtime_error {
 public:
  explicit LineSearchStall(const std::string& what) : std::runtime_error(what) {}
};

class MaxIterations : public std::runtime_error {
 public:
  explicit MaxIterations(const std::string& what) : std::runtime_error(what) {}
};

class LinearSolveFailure : public std::runtime_error {
 public:
  explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

class QInsideDomain : public std::runtime_error {
 public:
  explicit QInsideDomain(const std::string& what) : std::runtime_error(what) {}
};

class LogDomain : public std::runtime_error {
 public:
  explicit LogDomain(const std::string& what) : std::runtime_error(what) {}
};

class Inadmissible : public std::runtime_error {
 public:
  explicit Inadmissible(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hessquot
