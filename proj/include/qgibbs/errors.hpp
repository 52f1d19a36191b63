#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qgibbs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A full conditional was requested given an event of probability zero.
class ZeroConditioningEvent : public Error {
 public:
  ZeroConditioningEvent(int node, std::vector<int> configuration);
  int node() const { return node_; }
  const std::vector<int>& configuration() const { return configuration_; }

 private:
  int node_;
  std::vector<int> configuration_;
};

/// Two eigenvalues of modulus ~1: the chain is reducible or periodic.
class DegenerateTopEigenvalue : public Error {
 public:
  using Error::Error;
};

/// The leading eigenvalue of a kernel is not 1.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

class SingularPi : public Error {
 public:
  using Error::Error;
};

/// φ_j ≈ 0 for j ≠ 0, so sin φ_j cannot be divided by.
class DegeneratePhase : public Error {
 public:
  using Error::Error;
};

class UnsupportedCardinality : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed network or gate-list input. `field` names the offending entry.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace qgibbs
