#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pleatlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, NonIntegerExponent, NegativeExponent };

  ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected,
             const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// A parameter used by an expression has no value.
class UnboundParameter : public Error {
 public:
  explicit UnboundParameter(const std::string& name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// ln of a non-positive value, division by zero, non-finite result.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OffSurfaceError : public Error {
 public:
  using Error::Error;
};

/// |F_y| dropped below the chart threshold; the surface is not a graph over (x,p).
class ChartBreakdown : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Locus tracing failed (corrector divergence, singular Jacobian, non-curve locus).
class TraceError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

/// A genericity condition fails within the classification margin.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Oracle or configuration parameter outside its admissible range.
class InadmissibleParameter : public Error {
 public:
  using Error::Error;
};

}  // namespace pleatlab
