#pragma once

#include <stdexcept>
#include <string>

namespace bpnld {

// Base for all domain-level failures (CLI maps these to exit code 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A coefficient required in a denominator or square root evaluated to
// (numerically) zero or a non-finite value.
class DegenerateCoefficients : public Error {
 public:
  DegenerateCoefficients(const std::string& symbol, const std::string& why)
      : Error("degenerate coefficient '" + symbol + "': " + why),
        symbol_(symbol) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

// Requested quadrature resolution cannot resolve the oscillatory phase at the
// configured oscillation guard.
class RefusedUnderresolved : public Error {
 public:
  using Error::Error;
};

// The contraction returned a value whose imaginary part is too large relative
// to the real part; the integrand should be Hermitian-symmetric.
class NonHermitianResidual : public Error {
 public:
  using Error::Error;
};

// Spot-size fit could not bracket an interior minimum.
class FitFailed : public Error {
 public:
  using Error::Error;
};

// Configuration file problems (CLI maps these to exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bpnld
