#pragma once

#include <stdexcept>
#include <string>

namespace relaysim {

/// No power assignment can satisfy the SNR constraint with the given gains.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// bisect() was handed endpoints whose function values share a sign.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature did not converge; carries the partial estimate.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double partial)
      : std::runtime_error(what), partial_estimate(partial) {}

  double partial_estimate;
};

}  // namespace relaysim
