#pragma once

#include <functional>

namespace relaysim {

struct Tolerance {
  double rel = 1e-12;
  double abs = 0.0;
  int max_iter = 200;
};

inline constexpr Tolerance kSpecialFunctionTol{1e-12, 0.0, 200};
inline constexpr Tolerance kRootFindingTol{1e-9, 1e-12, 200};

/// E1(x) = integral of exp(-t)/t over (x, inf), x > 0.
/// Power series below 1, continued fraction from 1 up; relative error <= 1e-12.
double exp_integral_e1(double x);

/// K(tau) = integral of exp(-t/2)/t over (tau, inf) = E1(tau/2), tau > 0.
double k_of_tau(double tau);

/// Adaptive quadrature of f over (lower, inf) for integrands that decay at
/// least exponentially. Independent of the closed forms it cross-checks.
double integrate_tail(const std::function<double(double)>& f, double lower,
                      const Tolerance& tol = kSpecialFunctionTol);

/// Bisection for a monotone g with a sign change on [lo, hi]. Stops when
/// |g(mid)| <= tol.abs or the interval width drops below tol.rel * |mid|.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              const Tolerance& tol = kRootFindingTol);

}  // namespace relaysim
