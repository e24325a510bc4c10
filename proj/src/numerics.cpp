#include "relaysim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaysim/errors.hpp"

namespace relaysim {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void check_tolerance(const Tolerance& tol) {
  if (!(tol.rel > 0.0) && !(tol.abs > 0.0))
    throw std::invalid_argument("Tolerance: rel or abs must be positive");
  if (tol.max_iter < 1) throw std::invalid_argument("Tolerance: max_iter must be >= 1");
}

// Alternating series E1(x) = -gamma - ln(x) + sum_{k>=1} (-1)^(k+1) x^k / (k k!).
double e1_series(double x) {
  double sum = 0.0;
  double pow_term = 1.0;  // x^k / k!
  for (int k = 1; k <= 60; ++k) {
    pow_term *= x / k;
    const double add = pow_term / k;
    sum += (k & 1) ? add : -add;
    if (add < 1e-17 * (std::fabs(sum) + 1.0)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))),
// evaluated with the modified Lentz scheme.
double e1_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x);
}

struct AdaptiveState {
  const std::function<double(double)>* f;
  double unresolved = 0.0;  // worst residual left behind by a depth cutoff
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(AdaptiveState& st, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    st.unresolved = std::max(st.unresolved, std::fabs(delta));
    return left + right;
  }
  return adapt(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate_segment(AdaptiveState& st, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = (*st.f)(a);
  const double fb = (*st.f)(b);
  const double fm = (*st.f)(m);
  const double whole = simpson(fa, fm, fb, b - a);
  const double seg_tol = std::max(tol * std::fabs(whole), 1e-305);
  return adapt(st, a, fa, b, fb, m, fm, whole, seg_tol, 48);
}

}  // namespace

double exp_integral_e1(double x) {
  if (std::isnan(x) || x <= 0.0)
    throw std::domain_error("exp_integral_e1: argument must be positive");
  if (std::isinf(x)) return 0.0;
  return x < 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double k_of_tau(double tau) {
  if (std::isnan(tau) || tau <= 0.0)
    throw std::domain_error("k_of_tau: argument must be positive");
  return exp_integral_e1(0.5 * tau);
}

double integrate_tail(const std::function<double(double)>& f, double lower,
                      const Tolerance& tol) {
  check_tolerance(tol);
  if (!std::isfinite(lower)) throw std::domain_error("integrate_tail: lower must be finite");

  AdaptiveState st{&f};
  const double rel = tol.rel > 0.0 ? tol.rel : 1e-12;
  // Doubling segments cover the half-line; log-scale widths keep the early
  // segments well resolved when lower is tiny.
  double a = lower;
  double width = lower > 0.0 ? lower : 1.0;
  double total = 0.0;
  int quiet_segments = 0;
  const int max_segments = std::max(64, tol.max_iter);
  for (int k = 0; k < max_segments; ++k) {
    const double b = a + width;
    const double seg = integrate_segment(st, a, b, rel);
    total += seg;
    a = b;
    width *= 2.0;
    const double floor = std::max(tol.abs, rel * std::fabs(total));
    quiet_segments = std::fabs(seg) <= floor ? quiet_segments + 1 : 0;
    if (quiet_segments >= 2 && k >= 2) {
      if (st.unresolved > std::max(floor, 1e3 * rel * std::fabs(total)))
        throw IntegrationError("integrate_tail: local refinement exhausted", total);
      return total;
    }
  }
  throw IntegrationError("integrate_tail: segment budget exhausted", total);
}

double bisect(const std::function<double(double)>& g, double lo, double hi,
              const Tolerance& tol) {
  check_tolerance(tol);
  if (!(lo <= hi)) throw std::invalid_argument("bisect: lo must not exceed hi");
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw BracketError("bisect: g(lo) and g(hi) have the same sign");

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < tol.max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::fabs(gm) <= tol.abs) return mid;
    if (hi - lo <= tol.rel * std::fabs(mid)) return mid;
    if ((gm > 0.0) == (ghi > 0.0)) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return mid;
}

}  // namespace relaysim
