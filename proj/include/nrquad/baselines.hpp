#pragma once

// Classical composite rules on uniform partitions, an adaptive Simpson
// reference integral, and error statistics.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "nrquad/expression.hpp"
#include "nrquad/quadrature.hpp"

namespace nrq {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double sample(const Expression& f, double x) {
  const double v = evaluate(f, x);
  if (!std::isfinite(v)) throw QuadratureError("non-finite value f(" + format_real(x) + ") = " + format_real(v));
  return v;
}

inline void check_panels(const Interval& interval, int n) {
  interval.check();
  if (n < 1) throw std::invalid_argument("panel count must be positive");
}

}  // namespace detail

inline double left_riemann(const Expression& f, const Interval& interval, int n) {
  detail::check_panels(interval, n);
  const double h = interval.width() / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += detail::sample(f, interval.a + i * h);
  return h * sum;
}

inline double right_riemann(const Expression& f, const Interval& interval, int n) {
  detail::check_panels(interval, n);
  const double h = interval.width() / n;
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) sum += detail::sample(f, i == n ? interval.b : interval.a + i * h);
  return h * sum;
}

inline double midpoint(const Expression& f, const Interval& interval, int n) {
  detail::check_panels(interval, n);
  const double h = interval.width() / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += detail::sample(f, interval.a + (i + 0.5) * h);
  return h * sum;
}

inline double trapezoid(const Expression& f, const Interval& interval, int n) {
  detail::check_panels(interval, n);
  const double h = interval.width() / n;
  double sum = 0.5 * detail::sample(f, interval.a);
  for (int i = 1; i < n; ++i) sum += detail::sample(f, interval.a + i * h);
  sum += 0.5 * detail::sample(f, interval.b);
  return h * sum;
}

/// Composite Simpson; n is the number of subintervals and must be even.
inline double simpson(const Expression& f, const Interval& interval, int n) {
  detail::check_panels(interval, n);
  if (n % 2 != 0) throw std::invalid_argument("Simpson's rule needs an even panel count, got " + std::to_string(n));
  const double h = interval.width() / n;
  double sum = detail::sample(f, interval.a);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * detail::sample(f, interval.a + i * h);
  sum += detail::sample(f, interval.b);
  return h / 3.0 * sum;
}

namespace detail {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

inline SimpsonPanel simpson_panel(const Expression& f, double a, double fa, double b, double fb) {
  const double m = 0.5 * (a + b);
  const double fm = sample(f, m);
  return {a, m, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
}

inline double adaptive_simpson(const Expression& f, const SimpsonPanel& p, double tol, int depth) {
  if (depth > 50) throw QuadratureError("adaptive Simpson exceeded depth 50 on [" + format_real(p.a) + ", " +
                                        format_real(p.b) + "]");
  const SimpsonPanel left = simpson_panel(f, p.a, p.fa, p.m, p.fm);
  const SimpsonPanel right = simpson_panel(f, p.m, p.fm, p.b, p.fb);
  const double delta = left.whole + right.whole - p.whole;
  if (std::fabs(delta) <= 15.0 * tol) return left.whole + right.whole + delta / 15.0;
  return adaptive_simpson(f, left, 0.5 * tol, depth + 1) + adaptive_simpson(f, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// High-accuracy oracle integral by adaptive Simpson bisection.
inline double reference_integral(const Expression& f, const Interval& interval, double tol = 1e-10) {
  interval.check();
  if (!(tol > 0)) throw std::invalid_argument("reference tolerance must be positive");
  const double fa = detail::sample(f, interval.a);
  const double fb = detail::sample(f, interval.b);
  return detail::adaptive_simpson(f, detail::simpson_panel(f, interval.a, fa, interval.b, fb), tol, 0);
}

struct ErrorStats {
  double approx = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  std::optional<double> rel_error_pct;  // undefined when reference == 0
};

inline ErrorStats error_stats(double approx, double reference) {
  ErrorStats s{approx, reference, std::fabs(reference - approx), std::nullopt};
  if (reference != 0.0) s.rel_error_pct = 100.0 * s.abs_error / std::fabs(reference);
  return s;
}

}  // namespace nrq
