#pragma once

// Newton-Raphson quadrature.
//
// For an increasing f with f(a) = 0, the Newton iterates started at x0 = b
// walk down towards a. Each step x_k -> x_{k+1} has width f(x_k)/f'(x_k),
// and the trapezoid over it has area
//
//     A_k = 1/2 * f(x_k)/f'(x_k) * (f(x_k) + f(x_{k+1})).
//
// The integral over [a, b] is approximated by the sum of these panels. The
// last panel is nearly a triangle because f(x_{n+1}) ~ f(a) = 0.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nrquad/expression.hpp"
#include "nrquad/rootfind.hpp"

namespace nrq {

/// Integration bounds; a is the root the iterates approach, b the start.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double width() const { return b - a; }

  void check() const {
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("interval bounds must be finite");
    if (!(a < b)) throw std::invalid_argument("interval requires lower < upper");
  }
};

struct NrQuadSettings {
  double tol_x = 1e-6;
  std::optional<double> tol_f;  // defaults to 1e-9 * max(1, |f(b)|)
  int max_iter = 100;
  bool closing_triangle = false;
  bool validate = true;
};

struct Panel {
  double x_k = 0.0;
  double width = 0.0;  // f(x_k) / f'(x_k)
  double area = 0.0;
};

enum class QuadStatus { ok, clamped, budget_exhausted };

inline std::string_view to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::ok: return "ok";
    case QuadStatus::clamped: return "clamped";
    case QuadStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct QuadResult {
  double value = 0.0;
  std::vector<Panel> panels;
  double closing_area = 0.0;
  double residual_gap = 0.0;  // |x_last - a|
  NewtonTrace trace;
  QuadStatus status = QuadStatus::ok;
};

struct ValidationReport {
  bool monotone_increasing = false;
  bool root_at_a = false;
  bool derivative_positive_at_b = false;
  int samples = 0;
  std::vector<std::string> messages;

  bool passed() const { return monotone_increasing && root_at_a && derivative_positive_at_b; }
};

class PreconditionViolated : public std::runtime_error {
 public:
  explicit PreconditionViolated(ValidationReport report)
      : std::runtime_error(describe(report)), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  static std::string describe(const ValidationReport& r) {
    std::string msg = "precondition violated";
    for (std::size_t i = 0; i < r.messages.size(); ++i) msg += (i == 0 ? ": " : "; ") + r.messages[i];
    return msg;
  }

  ValidationReport report_;
};

/// Area of the trapezoid between x_k and its Newton successor.
inline double panel_area(double f_k, double df_k, double f_next) {
  return 0.5 * (f_k / df_k) * (f_k + f_next);
}

inline constexpr int validation_samples = 64;

/// Sampled check of the rule's hypotheses: f nondecreasing on [a, b],
/// f(a) ~ 0, f'(b) > 0. Heuristic, not a proof of monotonicity.
inline ValidationReport validate_problem(const Expression& f, const Interval& interval) {
  interval.check();
  ValidationReport report;
  report.samples = validation_samples;

  const double h = interval.width() / (validation_samples - 1);
  report.monotone_increasing = true;
  double prev = evaluate(f, interval.a);
  for (int i = 1; i < validation_samples; ++i) {
    const double x = i == validation_samples - 1 ? interval.b : interval.a + i * h;
    const double fx = evaluate(f, x);
    if (!std::isfinite(prev) || !std::isfinite(fx) || fx < prev) {
      report.monotone_increasing = false;
      report.messages.push_back("f is not nondecreasing near x = " + format_real(x));
      break;
    }
    prev = fx;
  }

  const double fa = evaluate(f, interval.a);
  const double fb = evaluate(f, interval.b);
  const double scale = std::isfinite(fb) ? std::fmax(1.0, std::fabs(fb)) : 1.0;
  report.root_at_a = std::isfinite(fa) && std::fabs(fa) <= 1e-6 * scale;
  if (!report.root_at_a) report.messages.push_back("f(a) = " + format_real(fa) + " is not a root");

  const double dfb = evaluate(simplify(differentiate(f)), interval.b);
  report.derivative_positive_at_b = dfb > 0;
  if (!report.derivative_positive_at_b) report.messages.push_back("f'(b) = " + format_real(dfb) + " is not positive");
  return report;
}

/// Approximates the integral of f over [a, b] with Newton-Raphson trapezoid
/// panels.
///
/// Throws PreconditionViolated when validation is enabled and fails, and
/// IterationError when the iteration hits a vanishing derivative or a
/// non-finite value. Running out of iterations is reported through status.
inline QuadResult nr_integrate(const Expression& f, const Interval& interval, const NrQuadSettings& settings = {}) {
  interval.check();
  if (!(settings.tol_x > 0) || (settings.tol_f && !(*settings.tol_f > 0)))
    throw std::invalid_argument("tolerances must be strictly positive");
  if (settings.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  const Expression df = simplify(differentiate(f));
  StoppingCriteria stop = StoppingCriteria::defaults_for(f, interval.b);
  stop.target = interval.a;
  stop.tol_x = settings.tol_x;
  if (settings.tol_f) stop.tol_f = *settings.tol_f;
  stop.max_iter = settings.max_iter;

  // Without a tangent at b there is nothing to validate against.
  newton_step(f, df, interval.b, stop.derivative_epsilon);

  if (settings.validate) {
    ValidationReport report = validate_problem(f, interval);
    if (!report.passed()) throw PreconditionViolated(std::move(report));
  }

  QuadResult result;
  result.trace = newton_iterate(f, df, interval.b, stop);
  const NewtonTrace& trace = result.trace;
  switch (trace.termination) {
    case Termination::nonfinite_value:
    case Termination::derivative_vanished: {
      const double x = trace.final_x;
      throw IterationError(trace.termination, x,
                           std::string(to_string(trace.termination)) + " at x = " + format_real(x) + " after " +
                               std::to_string(trace.steps.size()) + " steps");
    }
    case Termination::overshoot_clamped: result.status = QuadStatus::clamped; break;
    case Termination::max_iterations:
    case Termination::step_small: result.status = QuadStatus::budget_exhausted; break;
    default: result.status = QuadStatus::ok; break;
  }

  const std::size_t n = trace.steps.size();
  result.panels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NewtonStep& s = trace.steps[i];
    double f_next = 0.0;
    if (i + 1 < n)
      f_next = trace.steps[i + 1].f_k;
    else if (result.status == QuadStatus::clamped)
      f_next = evaluate(f, interval.a);
    else
      f_next = evaluate(f, s.x_next);
    result.panels.push_back({s.x_k, s.step, panel_area(s.f_k, s.df_k, f_next)});
  }

  const double x_last = trace.final_x;
  if (settings.closing_triangle) result.closing_area = 0.5 * (x_last - interval.a) * evaluate(f, x_last);
  result.residual_gap = std::fabs(x_last - interval.a);

  double total = 0.0;
  for (const Panel& p : result.panels) total += p.area;
  result.value = total + result.closing_area;
  return result;
}

}  // namespace nrq
