#pragma once

// Newton-Raphson iteration with a full iterate trace.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nrquad/expression.hpp"

namespace nrq {

enum class Termination {
  reached_target,
  residual_small,
  step_small,
  max_iterations,
  derivative_vanished,
  nonfinite_value,
  overshoot_clamped,
};

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_target: return "reached-target";
    case Termination::residual_small: return "residual-small";
    case Termination::step_small: return "step-small";
    case Termination::max_iterations: return "max-iterations";
    case Termination::derivative_vanished: return "derivative-vanished";
    case Termination::nonfinite_value: return "nonfinite-value";
    case Termination::overshoot_clamped: return "overshoot-clamped";
  }
  return "?";
}

/// One tangent step: x_next is where the tangent at (x_k, f_k) crosses zero.
struct NewtonStep {
  double x_k = 0.0;
  double f_k = 0.0;
  double df_k = 0.0;
  double step = 0.0;    // f_k / df_k
  double x_next = 0.0;  // x_k - step
};

struct NewtonTrace {
  std::vector<NewtonStep> steps;
  Termination termination = Termination::max_iterations;
  double final_x = 0.0;
};

struct StoppingCriteria {
  std::optional<double> target;
  double tol_x = 1e-6;
  double tol_f = 1e-9;
  double tol_step = 1e-12;
  int max_iter = 100;
  double derivative_epsilon = 1e-12;

  /// Defaults with the residual tolerance scaled by |f(x0)|.
  static StoppingCriteria defaults_for(const Expression& f, double x0) {
    StoppingCriteria s;
    const double f0 = evaluate(f, x0);
    s.tol_f = 1e-9 * (std::isfinite(f0) ? std::fmax(1.0, std::fabs(f0)) : 1.0);
    return s;
  }

  void check() const {
    if (!(tol_x > 0) || !(tol_f > 0) || !(tol_step > 0) || !(derivative_epsilon > 0))
      throw std::invalid_argument("stopping tolerances must be strictly positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (target && !std::isfinite(*target)) throw std::invalid_argument("target must be finite");
  }
};

/// Raised by newton_step when the tangent has no usable intercept.
class IterationError : public std::runtime_error {
 public:
  IterationError(Termination reason, double x, const std::string& message)
      : std::runtime_error(message), reason_(reason), x_(x) {}

  Termination reason() const { return reason_; }
  double x() const { return x_; }

 private:
  Termination reason_;
  double x_;
};

inline NewtonStep newton_step(const Expression& f, const Expression& df, double x,
                              double derivative_epsilon = 1e-12) {
  const double fx = evaluate(f, x);
  const double dfx = evaluate(df, x);
  if (!std::isfinite(x) || !std::isfinite(fx) || !std::isfinite(dfx))
    throw IterationError(Termination::nonfinite_value, x,
                         "non-finite value at x = " + format_real(x) + " (f = " + format_real(fx) +
                             ", f' = " + format_real(dfx) + ")");
  if (std::fabs(dfx) <= derivative_epsilon)
    throw IterationError(Termination::derivative_vanished, x,
                         "derivative vanished at x = " + format_real(x) + " (f' = " + format_real(dfx) + ")");
  NewtonStep s;
  s.x_k = x;
  s.f_k = fx;
  s.df_k = dfx;
  s.step = fx / dfx;
  s.x_next = x - s.step;
  return s;
}

/// Iterates from x0 until the first satisfied stopping condition. Checks run
/// in this order after every step: reached-target, residual-small,
/// step-small, overshoot-clamped, max-iterations. A failed step ends the
/// trace with nonfinite-value or derivative-vanished and is not recorded.
inline NewtonTrace newton_iterate(const Expression& f, const Expression& df, double x0,
                                  const StoppingCriteria& stop) {
  stop.check();
  NewtonTrace trace;
  trace.final_x = x0;
  const bool descending = stop.target && x0 > *stop.target;

  double x = x0;
  for (;;) {
    NewtonStep s;
    try {
      s = newton_step(f, df, x, stop.derivative_epsilon);
    } catch (const IterationError& err) {
      trace.termination = err.reason();
      return trace;
    }
    trace.steps.push_back(s);
    x = s.x_next;
    trace.final_x = x;

    if (stop.target && std::fabs(x - *stop.target) <= stop.tol_x) {
      trace.termination = Termination::reached_target;
      return trace;
    }
    if (std::fabs(evaluate(f, x)) <= stop.tol_f) {
      trace.termination = Termination::residual_small;
      return trace;
    }
    if (std::fabs(s.step) <= stop.tol_step) {
      trace.termination = Termination::step_small;
      return trace;
    }
    if (descending && x < *stop.target) {
      trace.final_x = *stop.target;
      trace.termination = Termination::overshoot_clamped;
      return trace;
    }
    if (trace.steps.size() >= static_cast<std::size_t>(stop.max_iter)) {
      trace.termination = Termination::max_iterations;
      return trace;
    }
  }
}

}  // namespace nrq
