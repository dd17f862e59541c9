#pragma once

// Test-only oracles: random expression trees, central differences and a
// hand-coded Newton/trapezoid loop that does not touch the library.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "nrquad/expression.hpp"

namespace nrq::testing {

/// Random well-formed trees over all node kinds, depth <= max_depth.
class TreeGenerator {
 public:
  explicit TreeGenerator(std::uint64_t seed) : rng_(seed) {}

  Expression operator()(int max_depth) { return make(max_depth); }

  /// Polynomial c0 + c1 x + ... with random degree <= max_degree.
  Expression polynomial(int max_degree) {
    const int degree = std::uniform_int_distribution<int>(1, max_degree)(rng_);
    Expression p = Expression::constant(coefficient());
    for (int k = 1; k <= degree; ++k)
      p = p + Expression::constant(coefficient()) * pow(Expression::variable(), Expression::constant(k));
    return p;
  }

  double coefficient() { return std::round(std::uniform_real_distribution<double>(-5, 5)(rng_) * 100) / 100; }

  double point(double lo = -3, double hi = 3) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& rng() { return rng_; }

 private:
  Expression leaf() {
    if (std::bernoulli_distribution(0.55)(rng_)) return Expression::variable();
    return Expression::constant(coefficient());
  }

  Expression make(int depth) {
    if (depth <= 1 || std::bernoulli_distribution(0.2)(rng_)) return leaf();
    switch (std::uniform_int_distribution<int>(0, 9)(rng_)) {
      case 0: return -make(depth - 1);
      case 1: return make(depth - 1) + make(depth - 1);
      case 2: return make(depth - 1) - make(depth - 1);
      case 3:
      case 4: return make(depth - 1) * make(depth - 1);
      case 5: return make(depth - 1) / make(depth - 1);
      case 6: {
        // Mostly small integer exponents; sometimes a variable exponent.
        if (std::bernoulli_distribution(0.75)(rng_))
          return pow(make(depth - 1), Expression::constant(std::uniform_int_distribution<int>(0, 4)(rng_)));
        return pow(make(depth - 1), make(depth - 1));
      }
      default: {
        const auto fn = static_cast<Function>(std::uniform_int_distribution<int>(0, 6)(rng_));
        return Expression::apply(fn, make(depth - 1));
      }
    }
  }

  std::mt19937_64 rng_;
};

inline double central_difference(const Expression& e, double x) {
  const double h = 1e-6 * std::fmax(1.0, std::fabs(x));
  return (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h);
}

/// The difference quotient itself is trustworthy at x: halving the step
/// changes it by well under the comparison tolerance.
inline bool difference_is_stable(const Expression& e, double x, double tol = 1e-6) {
  const double h = 1e-6 * std::fmax(1.0, std::fabs(x));
  const double coarse = (evaluate(e, x + 2 * h) - evaluate(e, x - 2 * h)) / (4 * h);
  const double fine = central_difference(e, x);
  return std::isfinite(coarse) && std::isfinite(fine) &&
         std::fabs(coarse - fine) <= tol * std::fmax(1.0, std::fabs(fine));
}

inline double relative_gap(double got, double want, double floor = 0.0) {
  return std::fabs(got - want) / std::fmax(floor, std::fabs(want));
}

/// Newton iterates and trapezoid panel sum computed with plain functions.
struct NewtonOracle {
  std::vector<double> iterates;
  std::vector<double> areas;
  double total = 0.0;
};

inline NewtonOracle brute_force_nr(const std::function<double(double)>& f, const std::function<double(double)>& df,
                                   double a, double b, double tol_x, int max_steps = 200) {
  NewtonOracle o;
  double x = b;
  o.iterates.push_back(x);
  for (int k = 0; k < max_steps; ++k) {
    const double width = f(x) / df(x);
    const double next = x - width;
    o.areas.push_back(0.5 * width * (f(x) + f(next)));
    o.total += o.areas.back();
    x = next;
    o.iterates.push_back(x);
    if (std::fabs(x - a) <= tol_x) break;
  }
  return o;
}

}  // namespace nrq::testing
