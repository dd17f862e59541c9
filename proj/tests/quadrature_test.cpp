#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nrquad/baselines.hpp"
#include "nrquad/quadrature.hpp"
#include "support.hpp"

namespace nrq {
namespace {

const Interval kExampleInterval{-0.5, 1.0};

Expression example() { return parse("2*x^2+3*x+1"); }

NrQuadSettings with_tol(double tol_x, bool closing = false) {
  NrQuadSettings s;
  s.tol_x = tol_x;
  s.closing_triangle = closing;
  return s;
}

TEST(PanelArea, FirstWorkedExamplePanel) {
  EXPECT_NEAR(panel_area(6, 7, 1.469388), 3.201166, 1e-6);
  EXPECT_NEAR(panel_area(6, 7, 72.0 / 49.0), 3.2011661807580176, 1e-15);
}

TEST(PanelArea, ZeroPanel) { EXPECT_EQ(panel_area(0, 3.5, 0), 0.0); }

TEST(PanelArea, TriangleUnderLine) {
  // f = m x with f(b) = c: the panel from b to 0 is the whole triangle.
  const double m = 2.5;
  const double c = 7.5;
  EXPECT_DOUBLE_EQ(panel_area(c, m, 0), c * c / (2 * m));
}

TEST(Validate, WorkedExamplePasses) {
  const ValidationReport r = validate_problem(example(), kExampleInterval);
  EXPECT_TRUE(r.monotone_increasing);
  EXPECT_TRUE(r.root_at_a);
  EXPECT_TRUE(r.derivative_positive_at_b);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.samples, 64);
  EXPECT_TRUE(r.messages.empty());
}

TEST(Validate, IdentityPasses) { EXPECT_TRUE(validate_problem(parse("x"), {0, 1}).passed()); }

TEST(Validate, DecreasingLine) {
  const ValidationReport r = validate_problem(parse("-x"), {0, 1});
  EXPECT_FALSE(r.monotone_increasing);
  EXPECT_TRUE(r.root_at_a);
  EXPECT_FALSE(r.derivative_positive_at_b);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.messages.empty());
}

TEST(Validate, RootNotAtLowerLimit) {
  const ValidationReport r = validate_problem(parse("x"), {1, 2});
  EXPECT_TRUE(r.monotone_increasing);
  EXPECT_FALSE(r.root_at_a);
}

TEST(NrIntegrate, WorkedExampleAtCoarseTolerance) {
  const QuadResult r = nr_integrate(example(), kExampleInterval, with_tol(0.01));
  ASSERT_EQ(r.panels.size(), 4u);
  EXPECT_EQ(r.status, QuadStatus::ok);
  EXPECT_EQ(r.trace.termination, Termination::reached_target);
  EXPECT_NEAR(r.value, 3.6100, 5e-4);
  EXPECT_NEAR(r.residual_gap, 0.00506, 1e-5);
  EXPECT_EQ(r.closing_area, 0.0);

  // Frozen from a hand-coded Newton/trapezoid loop (tests/support.hpp).
  const double areas[] = {3.201166180758017, 0.3719179941690963, 0.03519235370363538, 0.0016920198458069552};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(r.panels[k].area, areas[k], 1e-14) << k;
  EXPECT_NEAR(r.value, 3.609968548476556, 1e-14);

  const auto oracle = testing::brute_force_nr([](double x) { return 2 * x * x + 3 * x + 1; },
                                              [](double x) { return 4 * x + 3; }, -0.5, 1.0, 0.01);
  EXPECT_NEAR(r.value, oracle.total, 1e-14);
}

TEST(NrIntegrate, RoundedTermsStayNearExactTotal) {
  // Terms built from iterates rounded to four places.
  const double rounded_terms = 0.5 * (6.0 / 7 * 7.466 + 1.466 / 3.568 * 1.8212 + 0.3552 / 1.96 * 0.4224 +
                                0.0672 / 1.24 * 0.0774);
  EXPECT_NEAR(rounded_terms, 3.6142, 1e-4);
  const QuadResult r = nr_integrate(example(), kExampleInterval, with_tol(0.01));
  EXPECT_NEAR(r.value, rounded_terms, 0.005);
}

TEST(NrIntegrate, IdentityIsOneExactPanel) {
  const QuadResult r = nr_integrate(parse("x"), {0, 1}, with_tol(0.3));
  ASSERT_EQ(r.panels.size(), 1u);
  EXPECT_EQ(r.value, 0.5);
  EXPECT_EQ(r.trace.termination, Termination::reached_target);
  EXPECT_EQ(r.residual_gap, 0.0);
}

TEST(NrIntegrate, FineToleranceOverestimatesByTrapezoidExcess) {
  const QuadResult r = nr_integrate(example(), kExampleInterval, with_tol(1e-9, true));
  EXPECT_GE(r.value, 3.375);
  // For f'' = 4 each trapezoid exceeds the integral by exactly h^3/3.
  double excess = 0.0;
  for (const Panel& p : r.panels) excess += p.width * p.width * p.width / 3;
  const double sliver = r.trace.final_x - kExampleInterval.a;
  excess += sliver * sliver * sliver / 3;
  EXPECT_NEAR(r.value, 3.375 + excess, 2e-4);
  EXPECT_NEAR(r.value, 3.375 + excess, 1e-12);
}

TEST(NrIntegrate, ValidationFailureThrows) {
  try {
    nr_integrate(parse("x^3-x"), {-1, 2});
    FAIL();
  } catch (const PreconditionViolated& e) {
    EXPECT_FALSE(e.report().monotone_increasing);
    EXPECT_TRUE(e.report().root_at_a);
  }
}

TEST(NrIntegrate, WithoutValidationRunsAsWritten) {
  NrQuadSettings s;
  s.validate = false;
  s.max_iter = 50;
  const QuadResult r = nr_integrate(parse("x^3-x"), {-1, 2}, s);
  EXPECT_FALSE(r.panels.empty());
  // Converges to the nearest root 1, not to a = -1.
  EXPECT_NEAR(r.trace.final_x, 1.0, 1e-6);
  EXPECT_EQ(r.status, QuadStatus::ok);
  EXPECT_EQ(r.trace.termination, Termination::residual_small);
}

TEST(NrIntegrate, ConstantIntegrandVanishingDerivative) {
  try {
    nr_integrate(parse("0*x+1"), {0, 1});
    FAIL();
  } catch (const IterationError& e) {
    EXPECT_EQ(e.reason(), Termination::derivative_vanished);
  }
}

TEST(NrIntegrate, NonFiniteDuringIterationThrows) {
  NrQuadSettings s;
  s.validate = false;
  try {
    // Iterates 2, 1, 0.5; f is NaN below 0.9.
    nr_integrate(parse("x^2+0*sqrt(x-0.9)"), {0, 2}, s);
    FAIL();
  } catch (const IterationError& e) {
    EXPECT_EQ(e.reason(), Termination::nonfinite_value);
  }
}

TEST(NrIntegrate, OvershootClampsFinalPanel) {
  const QuadResult r = nr_integrate(parse("sqrt(x+1)-1"), {0, 3}, with_tol(1e-9, true));
  EXPECT_EQ(r.status, QuadStatus::clamped);
  ASSERT_EQ(r.panels.size(), 1u);
  // Width keeps the Newton step (4); the far height is f(a) = 0.
  EXPECT_EQ(r.panels[0].width, 4.0);
  EXPECT_EQ(r.panels[0].area, 2.0);
  EXPECT_EQ(r.residual_gap, 0.0);
  EXPECT_EQ(r.closing_area, 0.0);
}

TEST(NrIntegrate, BudgetExhausted) {
  NrQuadSettings s;
  s.max_iter = 1;
  const QuadResult r = nr_integrate(example(), kExampleInterval, s);
  EXPECT_EQ(r.status, QuadStatus::budget_exhausted);
  EXPECT_EQ(r.panels.size(), 1u);
  EXPECT_NEAR(r.value, 3.201166, 1e-6);
}

TEST(NrIntegrate, RejectsBadArguments) {
  EXPECT_THROW(nr_integrate(example(), {1, -0.5}), std::invalid_argument);
  EXPECT_THROW(nr_integrate(example(), {-0.5, INFINITY}), std::invalid_argument);
  EXPECT_THROW(nr_integrate(example(), kExampleInterval, with_tol(0)), std::invalid_argument);
  NrQuadSettings s;
  s.max_iter = 0;
  EXPECT_THROW(nr_integrate(example(), kExampleInterval, s), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Properties

void expect_bookkeeping(const QuadResult& r) {
  double total = 0.0;
  for (const Panel& p : r.panels) total += p.area;
  ASSERT_EQ(r.value, total + r.closing_area);
  ASSERT_EQ(r.panels.size(), r.trace.steps.size());
  for (std::size_t k = 0; k < r.panels.size(); ++k) {
    const NewtonStep& s = r.trace.steps[k];
    ASSERT_EQ(r.panels[k].width, s.f_k / s.df_k);
    ASSERT_LE(std::fabs(r.panels[k].width * s.df_k - s.f_k), 1e-12 * std::fabs(s.f_k));
  }
}

TEST(NrQuadProperty, BookkeepingAndWidthIdentity) {
  const std::vector<std::pair<const char*, Interval>> problems{
      {"2*x^2+3*x+1", {-0.5, 1}}, {"x^2", {0, 2}}, {"exp(x)-1", {0, 1}}, {"x^3+x", {0, 1.5}},
      {"sqrt(x+1)-1", {0, 3}},    {"x", {0, 4}}};
  for (const auto& [text, interval] : problems)
    for (double tol : {0.1, 1e-3, 1e-8})
      for (bool closing : {false, true}) expect_bookkeeping(nr_integrate(parse(text), interval, with_tol(tol, closing)));
}

TEST(NrQuadProperty, AffineExactWithClosingTriangle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> slope(0.01, 50);
  std::uniform_real_distribution<double> upper(0.01, 20);
  for (int t = 0; t < 100; ++t) {
    const double m = slope(rng);
    const double b = upper(rng);
    const QuadResult r =
        nr_integrate(Expression::constant(m) * Expression::variable(), {0, b}, with_tol(1e-6, true));
    ASSERT_EQ(r.panels.size(), 1u);
    const double exact = m * b * b / 2;
    ASSERT_LE(std::fabs(r.value - exact), 4 * std::numeric_limits<double>::epsilon() * exact) << m << " " << b;
  }
}

TEST(NrQuadProperty, ConvexOverestimate) {
  const std::vector<std::pair<const char*, Interval>> problems{
      {"2*x^2+3*x+1", {-0.5, 1}}, {"x^2", {0, 2}}, {"exp(x)-1", {0, 1}}};
  for (const auto& [text, interval] : problems) {
    const Expression f = parse(text);
    const double exact = reference_integral(f, interval, 1e-12);
    for (double tol : {1e-2, 1e-5, 1e-8}) {
      const QuadResult r = nr_integrate(f, interval, with_tol(tol, true));
      EXPECT_GE(r.value, exact - 1e-12 * std::fabs(r.value)) << text << " tol " << tol;
    }
  }
}

TEST(NrQuadProperty, ResidualShrinksWithTolerance) {
  double previous = INFINITY;
  for (double tol : {0.5, 0.1, 0.01, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const QuadResult r = nr_integrate(example(), kExampleInterval, with_tol(tol));
    EXPECT_LE(r.residual_gap, previous) << tol;
    if (r.status == QuadStatus::ok && r.trace.termination == Termination::reached_target)
      EXPECT_LE(r.residual_gap, tol);
    previous = r.residual_gap;
  }
}

TEST(NrQuadProperty, PanelCountOnWorkedExample) {
  EXPECT_EQ(nr_integrate(example(), kExampleInterval, with_tol(0.01)).panels.size(), 4u);
  EXPECT_EQ(nr_integrate(example(), kExampleInterval, with_tol(0.01, true)).panels.size(), 4u);
}

}  // namespace
}  // namespace nrq
