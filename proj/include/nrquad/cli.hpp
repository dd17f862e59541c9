#pragma once

// Command-line front end: `integrate`, `compare` and `trace`.
//
// Exit statuses:
//   0  success (including budget-exhausted results and failed compare rows)
//   1  usage or expression parse error
//   2  validation of the rule's hypotheses failed
//   3  iteration error (vanishing derivative, non-finite value)

#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrquad/baselines.hpp"
#include "nrquad/expression.hpp"
#include "nrquad/quadrature.hpp"
#include "nrquad/report.hpp"
#include "nrquad/rootfind.hpp"

namespace nrq::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_precondition = 2, exit_iteration = 3 };

inline const std::vector<std::string> all_methods{"nr",           "midpoint",      "trapezoid",
                                                  "left-riemann", "right-riemann", "simpson"};

struct Options {
  std::string expr;
  double lower = 0.0;
  double upper = 0.0;
  double tol_x = 1e-6;
  std::optional<double> tol_f;
  int max_iter = 100;
  bool closing_triangle = false;
  bool no_validate = false;
  std::string format = "table";
  int panels = 3;
  std::string methods;
};

namespace detail {

inline void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--expr", o.expr, "integrand f(x), e.g. \"2*x^2+3*x+1\"")->required();
  cmd.add_option("--lower", o.lower, "lower limit a (the root of f)")->required();
  cmd.add_option("--upper", o.upper, "upper limit b (the Newton start point)")->required();
  cmd.add_option("--tol-x", o.tol_x, "stop when |x_k - a| <= tol")->capture_default_str();
  cmd.add_option("--tol-f", o.tol_f, "stop when |f(x_k)| <= tol (default 1e-9*max(1,|f(b)|))");
  cmd.add_option("--max-iter", o.max_iter, "Newton iteration budget")->capture_default_str();
  cmd.add_flag("--closing-triangle", o.closing_triangle, "add the triangle between the last iterate and a");
  cmd.add_flag("--no-validate", o.no_validate, "skip the monotonicity/root checks");
  cmd.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
}

inline NrQuadSettings settings_from(const Options& o) {
  NrQuadSettings s;
  s.tol_x = o.tol_x;
  s.tol_f = o.tol_f;
  s.max_iter = o.max_iter;
  s.closing_triangle = o.closing_triangle;
  s.validate = !o.no_validate;
  return s;
}

inline std::string nr_summary(const Options& o) {
  std::string s = "tol_x=" + format_real(o.tol_x);
  if (o.tol_f) s += " tol_f=" + format_real(*o.tol_f);
  s += " max_iter=" + std::to_string(o.max_iter);
  s += o.closing_triangle ? " closing=on" : " closing=off";
  return s;
}

inline std::vector<std::string> split_methods(const std::string& text) {
  if (text.empty()) return all_methods;
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (std::find(all_methods.begin(), all_methods.end(), name) == all_methods.end())
      throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
    if (!seen.insert(name).second) throw CLI::ValidationError("--methods", "duplicate method '" + name + "'");
    out.push_back(name);
  }
  if (out.empty()) throw CLI::ValidationError("--methods", "no methods given");
  return out;
}

struct Problem {
  Expression f;
  Interval interval;
};

inline Problem load_problem(const Options& o) {
  Problem p{parse(o.expr), {o.lower, o.upper}};
  p.interval.check();
  return p;
}

inline ComparisonReport compare(const Options& o, const Problem& p) {
  const std::vector<std::string> methods = split_methods(o.methods);
  if (o.panels < 1) throw std::invalid_argument("--panels must be positive");

  ComparisonReport report;
  report.expression = o.expr;
  report.interval = p.interval;
  report.reference = reference_integral(p.f, p.interval, 1e-10);

  const std::string n_text = "n=" + std::to_string(o.panels);
  for (const std::string& m : methods) {
    std::string settings = m == "nr" ? nr_summary(o) : n_text;
    try {
      double value = 0.0;
      if (m == "nr") {
        const QuadResult r = nr_integrate(p.f, p.interval, settings_from(o));
        report.nr_details =
            NrDetails{r.panels.size(), r.residual_gap, std::string(to_string(r.trace.termination))};
        value = r.value;
      } else if (m == "midpoint") {
        value = midpoint(p.f, p.interval, o.panels);
      } else if (m == "trapezoid") {
        value = trapezoid(p.f, p.interval, o.panels);
      } else if (m == "left-riemann") {
        value = left_riemann(p.f, p.interval, o.panels);
      } else if (m == "right-riemann") {
        value = right_riemann(p.f, p.interval, o.panels);
      } else if (m == "simpson") {
        const int n = o.panels % 2 == 0 ? o.panels : o.panels + 1;
        settings = "n=" + std::to_string(n);
        value = simpson(p.f, p.interval, n);
      }
      report.rows.push_back(make_row(m, value, report.reference, settings));
    } catch (const std::exception& e) {
      report.rows.push_back(make_error_row(m, e.what(), settings));
    }
  }
  return report;
}

}  // namespace detail

/// Runs the tool on argv-style arguments (without the program name). Reports
/// go to out, one-line diagnostics to err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton-Raphson trapezoid quadrature and classical baselines", "nrquad"};
  app.require_subcommand(1);

  Options o;
  CLI::App* integrate = app.add_subcommand("integrate", "approximate the integral with Newton-Raphson panels");
  CLI::App* compare = app.add_subcommand("compare", "compare the rule with classical baselines");
  CLI::App* trace = app.add_subcommand("trace", "emit the Newton iterates and panel areas");
  for (CLI::App* cmd : {integrate, compare, trace}) detail::add_common(*cmd, o);
  compare->add_option("--panels", o.panels, "subintervals for the baseline rules")->capture_default_str();
  compare->add_option("--methods", o.methods, "comma-separated subset of: nr,midpoint,trapezoid,left-riemann,right-riemann,simpson");

  std::vector<std::string> argv_storage{"nrquad"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  const Format format = *parse_format(o.format);
  try {
    const detail::Problem p = detail::load_problem(o);
    if (compare->parsed()) {
      out << render_report(detail::compare(o, p), format);
    } else {
      const QuadResult r = nr_integrate(p.f, p.interval, detail::settings_from(o));
      out << (trace->parsed() ? render_trace(r, o.expr, p.interval, format)
                              : render_result(r, o.expr, p.interval, format));
    }
    return exit_ok;
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << '\n';
    return exit_precondition;
  } catch (const IterationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_iteration;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << '\n';
    return exit_iteration;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace nrq::cli
