#pragma once

// Rendering of comparison reports, quadrature results and Newton traces as
// fixed-width tables, CSV and JSON. Reals in CSV and JSON use the shortest
// decimal form that reads back to the same double.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nrquad/baselines.hpp"
#include "nrquad/expression.hpp"
#include "nrquad/quadrature.hpp"

namespace nrq {

enum class Format { table, csv, json };

inline std::optional<Format> parse_format(std::string_view name) {
  if (name == "table") return Format::table;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  return std::nullopt;
}

struct ReportRow {
  std::string method;
  std::optional<double> value;  // empty when the method failed
  std::optional<double> abs_error;
  std::optional<double> rel_error_pct;
  std::string settings;
  std::optional<std::string> error;
};

struct NrDetails {
  std::size_t panel_count = 0;
  double residual_gap = 0.0;
  std::string termination;
};

struct ComparisonReport {
  std::string expression;
  Interval interval;
  double reference = 0.0;
  std::vector<ReportRow> rows;
  std::optional<NrDetails> nr_details;
};

/// Row for a method that produced a value, with errors from error_stats.
inline ReportRow make_row(std::string method, double value, double reference, std::string settings) {
  const ErrorStats s = error_stats(value, reference);
  return {std::move(method), value, s.abs_error, s.rel_error_pct, std::move(settings), std::nullopt};
}

inline ReportRow make_error_row(std::string method, std::string message, std::string settings) {
  return {std::move(method), std::nullopt, std::nullopt, std::nullopt, std::move(settings), std::move(message)};
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Percentages are cut, not rounded, to four decimals: 1.851852 -> "1.8518".
inline std::string truncated_pct(double v) {
  std::string s = fixed(v, 10);
  const std::size_t dot = s.find('.');
  return dot == std::string::npos ? s : s.substr(0, dot + 5);
}

inline std::string csv_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline nlohmann::json json_real(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> read_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("not a real number: '" + std::string(text) + "'");
  return v;
}

inline std::optional<double> json_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

enum class Align { left, right };

/// Columns separated by two spaces, widths fitted to the content, trailing
/// blanks trimmed.
inline std::string render_columns(const std::vector<std::vector<std::string>>& lines, const std::vector<Align>& align) {
  std::vector<std::size_t> width(align.size(), 0);
  for (const auto& cells : lines)
    for (std::size_t c = 0; c < cells.size() && c < width.size(); ++c) width[c] = std::max(width[c], cells[c].size());

  std::string out;
  for (const auto& cells : lines) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += "  ";
      const std::string& cell = cells[c];
      const std::size_t pad = c < width.size() && width[c] > cell.size() ? width[c] - cell.size() : 0;
      if (c < align.size() && align[c] == Align::right) line.append(pad, ' ');
      line += cell;
      if (c >= align.size() || align[c] == Align::left) line.append(pad, ' ');
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + '\n';
  }
  return out;
}

inline std::string interval_text(const Interval& i) {
  return "[" + format_real(i.a) + ", " + format_real(i.b) + "]";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Comparison reports

inline nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::json row{{"method", r.method},
                       {"value", detail::json_real(r.value)},
                       {"abs_error", detail::json_real(r.abs_error)},
                       {"rel_error_pct", detail::json_real(r.rel_error_pct)},
                       {"settings", r.settings}};
    if (r.error) row["error"] = *r.error;
    rows.push_back(std::move(row));
  }
  nlohmann::json details = nullptr;
  if (report.nr_details)
    details = {{"panel_count", report.nr_details->panel_count},
               {"residual_gap", report.nr_details->residual_gap},
               {"termination", report.nr_details->termination}};
  return {{"expression", report.expression},
          {"interval", {{"a", report.interval.a}, {"b", report.interval.b}}},
          {"reference", report.reference},
          {"rows", std::move(rows)},
          {"nr_details", std::move(details)}};
}

inline ComparisonReport comparison_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ComparisonReport report;
  report.expression = j.at("expression").get<std::string>();
  report.interval = {j.at("interval").at("a").get<double>(), j.at("interval").at("b").get<double>()};
  report.reference = j.at("reference").get<double>();
  for (const auto& r : j.at("rows")) {
    ReportRow row;
    row.method = r.at("method").get<std::string>();
    row.value = detail::json_optional(r, "value");
    row.abs_error = detail::json_optional(r, "abs_error");
    row.rel_error_pct = detail::json_optional(r, "rel_error_pct");
    row.settings = r.value("settings", std::string());
    if (r.contains("error")) row.error = r.at("error").get<std::string>();
    report.rows.push_back(std::move(row));
  }
  if (!j.at("nr_details").is_null()) {
    const auto& d = j.at("nr_details");
    report.nr_details = NrDetails{d.at("panel_count").get<std::size_t>(), d.at("residual_gap").get<double>(),
                                  d.at("termination").get<std::string>()};
  }
  return report;
}

inline constexpr std::string_view comparison_csv_header = "method,value,abs_error,rel_error_pct";

/// Reads the rows back from CSV written by render_report. Error rows come
/// back without a value.
inline std::vector<ReportRow> comparison_rows_from_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != comparison_csv_header) throw std::invalid_argument("missing CSV header");
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw std::invalid_argument("expected 4 CSV fields: " + line);
    ReportRow row;
    row.method = fields[0];
    row.value = detail::read_real(fields[1]);
    row.abs_error = detail::read_real(fields[2]);
    row.rel_error_pct = detail::read_real(fields[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Table row cells: method, value, abs_err, err_%, settings. Values use six
/// decimals and percentages four.
inline std::vector<std::string> table_cells(const ReportRow& r) {
  if (r.error) return {r.method, "error: " + *r.error};
  return {r.method, r.value ? detail::fixed(*r.value, 6) : "n/a", r.abs_error ? detail::fixed(*r.abs_error, 6) : "n/a",
          r.rel_error_pct ? detail::truncated_pct(*r.rel_error_pct) : "n/a", r.settings};
}

inline std::string render_report(const ComparisonReport& report, Format format) {
  switch (format) {
    case Format::json: return to_json(report).dump(2) + '\n';

    case Format::csv: {
      std::string out(comparison_csv_header);
      out += '\n';
      for (const ReportRow& r : report.rows)
        out += r.method + ',' + detail::csv_real(r.value) + ',' + detail::csv_real(r.abs_error) + ',' +
               detail::csv_real(r.rel_error_pct) + '\n';
      return out;
    }

    case Format::table: {
      std::string out = "expression: " + report.expression + '\n';
      out += "interval: " + detail::interval_text(report.interval) + '\n';
      out += "reference: " + detail::fixed(report.reference, 6) + '\n';
      std::vector<std::vector<std::string>> lines{{"method", "value", "abs_err", "err_%", "settings"}};
      std::vector<std::vector<std::string>> failures;
      for (const ReportRow& r : report.rows) (r.error ? failures : lines).push_back(table_cells(r));
      using detail::Align;
      out += detail::render_columns(lines, {Align::left, Align::right, Align::right, Align::right, Align::left});
      for (const auto& f : failures) out += f[0] + "  " + f[1] + '\n';
      if (report.nr_details)
        out += "nr: " + std::to_string(report.nr_details->panel_count) + " panels, residual gap " +
               format_real(report.nr_details->residual_gap) + ", " + report.nr_details->termination + '\n';
      return out;
    }
  }
  return {};
}

/// Only the data rows, aligned as in the full table. Used for single-row
/// rendering checks.
inline std::string render_rows(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> lines;
  for (const ReportRow& r : rows) lines.push_back(table_cells(r));
  using detail::Align;
  return detail::render_columns(lines, {Align::left, Align::right, Align::right, Align::right, Align::left});
}

// ---------------------------------------------------------------------------
// Quadrature results and traces

inline nlohmann::json to_json(const QuadResult& r, std::string_view expression, const Interval& interval) {
  nlohmann::json panels = nlohmann::json::array();
  for (const Panel& p : r.panels) panels.push_back({{"x_k", p.x_k}, {"width", p.width}, {"area", p.area}});
  return {{"expression", expression},
          {"interval", {{"a", interval.a}, {"b", interval.b}}},
          {"value", r.value},
          {"panels", std::move(panels)},
          {"closing_area", r.closing_area},
          {"residual_gap", r.residual_gap},
          {"status", to_string(r.status)},
          {"termination", to_string(r.trace.termination)}};
}

inline std::string render_result(const QuadResult& r, std::string_view expression, const Interval& interval,
                                 Format format) {
  switch (format) {
    case Format::json: return to_json(r, expression, interval).dump(2) + '\n';

    case Format::csv:
      return "value,panels,closing_area,residual_gap,status,termination\n" + format_real(r.value) + ',' +
             std::to_string(r.panels.size()) + ',' + format_real(r.closing_area) + ',' + format_real(r.residual_gap) +
             ',' + std::string(to_string(r.status)) + ',' + std::string(to_string(r.trace.termination)) + '\n';

    case Format::table: {
      std::string out = "expression: " + std::string(expression) + '\n';
      out += "interval: " + detail::interval_text(interval) + '\n';
      out += "value: " + detail::fixed(r.value, 6) + '\n';
      out += "panels: " + std::to_string(r.panels.size()) + '\n';
      out += "closing_area: " + detail::fixed(r.closing_area, 6) + '\n';
      out += "residual_gap: " + format_real(r.residual_gap) + '\n';
      out += "status: " + std::string(to_string(r.status)) + '\n';
      out += "termination: " + std::string(to_string(r.trace.termination)) + '\n';
      std::vector<std::vector<std::string>> lines{{"k", "x_k", "width", "area"}};
      for (std::size_t k = 0; k < r.panels.size(); ++k) {
        const Panel& p = r.panels[k];
        lines.push_back({std::to_string(k), detail::fixed(p.x_k, 6), detail::fixed(p.width, 6), detail::fixed(p.area, 6)});
      }
      using detail::Align;
      return out + detail::render_columns(lines, {Align::right, Align::right, Align::right, Align::right});
    }
  }
  return {};
}

inline constexpr std::string_view trace_csv_header = "index,x_k,f_k,df_k,step,area";

/// One record per Newton step with the panel it produced.
inline std::string render_trace(const QuadResult& r, std::string_view expression, const Interval& interval,
                                Format format) {
  const auto& steps = r.trace.steps;
  switch (format) {
    case Format::json: {
      nlohmann::json js = nlohmann::json::array();
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const NewtonStep& s = steps[k];
        js.push_back({{"index", k},
                      {"x_k", s.x_k},
                      {"f_k", s.f_k},
                      {"df_k", s.df_k},
                      {"step", s.step},
                      {"x_next", s.x_next},
                      {"area", r.panels[k].area}});
      }
      nlohmann::json doc{{"expression", expression},
                         {"interval", {{"a", interval.a}, {"b", interval.b}}},
                         {"steps", std::move(js)},
                         {"termination", to_string(r.trace.termination)}};
      return doc.dump(2) + '\n';
    }

    case Format::csv: {
      std::string out(trace_csv_header);
      out += '\n';
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const NewtonStep& s = steps[k];
        out += std::to_string(k) + ',' + format_real(s.x_k) + ',' + format_real(s.f_k) + ',' + format_real(s.df_k) +
               ',' + format_real(s.step) + ',' + format_real(r.panels[k].area) + '\n';
      }
      return out;
    }

    case Format::table: {
      std::vector<std::vector<std::string>> lines{{"k", "x_k", "f_k", "df_k", "step", "area"}};
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const NewtonStep& s = steps[k];
        lines.push_back({std::to_string(k), detail::fixed(s.x_k, 6), detail::fixed(s.f_k, 6), detail::fixed(s.df_k, 6),
                         detail::fixed(s.step, 6), detail::fixed(r.panels[k].area, 6)});
      }
      using detail::Align;
      return detail::render_columns(lines, std::vector<Align>(6, Align::right)) +
             "termination: " + std::string(to_string(r.trace.termination)) + '\n';
    }
  }
  return {};
}

}  // namespace nrq
