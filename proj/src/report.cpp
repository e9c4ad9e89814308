#include "nulleq/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

namespace nulleq::report {

namespace {

template <class T>
T require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("report is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw DataError(std::string("report key '") + key + "' has the wrong type");
  }
}

std::string format_scalar(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null: return "n/a";
    case Json::value_t::boolean: return v.get<bool>() ? "yes" : "no";
    case Json::value_t::number_float: return fmt::format("{:.7g}", v.get<double>());
    case Json::value_t::number_integer: return fmt::format("{}", v.get<std::int64_t>());
    case Json::value_t::number_unsigned: return fmt::format("{}", v.get<std::uint64_t>());
    case Json::value_t::string: return v.get<std::string>();
    case Json::value_t::array: {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : ", ") + format_scalar(e);
      return s;
    }
    default: return v.dump();
  }
}

bool is_table(const Json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_object(); });
}

void render_table(std::string& out, const Json& rows, const std::string& indent) {
  std::vector<std::string> keys;
  for (const auto& [k, _] : rows.front().items()) keys.push_back(k);
  // the label reads best as the first column
  const auto label = std::find(keys.begin(), keys.end(), "label");
  if (label != keys.end()) std::rotate(keys.begin(), label, label + 1);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) width[c] = keys[c].size();
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(row.contains(keys[c]) ? format_scalar(row[keys[c]]) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    out += indent;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out += fmt::format("{:<{}}", line[c], width[c]);
      out += c + 1 < line.size() ? "  " : "\n";
    }
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
}

void render_section(std::string& out, const Json& obj, const std::string& indent) {
  std::size_t key_width = 0;
  for (const auto& [k, v] : obj.items()) {
    if (!v.is_object() && !is_table(v)) key_width = std::max(key_width, k.size());
  }
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object() || is_table(v)) continue;
    out += fmt::format("{}{:<{}}  {}\n", indent, k, key_width, format_scalar(v));
  }
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object()) {
      out += indent + k + ":\n";
      render_section(out, v, indent + "  ");
    } else if (is_table(v)) {
      out += indent + k + ":\n";
      render_table(out, v, indent + "  ");
    }
  }
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const AnalysisReport& report) {
  return Json{{"command", report.command},
              {"arguments", report.arguments},
              {"input", report.input},
              {"results", report.results},
              {"tool_version", report.tool_version}};
}

AnalysisReport report_from_json(const Json& j) {
  AnalysisReport r;
  r.command = require<std::string>(j, "command");
  r.arguments = require<Json>(j, "arguments");
  r.input = require<Json>(j, "input");
  r.results = require<Json>(j, "results");
  r.tool_version = require<std::string>(j, "tool_version");
  return r;
}

std::string serialize(const AnalysisReport& report) { return to_json(report).dump(2) + "\n"; }

AnalysisReport parse_report(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("report is not valid JSON");
  return report_from_json(j);
}

Json input_json(const Dataset& ds) {
  return Json{{"path", ds.source},
              {"digest", fmt::format("fnv1a64:{:016x}", ds.digest)},
              {"rows", ds.rows()},
              {"dropped_rows", ds.dropped_rows},
              {"columns", ds.names}};
}

Json ttest_json(const ttest::TTestResult& r, double alpha) {
  const double t_crit = ttest::t_critical_value(r.n, alpha);
  const double t0_crit = ttest::t0_critical_value(r.n, alpha);
  const double nd = static_cast<double>(r.n);
  const double dev = r.mean - r.mu0;
  const bool degenerate = r.status == ttest::Status::Degenerate;
  return Json{
      {"status", ttest::to_string(r.status)},
      {"n", r.n},
      {"df", r.df},
      {"mean", number(r.mean)},
      {"mu0", number(r.mu0)},
      {"s2", number(r.s2)},
      {"s0_2", number(r.s0_2)},
      {"t", number(r.t)},
      {"t0", number(r.t0)},
      {"r_ratio", number(r.r_ratio)},
      {"ssto", number(r.ssto)},
      {"sst", number(r.sst)},
      {"sse", number(r.sse)},
      {"cos2_theta", number(r.cos2_theta)},
      {"theta", degenerate ? Json(nullptr) : number(std::atan2(std::sqrt(r.sse), std::sqrt(nd) * dev))},
      {"p_value_t", number(r.p_value_t)},
      {"p_value_t0", number(r.p_value_t0)},
      {"critical_t", number(t_crit)},
      {"critical_t0", number(t0_crit)},
      {"reject_trad", std::fabs(r.t) >= t_crit},
      {"reject_null", std::fabs(r.t0) >= t0_crit},
  };
}

Json proportion_json(const proportion::ProportionTestResult& r) {
  const bool two_sided = r.alternative == proportion::Alternative::TwoSided;
  return Json{
      {"p_hat", number(r.p_hat)},
      {"p0", number(r.p0)},
      {"alternative", proportion::to_string(r.alternative)},
      {"z_null", number(r.z_null)},
      {"z_wald", number(r.z_wald)},
      {"z_wald_sign", r.z_wald > 0 ? 1 : (r.z_wald < 0 ? -1 : 0)},
      {"wald_degenerate", r.wald_degenerate},
      {"p_value_null", number(r.p_value_null)},
      {"p_value_wald", number(r.p_value_wald)},
      {"ci_lower", number(r.ci_lower)},
      {"ci_upper", number(r.ci_upper)},
      {"ci_level", number(1.0 - r.alpha)},
      {"critical_z", two_sided ? number(proportion::normal_critical_value(r.alpha))
                               : number(std::sqrt(specfun::upper_quantile(specfun::DistParams::chi_square(1.0),
                                                                          2.0 * r.alpha)))},
      {"reject_null", r.p_value_null <= r.alpha},
      {"reject_wald", r.p_value_wald <= r.alpha},
  };
}

Json ftest_json(const linmodel::NestedFTestResult& r, double alpha) {
  const double trad_crit = linmodel::f_trad_critical_value(r.n, r.p1, r.p2, alpha);
  const double null_crit = linmodel::f_null_critical_value(r.n, r.p1, r.p2, alpha);
  return Json{
      {"status", linmodel::to_string(r.status)},
      {"n", r.n},
      {"p1", r.p1},
      {"p2", r.p2},
      {"df_numerator", r.p2},
      {"df_denominator", r.n - r.p1 - r.p2},
      {"sse1", number(r.sse1)},
      {"sse12", number(r.sse12)},
      {"ss2given1", number(r.ss2given1)},
      {"f_trad", number(r.f_trad)},
      {"f_null", number(r.f_null)},
      {"p_value_f", number(r.p_value_f)},
      {"p_value_beta", number(r.p_value_beta)},
      {"cos2_theta", number(r.cos2_theta)},
      {"critical_f_trad", number(trad_crit)},
      {"critical_f_null", number(null_crit)},
      {"reject_trad", r.f_trad >= trad_crit},
      {"reject_null", r.f_null >= null_crit},
  };
}

Json diagnostics_json(const diagnostics::DiagnosticsTable& table, double alpha) {
  Json rows = Json::array();
  Json flagged = Json::array();
  for (const auto& row : table.rows) {
    const bool outlier = !row.full_leverage && row.outlier_p_value <= alpha;
    if (outlier) flagged.push_back(row.label);
    rows.push_back(Json{{"label", row.label},
                        {"fitted", number(row.fitted)},
                        {"leverage", number(row.leverage)},
                        {"residual", number(row.raw_residual)},
                        {"standardized", number(row.standardized)},
                        {"studentized", number(row.studentized)},
                        {"f_null", number(row.f_null)},
                        {"f_trad", number(row.f_trad)},
                        {"p_value", number(row.outlier_p_value)},
                        {"p_bonferroni", number(row.bonferroni_p_value)},
                        {"gap", number(row.gap)},
                        {"full_leverage", row.full_leverage},
                        {"outlier", outlier}});
  }
  Json gaps = Json::array();
  for (const auto& g : diagnostics::residual_gaps(table)) gaps.push_back(Json{{"label", g.label}, {"gap", number(g.gap)}});
  return Json{
      {"n", table.n},
      {"p1", table.p1},
      {"df", table.df},
      {"critical_studentized", number(diagnostics::studentized_critical_value(table.n, table.p1, alpha))},
      {"critical_standardized", number(diagnostics::standardized_critical_value(table.n, table.p1, alpha))},
      {"observations", std::move(rows)},
      {"gaps", std::move(gaps)},
      {"outliers", std::move(flagged)},
  };
}

Json simulation_json(const montecarlo::SizePowerResult& r, std::optional<double> ks_distance,
                     std::uint64_t replicates) {
  Json j{{"replicates", r.replicates},
         {"reject_rate_trad", number(r.reject_rate_trad)},
         {"reject_rate_null", number(r.reject_rate_null)},
         {"disagreements", r.disagreements}};
  if (ks_distance) {
    j["ks_distance"] = number(*ks_distance);
    j["ks_critical_1pct"] = number(montecarlo::ks_critical_value_1pct(replicates));
    j["ks_pass"] = *ks_distance < montecarlo::ks_critical_value_1pct(replicates);
  }
  return j;
}

std::string render_human(const AnalysisReport& report) {
  std::string out = fmt::format("nulleq {}  (version {})\n", report.command, report.tool_version);
  if (!report.arguments.empty()) {
    out += "arguments:\n";
    render_section(out, report.arguments, "  ");
  }
  if (report.input.is_object()) {
    out += "input:\n";
    render_section(out, report.input, "  ");
  }
  out += "results:\n";
  render_section(out, report.results, "  ");
  return out;
}

}  // namespace nulleq::report
