#include "nulleq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <cstdlib>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "nulleq/dataset.hpp"
#include "nulleq/errors.hpp"
#include "nulleq/plot.hpp"
#include "nulleq/report.hpp"

namespace nulleq::report {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240101;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double alpha = 0.05;
  bool json = false;
  std::string input;
  std::optional<std::uint64_t> seed;
  char delimiter = ',';
  bool no_header = false;
  std::vector<std::string> log_columns;
  std::string label_column;
};

struct ModelOptions {
  std::string response;
  std::vector<std::string> predictors;
  std::vector<std::string> reduced;
  std::vector<std::string> full;
  bool no_intercept = false;
  unsigned threads = 0;
  std::string output;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      return v > 0.0 && v < 1.0 ? "" : "must lie strictly between 0 and 1";
    },
    "(0,1)");

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--alpha", c.alpha, "Significance level")->check(kOpenUnit)->capture_default_str();
  sub->add_flag("--json", c.json, "Print the report as JSON");
  sub->add_option("--input", c.input, "CSV input file");
  sub->add_option("--seed", c.seed, "Random seed (default: $NULLEQ_SEED or 20240101)");
  sub->add_option("--delimiter", c.delimiter, "CSV field delimiter")->capture_default_str();
  sub->add_flag("--no-header", c.no_header, "CSV has no header row (columns become c1, c2, ...)");
  sub->add_option("--log", c.log_columns, "Columns to replace by their natural log")->delimiter(',');
  sub->add_option("--label-column", c.label_column, "Text column holding observation labels");
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  const char* env = std::getenv("NULLEQ_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("NULLEQ_SEED is not an unsigned integer: " + std::string(s));
  return v;
}

Dataset load(const Common& c) {
  if (c.input.empty()) throw UsageError("this command needs --input <path>");
  CsvOptions opts;
  opts.delimiter = c.delimiter;
  opts.header = !c.no_header;
  opts.log_columns = c.log_columns;
  opts.label_column = c.label_column;
  return ingest_csv(c.input, opts);
}

Json common_arguments(const Common& c) {
  Json j{{"alpha", c.alpha}};
  if (!c.log_columns.empty()) j["log"] = c.log_columns;
  if (!c.label_column.empty()) j["label_column"] = c.label_column;
  return j;
}

linmodel::DesignMatrix design(const Dataset& ds, const std::vector<std::string>& cols, bool intercept) {
  std::vector<std::vector<double>> columns;
  std::vector<std::string> labels;
  if (intercept) {
    columns.emplace_back(ds.rows(), 1.0);
    labels.emplace_back("(intercept)");
  }
  for (const auto& name : cols) {
    columns.push_back(ds.column(name));
    labels.push_back(name);
  }
  return linmodel::DesignMatrix(std::move(columns), std::move(labels));
}

std::string default_response(const Dataset& ds, const std::vector<std::string>& exclude) {
  for (const auto& name : ds.names) {
    if (std::find(exclude.begin(), exclude.end(), name) == exclude.end()) return name;
  }
  throw UsageError("no column left to use as the response");
}

std::vector<std::string> other_columns(const Dataset& ds, const std::string& response) {
  std::vector<std::string> out;
  for (const auto& name : ds.names) {
    if (name != response) out.push_back(name);
  }
  return out;
}

diagnostics::DiagnosticsTable run_diagnostics(const Dataset& ds, ModelOptions& m) {
  if (m.response.empty()) m.response = ds.names.front();
  if (m.predictors.empty()) m.predictors = other_columns(ds, m.response);
  const auto x = design(ds, m.predictors, !m.no_intercept);
  return diagnostics::residual_diagnostics(x, Sample(ds.column(m.response)), ds.labels, m.threads);
}

Json model_arguments(const Common& c, const ModelOptions& m) {
  Json j = common_arguments(c);
  j["response"] = m.response;
  j["predictors"] = m.predictors;
  j["intercept"] = !m.no_intercept;
  return j;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hypothesis tests in traditional and null-hypothesis form", "nulleq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  ModelOptions model;

  double mu0 = 0.0;
  std::string column;
  auto* ttest_cmd = app.add_subcommand("ttest", "One-sample t-test of mean = mu0");
  add_common(ttest_cmd, common);
  ttest_cmd->add_option("--mu0", mu0, "Null mean")->capture_default_str();
  ttest_cmd->add_option("--column", column, "Column to test (default: the first)");

  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p0 = 0.5;
  proportion::Alternative alternative = proportion::Alternative::TwoSided;
  const std::map<std::string, proportion::Alternative> alternatives{
      {"two-sided", proportion::Alternative::TwoSided},
      {"greater", proportion::Alternative::Greater},
      {"less", proportion::Alternative::Less}};
  auto* prop_cmd = app.add_subcommand("proptest", "One-sample proportion z tests");
  add_common(prop_cmd, common);
  prop_cmd->add_option("--successes", successes, "Number of successes")->required();
  prop_cmd->add_option("--n", trials, "Number of trials")->required();
  prop_cmd->add_option("--p0", p0, "Null proportion")->check(kOpenUnit)->capture_default_str();
  prop_cmd->add_option("--alternative", alternative, "two-sided, greater or less")
      ->transform(CLI::CheckedTransformer(alternatives, CLI::ignore_case));

  auto* ftest_cmd = app.add_subcommand("ftest", "Nested linear model F-test");
  add_common(ftest_cmd, common);
  ftest_cmd->add_option("--response", model.response, "Response column (default: first column not in the full model)");
  ftest_cmd->add_option("--reduced-cols", model.reduced, "Predictors of the reduced model")->delimiter(',');
  ftest_cmd->add_option("--full-cols", model.full, "Predictors of the full model")->delimiter(',')->required();
  ftest_cmd->add_flag("--no-intercept", model.no_intercept, "Do not add an intercept to either model");

  auto add_model_flags = [&](CLI::App* sub) {
    add_common(sub, common);
    sub->add_option("--response", model.response, "Response column (default: the first)");
    sub->add_option("--predictors", model.predictors, "Predictor columns (default: all others)")->delimiter(',');
    sub->add_flag("--no-intercept", model.no_intercept, "Fit without an intercept");
    sub->add_option("--threads", model.threads, "Worker threads (0: hardware count)");
  };
  auto* outliers_cmd = app.add_subcommand("outliers", "Per-observation outlier tests");
  add_model_flags(outliers_cmd);
  auto* plot_cmd = app.add_subcommand("plot", "Residual plots (SVG) with the outlier table");
  add_model_flags(plot_cmd);
  plot_cmd->add_option("--output", model.output, "SVG file to write")->required();

  montecarlo::SimConfig sim;
  bool ks = false;
  const std::map<std::string, montecarlo::Scenario> scenarios{
      {"one-sample-t", montecarlo::Scenario::OneSampleT},
      {"nested-f", montecarlo::Scenario::NestedF},
      {"proportion", montecarlo::Scenario::Proportion}};
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo size and power of both test forms");
  add_common(sim_cmd, common);
  sim_cmd->add_option("--scenario", sim.scenario, "one-sample-t, nested-f or proportion")
      ->transform(CLI::CheckedTransformer(scenarios, CLI::ignore_case));
  sim_cmd->add_option("--replicates", sim.replicates)->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--effect", sim.effect, "Mean shift, block coefficient, or p - p0")->capture_default_str();
  sim_cmd->add_option("--p1", sim.p1, "Reduced-model columns (nested-f)")->capture_default_str();
  sim_cmd->add_option("--p2", sim.p2, "Tested columns (nested-f)")->capture_default_str();
  sim_cmd->add_option("--p0", sim.p0, "Null proportion (proportion)")->check(kOpenUnit)->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: hardware count)");
  sim_cmd->add_flag("--ks", ks, "Also compare the null statistic with its Beta law");

  std::vector<const char*> argv{"nulleq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    AnalysisReport report;
    if (ttest_cmd->parsed()) {
      const Dataset ds = load(common);
      if (column.empty()) column = ds.names.front();
      report.command = "ttest";
      report.input = input_json(ds);
      report.arguments = common_arguments(common);
      report.arguments["mu0"] = mu0;
      report.arguments["column"] = column;
      report.results = ttest_json(ttest::t_test(Sample(ds.column(column)), mu0), common.alpha);
    } else if (prop_cmd->parsed()) {
      report.command = "proptest";
      report.arguments = common_arguments(common);
      report.arguments["successes"] = successes;
      report.arguments["n"] = trials;
      report.arguments["p0"] = p0;
      report.arguments["alternative"] = proportion::to_string(alternative);
      report.results = proportion_json(proportion::proportion_test({successes, trials}, p0, common.alpha, alternative));
    } else if (ftest_cmd->parsed()) {
      const Dataset ds = load(common);
      for (const auto& r : model.reduced) {
        if (std::find(model.full.begin(), model.full.end(), r) == model.full.end()) {
          throw UsageError("reduced column '" + r + "' is not in --full-cols");
        }
      }
      std::vector<std::string> ordered = model.reduced;
      for (const auto& f : model.full) {
        if (std::find(ordered.begin(), ordered.end(), f) == ordered.end()) ordered.push_back(f);
      }
      if (ordered.size() == model.reduced.size()) throw UsageError("--full-cols must add at least one column");
      if (model.response.empty()) model.response = default_response(ds, ordered);
      const linmodel::NestedSpec spec{design(ds, ordered, !model.no_intercept),
                                      model.reduced.size() + (model.no_intercept ? 0 : 1)};
      report.command = "ftest";
      report.input = input_json(ds);
      report.arguments = common_arguments(common);
      report.arguments["response"] = model.response;
      report.arguments["reduced_cols"] = model.reduced;
      report.arguments["full_cols"] = model.full;
      report.arguments["intercept"] = !model.no_intercept;
      report.results = ftest_json(linmodel::nested_f_test(spec, Sample(ds.column(model.response))), common.alpha);
    } else if (outliers_cmd->parsed() || plot_cmd->parsed()) {
      const Dataset ds = load(common);
      const auto table = run_diagnostics(ds, model);
      report.command = outliers_cmd->parsed() ? "outliers" : "plot";
      report.input = input_json(ds);
      report.arguments = model_arguments(common, model);
      report.results = diagnostics_json(table, common.alpha);
      if (plot_cmd->parsed()) {
        emit_residual_plots(table, model.output, common.alpha);
        report.arguments["output"] = model.output;
      }
    } else if (sim_cmd->parsed()) {
      sim.seed = resolve_seed(common);
      sim.alpha = common.alpha;
      report.command = "simulate";
      report.arguments = common_arguments(common);
      report.arguments["scenario"] = montecarlo::to_string(sim.scenario);
      report.arguments["seed"] = sim.seed;
      report.arguments["replicates"] = sim.replicates;
      report.arguments["n"] = sim.n;
      report.arguments["effect"] = sim.effect;
      if (sim.scenario == montecarlo::Scenario::NestedF) {
        report.arguments["p1"] = sim.p1;
        report.arguments["p2"] = sim.p2;
      }
      if (sim.scenario == montecarlo::Scenario::Proportion) report.arguments["p0"] = sim.p0;
      const auto r = montecarlo::simulate_size_power(sim);
      std::optional<double> ks_distance;
      if (ks) ks_distance = montecarlo::null_law_check(sim);
      report.results = simulation_json(r, ks_distance, sim.replicates);
    }

    if (report.input.is_object() && report.input["dropped_rows"].get<std::size_t>() > 0) {
      err << "nulleq: warning: dropped " << report.input["dropped_rows"].get<std::size_t>()
          << " row(s) with missing or non-numeric cells\n";
    }
    out << (common.json ? serialize(report) : render_human(report));
    return kExitOk;
  } catch (const UsageError& e) {
    err << "nulleq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "nulleq: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    err << "nulleq: i/o error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    err << "nulleq: numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "nulleq: domain error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace nulleq::report
