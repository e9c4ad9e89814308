#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nulleq/dataset.hpp"
#include "nulleq/diagnostics.hpp"
#include "nulleq/linmodel.hpp"
#include "nulleq/montecarlo.hpp"
#include "nulleq/proportion.hpp"
#include "nulleq/ttest.hpp"

namespace nulleq::report {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

/// Result of one CLI command. Serialized with keys in sorted order (the
/// ordering of nlohmann::json objects); non-finite numbers become null.
struct AnalysisReport {
  std::string command;
  Json arguments = Json::object();
  Json input;  ///< null for commands that read no file
  Json results = Json::object();
  std::string tool_version = kToolVersion;

  bool operator==(const AnalysisReport&) const = default;
};

Json to_json(const AnalysisReport& report);

/// Inverse of to_json. Throws DataError when a required key is missing or
/// has the wrong type.
AnalysisReport report_from_json(const Json& j);

/// Pretty-printed JSON (2-space indent) plus a trailing newline.
std::string serialize(const AnalysisReport& report);

AnalysisReport parse_report(std::string_view text);

/// Finite doubles map to numbers, anything else to null.
Json number(double x);

Json input_json(const Dataset& ds);
Json ttest_json(const ttest::TTestResult& r, double alpha);
Json proportion_json(const proportion::ProportionTestResult& r);
Json ftest_json(const linmodel::NestedFTestResult& r, double alpha);
Json diagnostics_json(const diagnostics::DiagnosticsTable& table, double alpha);
Json simulation_json(const montecarlo::SizePowerResult& r, std::optional<double> ks_distance,
                     std::uint64_t replicates);

/// Plain-text rendering: nested sections indented, arrays of records as
/// tables, numbers to 7 significant digits.
std::string render_human(const AnalysisReport& report);

}  // namespace nulleq::report
