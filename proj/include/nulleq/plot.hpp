#pragma once

#include <filesystem>
#include <string>

#include "nulleq/diagnostics.hpp"

namespace nulleq::report {

/// 2 x 2 SVG grid of residual displays against fitted values: standardized
/// and studentized residuals on top, F_null and F_trad below. Every panel
/// shares the same x-axis. Observations with outlier p-value <= alpha get a
/// distinct marker and their label. Full-leverage rows are not drawn.
/// Output depends only on the arguments (byte-deterministic).
std::string render_residual_plots(const diagnostics::DiagnosticsTable& table, double alpha = 0.05);

/// Writes render_residual_plots to `path`; IoError if it cannot be written.
void emit_residual_plots(const diagnostics::DiagnosticsTable& table, const std::filesystem::path& path,
                         double alpha = 0.05);

}  // namespace nulleq::report
