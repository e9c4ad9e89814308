#include "nulleq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "nulleq/errors.hpp"

namespace nulleq::report {

namespace {

constexpr double kPanelWidth = 600.0;
constexpr double kPanelHeight = 450.0;
constexpr double kMargin = 50.0;
constexpr int kTicks = 10;

struct Range {
  double lo;
  double hi;
};

// Padded range of the finite values; a single value (or none) widens to +/-1
// around it so the axis is never empty.
Range axis_range(const std::vector<double>& v, bool include_zero) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (include_zero) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  if (!(lo <= hi)) return {-1.0, 1.0};
  if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(lo))) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Panel {
  const char* title;
  std::vector<double> y;
};

void draw_panel(std::string& svg, const Panel& panel, int index, const diagnostics::DiagnosticsTable& table,
                const std::vector<bool>& outlier, Range xr) {
  const double ox = (index % 2) * kPanelWidth;
  const double oy = (index / 2) * kPanelHeight;
  const double left = ox + kMargin;
  const double right = ox + kPanelWidth - kMargin;
  const double top = oy + kMargin;
  const double bottom = oy + kPanelHeight - kMargin;
  const Range yr = axis_range(panel.y, true);
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

  svg += fmt::format("<g class=\"panel\" id=\"panel{}\">\n", index + 1);
  svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#000\"/>\n",
                     left, top, right - left, bottom - top);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     ox + kPanelWidth / 2, oy + 30.0, panel.title);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"11\">fitted</text>\n",
                     ox + kPanelWidth / 2, oy + kPanelHeight - 12.0);
  for (int k = 0; k <= kTicks; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / kTicks;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / kTicks;
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#000\"/>\n", px(xv),
                       bottom, bottom + 4.0);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"9\">{:.4g}</text>\n", px(xv),
                       bottom + 15.0, xv);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#000\"/>\n", left - 4.0,
                       py(yv), left);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-size=\"9\">{:.4g}</text>\n", left - 6.0,
                       py(yv) + 3.0, yv);
  }
  svg += fmt::format(
      "<line class=\"zero\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#888\" "
      "stroke-dasharray=\"4 3\"/>\n",
      left, py(0.0), right);

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.full_leverage || !std::isfinite(panel.y[i]) || !std::isfinite(row.fitted)) continue;
    const double x = px(row.fitted);
    const double y = py(panel.y[i]);
    if (outlier[i]) {
      svg += fmt::format(
          "<path class=\"outlier\" d=\"M{0:.2f},{1:.2f} L{2:.2f},{3:.2f} L{4:.2f},{3:.2f} Z\" fill=\"#d62728\"/>\n", x,
          y - 5.0, x + 5.0, y + 4.0, x - 5.0);
      svg += fmt::format("<text class=\"outlier-label\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\">{}</text>\n", x + 7.0,
                         y - 4.0, escape(row.label));
    } else {
      svg += fmt::format("<circle class=\"point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f77b4\"/>\n", x, y);
    }
  }
  svg += "</g>\n";
}

}  // namespace

std::string render_residual_plots(const diagnostics::DiagnosticsTable& table, double alpha) {
  if (table.rows.empty()) throw DataError("cannot plot an empty diagnostics table");
  std::vector<double> fitted;
  std::vector<bool> outlier;
  Panel panels[4] = {{"standardized residual", {}},
                     {"studentized residual", {}},
                     {"F_null (squared standardized)", {}},
                     {"F_trad (squared studentized)", {}}};
  for (const auto& row : table.rows) {
    fitted.push_back(row.full_leverage ? std::numeric_limits<double>::quiet_NaN() : row.fitted);
    outlier.push_back(!row.full_leverage && row.outlier_p_value <= alpha);
    panels[0].y.push_back(row.standardized);
    panels[1].y.push_back(row.studentized);
    panels[2].y.push_back(row.f_null);
    panels[3].y.push_back(row.f_trad);
  }
  const Range xr = axis_range(fitted, false);

  std::string svg = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n",
      2 * kPanelWidth, 2 * kPanelHeight);
  for (int p = 0; p < 4; ++p) draw_panel(svg, panels[p], p, table, outlier, xr);
  svg += "</svg>\n";
  return svg;
}

void emit_residual_plots(const diagnostics::DiagnosticsTable& table, const std::filesystem::path& path, double alpha) {
  const std::string svg = render_residual_plots(table, alpha);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << svg;
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace nulleq::report
