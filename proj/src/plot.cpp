#include "hofer/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hofer/error.hpp"
#include "hofer/io.hpp"

namespace hofer {

namespace {

constexpr int kBands = 10;
constexpr double kWidth = 640.0;

std::string band_colour(double value, double peak) {
  if (value == 0.0 || peak == 0.0) return "#f7f7f7";
  const double t = std::ceil(std::abs(value) / peak * kBands) / kBands;
  const int strong = static_cast<int>(std::lround(247.0 - 69.0 * t));
  const int fade = static_cast<int>(std::lround(247.0 * (1.0 - 0.85 * t)));
  char buffer[8];
  if (value > 0)
    std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", strong, fade, fade);
  else
    std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", fade, fade, strong);
  return buffer;
}

}  // namespace

std::string render_svg(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report) {
  const Chart chart = Chart::of(mesh);
  const Eigen::Vector2d size = chart.upper - chart.lower;
  const double scale = kWidth / std::max(size.x(), size.y());
  const double height = size.y() * scale;
  auto px = [&](const Eigen::Vector2d& x) {
    std::ostringstream out;
    out.precision(6);
    out << (x.x() - chart.lower.x()) * scale << ',' << (chart.upper.y() - x.y()) * scale;
    return out.str();
  };
  // On the cylinder, follow the shortest angular step between neighbours.
  auto unwrap = [&](const std::vector<int>& cycle, bool close) {
    std::vector<Eigen::Vector2d> out;
    for (int v : cycle) {
      Eigen::Vector2d x = mesh.coords()[v];
      if (chart.cylinder && !out.empty())
        x.x() = out.back().x() + (x.x() - out.back().x()) -
                chart.period * std::round((x.x() - out.back().x()) / chart.period);
      out.push_back(x);
    }
    if (close && !out.empty()) {
      Eigen::Vector2d x = mesh.coords()[cycle.front()];
      if (chart.cylinder)
        x.x() = out.back().x() + (x.x() - out.back().x()) -
                chart.period * std::round((x.x() - out.back().x()) / chart.period);
      out.push_back(x);
    }
    if (chart.cylinder && !out.empty()) {
      double lo = out.front().x();
      for (const auto& x : out) lo = std::min(lo, x.x());
      double shift = -chart.period * std::floor((lo - chart.lower.x()) / chart.period + 1e-9);
      for (auto& x : out) x.x() += shift;
    }
    return out;
  };

  const double peak = field.values.size() ? field.values.cwiseAbs().maxCoeff() : 0.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height + 40
      << "\" viewBox=\"0 0 " << kWidth << ' ' << height + 40 << "\">\n";
  svg << "<style>.witness{fill:none;stroke:#111;stroke-width:3}</style>\n";
  svg << "<g class=\"bands\" stroke=\"#999\" stroke-width=\"0.3\">\n";
  for (int f = 0; f < mesh.face_count(); ++f) {
    double mean = 0.0;
    for (int v : mesh.face(f)) mean += field.values[v];
    mean /= static_cast<double>(mesh.face(f).size());
    svg << "<polygon fill=\"" << band_colour(mean, peak) << "\" points=\"";
    auto points = unwrap(mesh.face(f), false);
    for (std::size_t i = 0; i < points.size(); ++i) svg << (i ? " " : "") << px(points[i]);
    svg << "\"/>\n";
  }
  svg << "</g>\n";
  if (report.verdict == Verdict::linear) {
    for (const auto* loop : {&report.witness_plus, &report.witness_minus}) {
      if (!*loop) continue;
      svg << "<polyline class=\"witness\" points=\"";
      auto points = unwrap((*loop)->vertices(), true);
      for (std::size_t i = 0; i < points.size(); ++i) svg << (i ? " " : "") << px(points[i]);
      svg << "\"/>\n";
    }
  }
  svg << "<text x=\"8\" y=\"" << height + 26 << "\" font-family=\"monospace\" font-size=\"14\">c+ = "
      << round12(report.c_plus) << "   c- = " << round12(report.c_minus) << "   mu = " << round12(report.mu)
      << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report,
               const std::string& path) {
  write_text(path, render_svg(mesh, field, report));
}

}  // namespace hofer
