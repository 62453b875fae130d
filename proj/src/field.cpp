#include "hofer/field.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dsu.hpp"
#include "hofer/error.hpp"

namespace hofer {

namespace {

// C-infinity transition from 0 on (-inf, 0] to 1 on [1, inf).
double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 1.0 / (1.0 + std::exp(1.0 / u - 1.0 / (1.0 - u)));
}

double smoothstep_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double s = smoothstep(u);
  return s * (1.0 - s) * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)));
}

double wrap(double d, double period) { return d - period * std::round(d / period); }

Eigen::Vector2d chart_delta(const Chart& chart, const Eigen::Vector2d& x, const Eigen::Vector2d& c) {
  Eigen::Vector2d d = x - c;
  if (chart.cylinder) d.x() = wrap(d.x(), chart.period);
  return d;
}

[[noreturn]] void out_of_bounds(const std::string& what) { throw Error(ErrorCode::PresetOutOfBounds, what); }

void require(bool ok, const std::string& what) {
  if (!ok) out_of_bounds(what);
}

PlateauProfile band_profile(const FieldPreset& p, double height) {
  return {height, (*p.band)[0], (*p.band)[1], *p.ramp};
}

PlateauProfile bump_profile(double height, double radius) { return {height, -radius / 2, radius / 2, radius / 2}; }

double band_coordinate(const Chart& chart, const FieldPreset& p, const Eigen::Vector2d& x) {
  return chart.cylinder ? x.y() : (x - *p.center).norm();
}

Eigen::Vector2d band_coordinate_gradient(const Chart& chart, const FieldPreset& p, const Eigen::Vector2d& x) {
  if (chart.cylinder) return {0.0, 1.0};
  Eigen::Vector2d d = x - *p.center;
  double r = d.norm();
  return r > 0.0 ? Eigen::Vector2d(d / r) : Eigen::Vector2d::Zero();
}

double bump_value(const Chart& chart, const Eigen::Vector2d& c, double radius, double height, const Eigen::Vector2d& x) {
  return bump_profile(height, radius)(chart_delta(chart, x, c).norm());
}

Eigen::Vector2d bump_gradient(const Chart& chart, const Eigen::Vector2d& c, double radius, double height,
                              const Eigen::Vector2d& x) {
  Eigen::Vector2d d = chart_delta(chart, x, c);
  double r = d.norm();
  if (r == 0.0) return Eigen::Vector2d::Zero();
  return bump_profile(height, radius).derivative(r) * d / r;
}

void check_disc(const Chart& chart, const Eigen::Vector2d& c, double radius, const std::string& what) {
  require(std::isfinite(radius) && radius > 0.0, what + ": radius must be positive");
  require(c.allFinite(), what + ": centre must be finite");
  require(c.y() - radius > chart.lower.y() && c.y() + radius < chart.upper.y(), what + ": disc leaves the chart");
  if (chart.cylinder)
    require(radius < chart.period / 2, what + ": disc wraps around the cylinder");
  else
    require(c.x() - radius > chart.lower.x() && c.x() + radius < chart.upper.x(), what + ": disc leaves the chart");
}

}  // namespace

double PlateauProfile::operator()(double s) const {
  if (s >= lo && s <= hi) return height;
  if (s <= lo - ramp || s >= hi + ramp) return 0.0;
  double u = s < lo ? (s - (lo - ramp)) / ramp : (hi + ramp - s) / ramp;
  return height * smoothstep(u);
}

double PlateauProfile::derivative(double s) const {
  if (s <= lo - ramp || s >= hi + ramp || (s >= lo && s <= hi)) return 0.0;
  if (s < lo) return height * smoothstep_derivative((s - (lo - ramp)) / ramp) / ramp;
  return -height * smoothstep_derivative((hi + ramp - s) / ramp) / ramp;
}

double PlateauProfile::lipschitz() const { return 2.0 * std::abs(height) / ramp; }

const char* to_string(PresetKind kind) {
  switch (kind) {
    case PresetKind::disc_bump: return "disc_bump";
    case PresetKind::annular_plateau: return "annular_plateau";
    case PresetKind::plateau_with_spike: return "plateau_with_spike";
    case PresetKind::annular_well: return "annular_well";
    case PresetKind::custom_sum: return "custom_sum";
  }
  return "unknown";
}

PresetKind preset_kind_from_string(const std::string& name) {
  for (auto kind : {PresetKind::disc_bump, PresetKind::annular_plateau, PresetKind::plateau_with_spike,
                    PresetKind::annular_well, PresetKind::custom_sum})
    if (name == to_string(kind)) return kind;
  throw Error(ErrorCode::InvalidParams, "unknown preset '" + name + "'");
}

Chart Chart::of(const SurfaceMesh& mesh) {
  if (!mesh.has_coords()) throw Error(ErrorCode::NoCoordinates, "mesh '" + mesh.name() + "' has no coordinates");
  Chart chart;
  chart.lower = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  chart.upper = -chart.lower;
  for (const auto& x : mesh.coords()) {
    chart.lower = chart.lower.cwiseMin(x);
    chart.upper = chart.upper.cwiseMax(x);
  }
  if (mesh.period()) {
    chart.cylinder = true;
    chart.period = *mesh.period();
    chart.lower.x() = 0.0;
    chart.upper.x() = chart.period;
  }
  return chart;
}

FieldPreset resolve_preset(const FieldPreset& preset, const Chart& chart) {
  FieldPreset p = preset;
  require(std::isfinite(p.height) && std::isfinite(p.spike_height), "heights must be finite");
  const Eigen::Vector2d mid = (chart.lower + chart.upper) / 2;
  const double half_y = (chart.upper.y() - chart.lower.y()) / 2;
  const double reach = std::min(chart.upper.x() - mid.x(), half_y);

  if (p.kind == PresetKind::custom_sum) {
    for (auto& term : p.terms) term = resolve_preset(term, chart);
    return p;
  }
  if (p.kind == PresetKind::disc_bump) {
    if (!p.center) p.center = chart.cylinder ? Eigen::Vector2d(chart.period / 2, mid.y()) : mid;
    if (!p.radius) p.radius = (chart.cylinder ? half_y : reach) / 2;
    check_disc(chart, *p.center, *p.radius, "disc_bump");
    require(p.modulation == 0.0, "disc_bump takes no modulation");
    return p;
  }

  // Band presets.
  if (chart.cylinder) {
    if (!p.band) p.band = std::array<double, 2>{mid.y() - half_y / 4, mid.y() + half_y / 4};
    if (!p.ramp) p.ramp = half_y / 4;
  } else {
    if (!p.center) p.center = mid;
    if (!p.band) p.band = std::array<double, 2>{0.4 * reach, 0.7 * reach};
    if (!p.ramp) p.ramp = 0.15 * reach;
  }
  const double lo = (*p.band)[0];
  const double hi = (*p.band)[1];
  const double ramp = *p.ramp;
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, "band must satisfy lo <= hi");
  require(std::isfinite(ramp) && ramp > 0.0, "ramp must be positive");
  if (chart.cylinder) {
    require(lo - ramp > chart.lower.y() && hi + ramp < chart.upper.y(), "band leaves the chart");
    require(std::abs(p.modulation) < 1.0, "modulation must lie in (-1, 1)");
  } else {
    require(p.center->allFinite(), "centre must be finite");
    require(lo - ramp >= 0.0, "annulus must not reach its centre");
    const double outer = hi + ramp;
    require(p.center->x() - outer > chart.lower.x() && p.center->x() + outer < chart.upper.x() &&
                p.center->y() - outer > chart.lower.y() && p.center->y() + outer < chart.upper.y(),
            "annulus leaves the chart");
    require(p.modulation == 0.0, "modulation needs the cylinder chart");
  }
  if (p.kind == PresetKind::plateau_with_spike) {
    require(p.modulation == 0.0, "plateau_with_spike takes no modulation");
    if (!p.spike_center)
      p.spike_center = chart.cylinder ? Eigen::Vector2d(chart.period / 2, (lo + hi) / 2)
                                      : Eigen::Vector2d(*p.center + Eigen::Vector2d((lo + hi) / 2, 0.0));
    if (!p.radius) p.radius = chart.cylinder ? 0.4 * half_y : 0.2 * reach;
    check_disc(chart, *p.spike_center, *p.radius, "spike");
    double s = band_coordinate(chart, p, *p.spike_center);
    require(s >= lo && s <= hi, "spike centre must sit on the plateau");
  }
  return p;
}

ChartField::ChartField(FieldPreset preset, Chart chart) : preset_(std::move(preset)), chart_(chart) {}

double ChartField::value(const Eigen::Vector2d& x) const {
  const FieldPreset& p = preset_;
  switch (p.kind) {
    case PresetKind::disc_bump: return bump_value(chart_, *p.center, *p.radius, p.height, x);
    case PresetKind::annular_plateau: {
      double v = band_profile(p, p.height)(band_coordinate(chart_, p, x));
      return p.modulation == 0.0 ? v : v * (1.0 + p.modulation * std::cos(x.x()));
    }
    case PresetKind::annular_well: return -band_profile(p, p.height)(band_coordinate(chart_, p, x));
    case PresetKind::plateau_with_spike:
      return band_profile(p, p.height)(band_coordinate(chart_, p, x)) +
             bump_value(chart_, *p.spike_center, *p.radius, p.spike_height - p.height, x);
    case PresetKind::custom_sum: {
      double sum = 0.0;
      for (const auto& term : p.terms) sum += ChartField(term, chart_).value(x);
      return sum;
    }
  }
  return 0.0;
}

Eigen::Vector2d ChartField::gradient(const Eigen::Vector2d& x) const {
  const FieldPreset& p = preset_;
  switch (p.kind) {
    case PresetKind::disc_bump: return bump_gradient(chart_, *p.center, *p.radius, p.height, x);
    case PresetKind::annular_plateau: {
      auto profile = band_profile(p, p.height);
      double s = band_coordinate(chart_, p, x);
      Eigen::Vector2d g = profile.derivative(s) * band_coordinate_gradient(chart_, p, x);
      if (p.modulation == 0.0) return g;
      double factor = 1.0 + p.modulation * std::cos(x.x());
      return Eigen::Vector2d(-p.modulation * std::sin(x.x()) * profile(s), g.y() * factor);
    }
    case PresetKind::annular_well: {
      double s = band_coordinate(chart_, p, x);
      return -band_profile(p, p.height).derivative(s) * band_coordinate_gradient(chart_, p, x);
    }
    case PresetKind::plateau_with_spike: {
      double s = band_coordinate(chart_, p, x);
      return band_profile(p, p.height).derivative(s) * band_coordinate_gradient(chart_, p, x) +
             bump_gradient(chart_, *p.spike_center, *p.radius, p.spike_height - p.height, x);
    }
    case PresetKind::custom_sum: {
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      for (const auto& term : p.terms) sum += ChartField(term, chart_).gradient(x);
      return sum;
    }
  }
  return Eigen::Vector2d::Zero();
}

double ChartField::lipschitz() const {
  const FieldPreset& p = preset_;
  switch (p.kind) {
    case PresetKind::disc_bump: return bump_profile(p.height, *p.radius).lipschitz();
    case PresetKind::annular_plateau: {
      double l = band_profile(p, p.height).lipschitz();
      double b = std::abs(p.modulation);
      return l * (1.0 + b) + b * std::abs(p.height);
    }
    case PresetKind::annular_well: return band_profile(p, p.height).lipschitz();
    case PresetKind::plateau_with_spike:
      return band_profile(p, p.height).lipschitz() + bump_profile(p.spike_height - p.height, *p.radius).lipschitz();
    case PresetKind::custom_sum: {
      double sum = 0.0;
      for (const auto& term : p.terms) sum += ChartField(term, chart_).lipschitz();
      return sum;
    }
  }
  return 0.0;
}

HamiltonianField HamiltonianField::scaled(double lambda) const {
  HamiltonianField out;
  out.mesh_name = mesh_name;
  out.values = values * lambda;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values[i] += 0.0;
  return out;
}

HamiltonianField sample_preset(const SurfaceMesh& mesh, const FieldPreset& preset) {
  Chart chart = Chart::of(mesh);
  ChartField closed(resolve_preset(preset, chart), chart);
  HamiltonianField field;
  field.mesh_name = mesh.name();
  field.values.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) field.values[v] = closed.value(mesh.coords()[v]) + 0.0;
  field.preset = closed.preset();
  try {
    check_compact_support(mesh, field);
  } catch (const Error& e) {
    throw Error(ErrorCode::PresetOutOfBounds, std::string("sampled preset is not compactly supported (") + e.what() + ")");
  }
  return field;
}

void check_compact_support(const SurfaceMesh& mesh, const HamiltonianField& field) {
  if (field.values.size() != mesh.vertex_count())
    throw Error(ErrorCode::MismatchedInputs, "field has " + std::to_string(field.values.size()) + " values for " +
                                                 std::to_string(mesh.vertex_count()) + " vertices");
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (!std::isfinite(field.values[v]))
      throw Error(ErrorCode::InvalidParams, "non-finite value at vertex " + std::to_string(mesh.vertex_ids()[v]));
  for (const auto& end : mesh.ends())
    for (int v : end)
      if (field.values[v] != 0.0)
        throw Error(ErrorCode::SupportTouchesEnd, "vertex " + std::to_string(mesh.vertex_ids()[v]) + " on an end has value " +
                                                      std::to_string(field.values[v]));
}

SubComplex support_region(const SurfaceMesh& mesh, const HamiltonianField& field) {
  std::vector<bool> positive(mesh.vertex_count());
  std::vector<bool> negative(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    positive[v] = field.values[v] > 0.0;
    negative[v] = field.values[v] < 0.0;
  }
  SubComplex region = SubComplex::induced(mesh, positive);
  region |= SubComplex::induced(mesh, negative);
  return region;
}

std::vector<double> discrete_critical_values(const SurfaceMesh& mesh, const HamiltonianField& field) {
  const auto& h = field.values;
  std::set<double> out;
  if (mesh.vertex_count() == 0) return {};
  out.insert(h.minCoeff());
  out.insert(h.maxCoeff());
  auto above = [&](int w, int v) { return h[w] > h[v] || (h[w] == h[v] && w > v); };

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    for (bool upper : {true, false}) {
      auto qualifies = [&](int w) { return upper ? above(w, v) : above(v, w); };
      const auto& edges = mesh.vertex_edges(v);
      std::vector<int> link;
      for (int e : edges) link.push_back(mesh.other_vertex(e, v));
      detail::DisjointSets sets(static_cast<int>(link.size()));
      auto slot = [&](int w) { return static_cast<int>(std::find(link.begin(), link.end(), w) - link.begin()); };
      for (int f : mesh.vertex_faces(v)) {
        const auto& cycle = mesh.face(f);
        const int k = static_cast<int>(cycle.size());
        int i = static_cast<int>(std::find(cycle.begin(), cycle.end(), v) - cycle.begin());
        bool arc = true;
        for (int j = 1; j < k; ++j) arc = arc && qualifies(cycle[(i + j) % k]);
        if (arc) sets.unite(slot(cycle[(i + k - 1) % k]), slot(cycle[(i + 1) % k]));
      }
      int components = 0;
      for (int s = 0; s < static_cast<int>(link.size()); ++s)
        if (qualifies(link[s]) && sets.find(s) == s) ++components;
      if (components != 1) {
        out.insert(h[v]);
        break;
      }
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace hofer
