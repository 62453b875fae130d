#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hofer/surface.hpp"

namespace hofer {

/// Height profile that equals `height` on [lo, hi], vanishes outside
/// [lo - ramp, hi + ramp] and climbs in between along the smooth transition
/// 1 / (1 + exp(1/u - 1/(1-u))), so it is C-infinity with exact zeros and
/// exact plateau values.
struct PlateauProfile {
  double height = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  double ramp = 1.0;

  double operator()(double s) const;
  double derivative(double s) const;
  /// max |derivative|
  double lipschitz() const;
};

enum class PresetKind { disc_bump, annular_plateau, plateau_with_spike, annular_well, custom_sum };

const char* to_string(PresetKind kind);
PresetKind preset_kind_from_string(const std::string& name);

/// Closed-form test Hamiltonian. Unset geometric parameters are filled from
/// the chart by resolve_preset. On the cylinder chart (theta, y) the band is
/// a y-interval; on planar charts it is an interval of distances from
/// `center`.
struct FieldPreset {
  PresetKind kind = PresetKind::disc_bump;
  double height = 1.0;        // bump or plateau height, well depth, h1 of plateau_with_spike
  double spike_height = 2.0;  // h2 of plateau_with_spike
  std::optional<Eigen::Vector2d> center;        // bump centre, or annulus centre on planar charts
  std::optional<Eigen::Vector2d> spike_center;  // plateau_with_spike
  std::optional<double> radius;  // bump or spike radius; the core of radius/2 is flat
  std::optional<std::array<double, 2>> band;
  std::optional<double> ramp;
  double modulation = 0.0;  // cylinder annular_plateau: factor 1 + modulation * cos(theta)
  std::vector<FieldPreset> terms;  // custom_sum
};

/// Coordinate chart of a mesh: a box in the plane, or the cylinder with
/// periodic first coordinate.
struct Chart {
  bool cylinder = false;
  double period = 0.0;
  Eigen::Vector2d lower = Eigen::Vector2d::Zero();
  Eigen::Vector2d upper = Eigen::Vector2d::Zero();

  /// Throws NoCoordinates when the mesh carries none.
  static Chart of(const SurfaceMesh& mesh);
};

/// Fills defaults and checks that the preset fits the chart.
/// Throws PresetOutOfBounds.
FieldPreset resolve_preset(const FieldPreset& preset, const Chart& chart);

/// Smooth chart expression of a resolved preset.
class ChartField {
 public:
  ChartField(FieldPreset preset, Chart chart);

  double value(const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;
  /// Upper bound on |gradient| with respect to the chart metric.
  double lipschitz() const;
  const FieldPreset& preset() const { return preset_; }
  const Chart& chart() const { return chart_; }

 private:
  FieldPreset preset_;
  Chart chart_;
};

struct HamiltonianField {
  std::string mesh_name;
  Eigen::VectorXd values;
  std::optional<FieldPreset> preset;

  HamiltonianField scaled(double lambda) const;
  double max() const { return values.size() ? values.maxCoeff() : 0.0; }
  double min() const { return values.size() ? values.minCoeff() : 0.0; }
};

/// Samples a preset at the mesh vertices. Throws NoCoordinates or
/// PresetOutOfBounds (also when the samples fail check_compact_support).
HamiltonianField sample_preset(const SurfaceMesh& mesh, const FieldPreset& preset);

/// Throws SupportTouchesEnd when a vertex of an end cycle carries a nonzero
/// value, MismatchedInputs on a size mismatch and InvalidParams on
/// non-finite values.
void check_compact_support(const SurfaceMesh& mesh, const HamiltonianField& field);

/// Closure of {H != 0}: the full subcomplex on {H > 0} together with the full
/// subcomplex on {H < 0}. No cell joins the two signs.
SubComplex support_region(const SurfaceMesh& mesh, const HamiltonianField& field);

/// Values of vertices whose upper or lower link is empty or disconnected,
/// with ties broken by vertex index; always contains min and max.
std::vector<double> discrete_critical_values(const SurfaceMesh& mesh, const HamiltonianField& field);

}  // namespace hofer
