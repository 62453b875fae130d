#include <doctest.h>

#include <random>

#include "hofer/error.hpp"
#include "hofer/field.hpp"
#include "support.hpp"

using namespace hofer;
using namespace testing;

namespace {

bool contains(const std::vector<double>& values, double x) {
  return std::find(values.begin(), values.end(), x) != values.end();
}

double cylinder_distance(const SurfaceMesh& mesh, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  Eigen::Vector2d d = a - b;
  if (mesh.period()) d.x() -= *mesh.period() * std::round(d.x() / *mesh.period());
  return d.norm();
}

// Splits quad face f into four triangles around a new centre vertex.
SurfaceMesh split_face(const SurfaceMesh& mesh, int f) {
  const int c = mesh.vertex_count();
  std::vector<std::vector<int>> faces;
  std::vector<double> areas;
  for (int g = 0; g < mesh.face_count(); ++g) {
    if (g != f) {
      faces.push_back(mesh.face(g));
      areas.push_back(mesh.face_area(g));
      continue;
    }
    const auto& q = mesh.face(g);
    for (std::size_t i = 0; i < q.size(); ++i) {
      faces.push_back({q[i], q[(i + 1) % q.size()], c});
      areas.push_back(mesh.face_area(g) / static_cast<double>(q.size()));
    }
  }
  SurfaceMesh out(c + 1, faces, Eigen::Map<Eigen::VectorXd>(areas.data(), static_cast<Eigen::Index>(areas.size())),
                  mesh.ends());
  auto coords = mesh.coords();
  Eigen::Vector2d centre = Eigen::Vector2d::Zero();
  for (int v : mesh.face(f)) centre += coords[v];
  coords.push_back(centre / static_cast<double>(mesh.face(f).size()));
  out.set_coords(coords);
  out.set_period(mesh.period());
  out.set_name(mesh.name());
  return out;
}

}  // namespace

TEST_CASE("plateau profile is exact on its plateau and outside its ramps") {
  PlateauProfile p{2.0, -0.25, 0.25, 0.25};
  CHECK(p(0.0) == 2.0);
  CHECK(p(0.25) == 2.0);
  CHECK(p(-0.25) == 2.0);
  CHECK(p(0.5) == 0.0);
  CHECK(p(-0.75) == 0.0);
  CHECK(p(0.375) == doctest::Approx(1.0));
  double steepest = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double s = -0.6 + 1.2 * i / 2000.0;
    const double fd = (p(s + 1e-7) - p(s - 1e-7)) / 2e-7;
    CHECK(p.derivative(s) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    steepest = std::max(steepest, std::abs(p.derivative(s)));
    CHECK(p(s) >= 0.0);
    CHECK(p(s) <= 2.0);
  }
  CHECK(steepest <= p.lipschitz());
  CHECK(steepest > 0.5 * p.lipschitz());
}

TEST_CASE("preset samples on the cylinder") {
  auto mesh = make_cylinder(16, 16);

  auto bump = preset_field(mesh, PresetKind::disc_bump);
  CHECK(bump.max() == 1.0);
  CHECK(bump.min() == 0.0);
  auto resolved = resolve_preset(*bump.preset, Chart::of(mesh));
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (bump.values[v] != 0.0) CHECK(cylinder_distance(mesh, mesh.coords()[v], *resolved.center) < *resolved.radius);
  CHECK(is_region_contractible(mesh, support_region(mesh, bump)).contractible);

  auto plateau = preset_field(mesh, PresetKind::annular_plateau);
  CHECK(plateau.max() == 1.0);
  bool full_row = false;
  for (int j = 0; j < 16; ++j) {
    bool all = true;
    for (int i = 0; i < 16; ++i) all = all && plateau.values[j * 16 + i] == 1.0;
    full_row |= all;
  }
  CHECK(full_row);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (near_end(mesh)[v]) CHECK(plateau.values[v] == 0.0);

  auto spike = preset_field(mesh, PresetKind::plateau_with_spike);
  CHECK(spike.max() == 2.0);
  resolved = resolve_preset(*spike.preset, Chart::of(mesh));
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (spike.values[v] > 1.0)
      CHECK(cylinder_distance(mesh, mesh.coords()[v], *resolved.spike_center) < *resolved.radius);

  auto well = preset_field(mesh, PresetKind::annular_well, 0.5);
  CHECK(well.min() == -0.5);
  CHECK(well.max() == 0.0);
}

TEST_CASE("every preset passes the compact support check") {
  for (const auto& mesh : {make_cylinder(8, 8), make_cylinder(20, 12), make_plane(12)}) {
    for (auto kind : {PresetKind::disc_bump, PresetKind::annular_plateau, PresetKind::plateau_with_spike,
                      PresetKind::annular_well}) {
      for (double h : {0.5, 1.0, 3.0}) {
        auto field = preset_field(mesh, kind, h);
        CHECK_NOTHROW(check_compact_support(mesh, field));
      }
    }
  }
}

TEST_CASE("compact support check") {
  auto mesh = make_cylinder(8, 8);
  CHECK_NOTHROW(check_compact_support(mesh, field_of(mesh, Eigen::VectorXd::Zero(64))));
  CHECK_ERROR_CODE(check_compact_support(mesh, field_of(mesh, Eigen::VectorXd::Ones(64))),
                   ErrorCode::SupportTouchesEnd);
  CHECK_ERROR_CODE(check_compact_support(mesh, field_of(mesh, Eigen::VectorXd::Zero(10))),
                   ErrorCode::MismatchedInputs);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(64);
  bad[30] = std::numeric_limits<double>::quiet_NaN();
  CHECK_ERROR_CODE(check_compact_support(mesh, field_of(mesh, bad)), ErrorCode::InvalidParams);
}

TEST_CASE("preset bounds") {
  auto mesh = make_cylinder(8, 8);
  FieldPreset p;
  p.kind = PresetKind::disc_bump;
  p.radius = 3.0;
  CHECK_ERROR_CODE(sample_preset(mesh, p), ErrorCode::PresetOutOfBounds);
  p.radius = 0.3;
  p.center = Eigen::Vector2d(1.0, 5.0);
  CHECK_ERROR_CODE(sample_preset(mesh, p), ErrorCode::PresetOutOfBounds);
  p = {};
  p.kind = PresetKind::annular_plateau;
  p.band = std::array<double, 2>{0.5, 0.9};
  CHECK_ERROR_CODE(sample_preset(mesh, p), ErrorCode::PresetOutOfBounds);
  p.band = std::array<double, 2>{0.2, 0.1};
  CHECK_ERROR_CODE(sample_preset(mesh, p), ErrorCode::PresetOutOfBounds);
  p = {};
  p.height = std::numeric_limits<double>::infinity();
  CHECK_ERROR_CODE(sample_preset(mesh, p), ErrorCode::PresetOutOfBounds);

  SurfaceMesh bare(mesh.vertex_count(), mesh.faces(), mesh.face_areas(), mesh.ends());
  CHECK_ERROR_CODE(sample_preset(bare, FieldPreset{}), ErrorCode::NoCoordinates);
}

TEST_CASE("chart gradients match finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& mesh : {make_cylinder(16, 16), make_plane(16)}) {
    const Chart chart = Chart::of(mesh);
    for (auto kind : {PresetKind::disc_bump, PresetKind::annular_plateau, PresetKind::plateau_with_spike,
                      PresetKind::annular_well}) {
      FieldPreset p;
      p.kind = kind;
      if (kind == PresetKind::annular_plateau && chart.cylinder) p.modulation = 0.4;
      ChartField f(resolve_preset(p, chart), chart);
      double steepest = 0.0;
      for (int i = 0; i < 400; ++i) {
        Eigen::Vector2d x = chart.lower + (chart.upper - chart.lower).cwiseProduct(Eigen::Vector2d(unit(rng), unit(rng)));
        Eigen::Vector2d g = f.gradient(x);
        for (int k = 0; k < 2; ++k) {
          Eigen::Vector2d e = Eigen::Vector2d::Zero();
          e[k] = 1e-6;
          CHECK(g[k] == doctest::Approx((f.value(x + e) - f.value(x - e)) / 2e-6).epsilon(1e-4).scale(1.0));
        }
        steepest = std::max(steepest, g.norm());
      }
      CHECK(steepest <= f.lipschitz());
    }
  }
}

TEST_CASE("support region") {
  auto mesh = make_cylinder(16, 16);
  CHECK(support_region(mesh, field_of(mesh, Eigen::VectorXd::Zero(256))).is_empty());

  auto bump = preset_field(mesh, PresetKind::disc_bump);
  auto region = support_region(mesh, bump);
  for (int v = 0; v < mesh.vertex_count(); ++v) CHECK(region.vertices[v] == (bump.values[v] != 0.0));
  CHECK(is_region_contractible(mesh, region).contractible);

  auto plateau = preset_field(mesh, PresetKind::annular_plateau);
  CHECK_FALSE(is_region_contractible(mesh, support_region(mesh, plateau)).contractible);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto field = random_field(mesh, rng);
    auto base = support_region(mesh, field);
    CHECK(base.is_closed(mesh));
    for (double lambda : {-3.0, -1.0, 0.5, 7.0}) CHECK(support_region(mesh, field.scaled(lambda)) == base);
    // No cell joins the two signs.
    for (int e = 0; e < mesh.edge_count(); ++e)
      if (base.edges[e]) CHECK(field.values[mesh.edge(e).a] * field.values[mesh.edge(e).b] > 0.0);
  }
}

TEST_CASE("discrete critical values examples") {
  auto mesh = make_cylinder(8, 8);
  CHECK(discrete_critical_values(mesh, field_of(mesh, Eigen::VectorXd::Zero(64))) == std::vector<double>{0.0});
  auto plateau = discrete_critical_values(mesh, preset_field(mesh, PresetKind::annular_plateau));
  CHECK(contains(plateau, 0.0));
  CHECK(contains(plateau, 1.0));
  auto spike = discrete_critical_values(mesh, preset_field(mesh, PresetKind::plateau_with_spike));
  CHECK(contains(spike, 0.0));
  CHECK(contains(spike, 1.0));
  CHECK(contains(spike, 2.0));
  CHECK(std::is_sorted(spike.begin(), spike.end()));
}

TEST_CASE("discrete critical values contain the extremes") {
  auto mesh = make_cylinder(12, 10);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto field = random_field(mesh, rng);
    auto crit = discrete_critical_values(mesh, field);
    CHECK(contains(crit, field.max()));
    CHECK(contains(crit, field.min()));
    for (double c : crit) {
      bool attained = false;
      for (int v = 0; v < mesh.vertex_count(); ++v) attained |= field.values[v] == c;
      CHECK(attained);
    }
  }
}

TEST_CASE("discrete critical values are stable under refining a flat face") {
  auto mesh = make_cylinder(8, 8);
  for (auto kind : {PresetKind::annular_plateau, PresetKind::plateau_with_spike}) {
    auto field = preset_field(mesh, kind);
    auto before = discrete_critical_values(mesh, field);
    int refined = 0;
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto& q = mesh.face(f);
      double mean = 0.0;
      bool flat = true;
      for (int v : q) mean += field.values[v], flat = flat && field.values[v] == field.values[q[0]];
      if (!flat) continue;
      auto fine = split_face(mesh, f);
      REQUIRE(validate_mesh(fine).empty());
      Eigen::VectorXd values(fine.vertex_count());
      values << field.values, mean / static_cast<double>(q.size());
      CHECK(discrete_critical_values(fine, field_of(fine, values)) == before);
      ++refined;
    }
    CHECK(refined > 0);
  }
}

TEST_CASE("preset names") {
  for (auto kind : {PresetKind::disc_bump, PresetKind::annular_plateau, PresetKind::plateau_with_spike,
                    PresetKind::annular_well, PresetKind::custom_sum})
    CHECK(preset_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(preset_kind_from_string("volcano"), Error);
}

TEST_CASE("custom sums add their terms") {
  auto mesh = make_cylinder(16, 16);
  FieldPreset plateau;
  plateau.kind = PresetKind::annular_plateau;
  plateau.band = std::array<double, 2>{0.3, 0.45};
  plateau.ramp = 0.1;
  FieldPreset well;
  well.kind = PresetKind::annular_well;
  well.height = 0.5;
  well.band = std::array<double, 2>{-0.45, -0.3};
  well.ramp = 0.1;
  FieldPreset sum;
  sum.kind = PresetKind::custom_sum;
  sum.terms = {plateau, well};
  auto total = sample_preset(mesh, sum).values;
  auto parts = (sample_preset(mesh, plateau).values + sample_preset(mesh, well).values).eval();
  CHECK((total - parts).cwiseAbs().maxCoeff() == 0.0);
  CHECK(total.maxCoeff() == 1.0);
  CHECK(total.minCoeff() == -0.5);
}
