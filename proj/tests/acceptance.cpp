// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "hofer/chart_flow.hpp"
#include "hofer/decomposition.hpp"
#include "hofer/minimax.hpp"
#include "hofer/oracle.hpp"
#include "support.hpp"

using namespace hofer;
using namespace testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

struct Fixture {
  std::string name;
  SurfaceMesh mesh;
  HamiltonianField field;
};

std::vector<Fixture> manifest_fixtures() {
  std::vector<Fixture> out;
  auto manifest = read_json(fixture("manifest.json"));
  for (const auto& entry : manifest["fixtures"]) {
    auto mesh = load_mesh(entry["mesh"].get<std::string>());
    auto field = load_field(entry["field"].get<std::string>(), mesh);
    out.push_back({entry["name"].get<std::string>(), std::move(mesh), std::move(field)});
  }
  return out;
}

std::vector<HamiltonianField> random_suite(const SurfaceMesh& mesh, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<HamiltonianField> out;
  for (int i = 0; i < count; ++i) out.push_back(random_field(mesh, rng));
  return out;
}

void formula(Outcome& o) {
  double slowest_large = 0.0;
  int checked = 0;
  for (const auto& f : manifest_fixtures()) {
    const auto start = Clock::now();
    auto report = analyze(f.mesh, f.field);
    const double elapsed = seconds_since(start);
    o.require(report.mu == report.c_plus - report.c_minus, f.name + " mu != c_plus - c_minus");
    if (f.mesh.vertex_count() >= 32 * 32) {
      slowest_large = std::max(slowest_large, elapsed);
      o.require(elapsed < 1.0, f.name + " took " + std::to_string(elapsed) + " s");
    }
    ++checked;
  }
  o.require(slowest_large > 0.0, "no 32x32 fixture in the manifest");
  o.detail << checked << " fixtures, slowest 32x32 analyze " << slowest_large << " s";
}

void dichotomy(Outcome& o) {
  int bounded = 0;
  int linear = 0;
  const std::array<std::pair<int, int>, 3> sizes{{{16, 16}, {24, 20}, {32, 32}}};
  for (auto [nt, ny] : sizes) {
    auto mesh = make_cylinder(nt, ny);
    // Disc bumps, positive and negative, at several places.
    for (double theta : {1.0, 3.0, 5.0})
      for (double radius : {0.35, 0.5})
        for (double height : {1.0, -0.75}) {
          FieldPreset p;
          p.kind = PresetKind::disc_bump;
          p.center = Eigen::Vector2d(theta, 0.1 * theta - 0.3);
          p.radius = radius;
          p.height = height;
          auto report = analyze(mesh, sample_preset(mesh, p));
          o.require(report.verdict == Verdict::bounded && report.c_plus == 0.0 && report.c_minus == 0.0,
                    "disc bump not bounded");
          ++bounded;
        }
    // Annular plateaus, wells and spiked plateaus.
    for (double height : {0.5, 1.0, 2.0})
      for (double modulation : {0.0, 0.3}) {
        FieldPreset p;
        p.kind = PresetKind::annular_plateau;
        p.height = height;
        p.modulation = modulation;
        auto report = analyze(mesh, sample_preset(mesh, p));
        o.require(report.verdict == Verdict::linear && report.mu > 0.0, "plateau not linear");
        ++linear;
      }
    for (auto kind : {PresetKind::annular_well, PresetKind::plateau_with_spike}) {
      FieldPreset p;
      p.kind = kind;
      auto report = analyze(mesh, sample_preset(mesh, p));
      o.require(report.verdict == Verdict::linear && report.mu > 0.0, std::string(to_string(kind)) + " not linear");
      ++linear;
    }
  }
  o.require(bounded >= 20 && linear >= 20, "suite too small");
  o.detail << bounded << " contractible, " << linear << " plateau fields";
}

void oracle_equivalence(Outcome& o) {
  const auto start = Clock::now();
  int checked = 0;
  for (const auto& f : manifest_fixtures()) {
    if (f.mesh.vertex_count() > 400) continue;
    auto brute = brute_force_minimax(f.mesh, f.field);
    auto report = analyze(f.mesh, f.field);
    o.require(brute.simply_connected == report.simply_connected, f.name + " sign structure");
    o.require(brute.c_plus == report.c_plus && brute.c_minus == report.c_minus, f.name + " values differ");
    ++checked;
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 60.0, "suite took " + std::to_string(elapsed) + " s");
  o.require(checked > 0, "no small fixtures");
  o.detail << checked << " fixtures in " << elapsed << " s";
}

// Criteria 4 to 6 share one randomized suite.
struct RandomSuite {
  SurfaceMesh mesh = make_cylinder(16, 16);
  std::vector<HamiltonianField> fields = random_suite(mesh, 1000, 20240601);
  std::vector<GrowthReport> reports;

  RandomSuite() {
    for (const auto& f : fields) reports.push_back(analyze(mesh, f));
  }
};

const RandomSuite& random_fields() {
  static const RandomSuite suite;
  return suite;
}

void signs(Outcome& o) {
  const auto& s = random_fields();
  for (const auto& r : s.reports) o.require(r.c_plus >= 0.0 && r.c_minus <= 0.0, "sign violated");
  o.detail << s.reports.size() << " fields";
}

void criticality(Outcome& o) {
  const auto& s = random_fields();
  for (std::size_t i = 0; i < s.fields.size(); ++i) {
    auto critical = discrete_critical_values(s.mesh, s.fields[i]);
    critical.push_back(0.0);
    for (double c : {s.reports[i].c_plus, s.reports[i].c_minus})
      o.require(std::find(critical.begin(), critical.end(), c) != critical.end(), "value is not critical");
  }
  o.detail << s.fields.size() << " fields";
}

void contractibility(Outcome& o) {
  const auto& s = random_fields();
  int zero = 0;
  for (std::size_t i = 0; i < s.fields.size(); ++i) {
    const bool vanish = s.reports[i].c_plus == 0.0 && s.reports[i].c_minus == 0.0;
    const bool contractible = is_region_contractible(s.mesh, support_region(s.mesh, s.fields[i])).contractible;
    o.require(vanish == contractible, "field " + std::to_string(i));
    zero += vanish;
  }
  o.require(zero > 0 && zero < static_cast<int>(s.fields.size()), "suite exercises only one side");
  o.detail << zero << " contractible, " << s.fields.size() - zero << " not";
}

void strict_intermediate(Outcome& o) {
  auto mesh = load_mesh("meshes/cylinder_8x8.json");
  auto report = analyze(mesh, load_field("fields/cylinder_8x8__plateau_with_spike.json", mesh));
  o.require(report.mu == 1.0, "mu");
  o.require(report.initial_slope == 2.0, "initial slope");
  o.require(0.0 < report.mu && report.mu < report.initial_slope, "not strictly between");
  o.detail << "mu " << report.mu << ", initial slope " << report.initial_slope;
}

double disc_area(const SurfaceMesh& mesh, const SubComplex& disc) {
  double area = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f)
    if (disc.faces[f]) area += mesh.face_areas()[f];
  return area;
}

void decomposition(Outcome& o) {
  for (const auto& f : manifest_fixtures()) {
    auto report = analyze(f.mesh, f.field);
    const double eps = f.name == "cylinder_32x16/generic" ? 0.125 : default_epsilon(report, f.field);
    const double kappa = default_kappa(f.field, report.c_minus, report.c_plus, eps);
    auto d = decompose(f.mesh, f.field, report, eps, kappa);
    for (int v = 0; v < f.mesh.vertex_count(); ++v) {
      o.require(d.K.values[v] + d.H0.values[v] == f.field.values[v], f.name + " K + H0 != H");
      if (d.H0.values[v] != 0.0) o.require(d.z_eps.vertices[v], f.name + " H0 outside Z(eps)");
    }
    double area = 0.0;
    for (const auto& disc : d.hull_discs) area += disc_area(f.mesh, disc);
    o.require(std::abs(d.sikorav_C - 16.0 * area) <= 1e-12 * std::max(1.0, 16.0 * area), f.name + " C != 16 area");
    if (kappa < eps / 2) {
      auto half = decompose(f.mesh, f.field, report, eps / 2, kappa);
      o.require(half.sikorav_C == d.sikorav_C, f.name + " C depends on epsilon");
    }
    if (f.name == "cylinder_32x16/generic") {
      o.require(d.k_span() == report.mu + 4 * eps, "generic span " + std::to_string(d.k_span()));
      o.require(d.sikorav_C > 0.0, "generic fixture has no hull");
      o.detail << "generic: span " << d.k_span() << " = mu + 4 eps, C " << d.sikorav_C << "; ";
    }
  }
}

void scaling(Outcome& o) {
  auto mesh = make_cylinder(16, 16);
  auto fields = random_suite(mesh, 100, 9);
  for (const auto& f : fields) {
    const double plus = compute_c(mesh, f, Side::plus).value;
    const double minus = compute_c(mesh, f, Side::minus).value;
    for (double lambda : {0.5, 2.0, 10.0}) {
      auto g = f.scaled(lambda);
      o.require(compute_c(mesh, g, Side::plus).value == lambda * plus, "c+ scaling");
      o.require(compute_c(mesh, g, Side::minus).value == lambda * minus, "c- scaling");
    }
    o.require(compute_c(mesh, f.scaled(-1.0), Side::plus).value == -minus, "c+(-H) != -c-(H)");
  }
  o.detail << fields.size() << " fields";
}

void flow_verification(Outcome& o) {
  const auto start = Clock::now();
  auto manifest = read_json(fixture("manifest.json"));
  const int resolution = manifest["flow"]["resolution"].get<int>();
  auto mesh = make_cylinder(resolution, resolution + 1);
  const Chart chart = Chart::of(mesh);
  const FieldPreset preset = preset_from_json(read_json(fixture(manifest["flow"]["field"].get<std::string>())));
  auto report = analyze(mesh, sample_preset(mesh, preset));
  ChartField closed(resolve_preset(preset, chart), chart);
  const double eps = default_epsilon(report, sample_preset(mesh, preset));
  auto rho = build_cutoff(report.c_minus, report.c_plus, eps);

  const Eigen::Vector2d size = chart.upper - chart.lower;
  const Point2<double> x0 = chart.lower + Eigen::Vector2d(0.3 * size.x(), 0.6 * size.y());
  auto spec = chart_flow_spec(closed, 1e-3, 1.0);
  const double drift = integrate(spec, x0, 0).energy_drift;

  std::vector<Point2<double>> points;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      points.push_back(chart.lower + Eigen::Vector2d((0.1 + 0.8 * (i + 0.5) / 10) * size.x(),
                                                     (0.1 + 0.8 * (j + 0.5) / 10) * size.y()));
  auto split = split_spec(spec, rho);
  const double error = verify_commutation(split.k, split.h0, points, 1.0, 1.0).max();

  std::array<double, 3> drifts{};
  const std::array<double, 3> steps{0.02, 0.01, 0.005};
  for (int i = 0; i < 3; ++i) drifts[i] = integrate(chart_flow_spec(closed, steps[i], 1.0), x0, 0).energy_drift;
  const double r1 = drifts[0] / drifts[1];
  const double r2 = drifts[1] / drifts[2];
  const double elapsed = seconds_since(start);

  o.require(report.c_plus > 0.0, "fixture is not linear");
  o.require(error < 1e-6, "commutation error " + std::to_string(error));
  o.require(drift < 1e-8, "energy drift " + std::to_string(drift));
  o.require(r1 >= 12.0 && r1 <= 20.0 && r2 >= 12.0 && r2 <= 20.0, "halving ratios");
  o.require(elapsed < 10.0, "runtime");
  o.detail << "commutation " << error << ", drift " << drift << ", ratios " << r1 << " " << r2 << ", " << elapsed
           << " s";
}

void refinement(Outcome& o) {
  double last = std::numeric_limits<double>::infinity();
  for (int n : {8, 16, 32, 64}) {
    auto mesh = make_cylinder(n, n);
    FieldPreset p;
    p.kind = PresetKind::annular_plateau;
    p.band = std::array<double, 2>{-0.02, 0.02};
    p.ramp = 0.25;
    const Chart chart = Chart::of(mesh);
    ChartField closed(resolve_preset(p, chart), chart);
    const double spacing = std::max(2 * std::numbers::pi / n, 2.0 / (n - 1));
    const double err = std::abs(compute_c(mesh, sample_preset(mesh, p), Side::plus).value - 1.0);
    o.require(err <= 2 * spacing * closed.lipschitz(), "n = " + std::to_string(n) + " outside bound");
    o.require(err <= last, "not monotone at n = " + std::to_string(n));
    last = err;
    o.detail << "n " << n << ": " << err << "; ";
  }
}

std::string run_cli(const std::string& args) {
  const std::string command = std::string(HOFER_CLI) + " " + args;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) throw std::runtime_error("cannot run " + command);
  std::string out;
  std::array<char, 4096> buffer;
  while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe.get())) out.append(buffer.data(), n);
  return out;
}

void determinism(Outcome& o) {
  const std::string args = "analyze --mesh " + fixture("meshes/cylinder_32x16.json") + " --field " +
                           fixture("fields/cylinder_32x16__generic.json");
  const std::string first = run_cli(args);
  const std::string second = run_cli(args);
  o.require(!first.empty() && first.find("\"mu\"") != std::string::npos, "no report");
  o.require(first == second, "reports differ");
  o.detail << first.size() << " bytes, identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"1 formula mu = c+ - c-", formula},
      {"2 dichotomy", dichotomy},
      {"3 oracle equivalence", oracle_equivalence},
      {"4 sign of c+ and c-", signs},
      {"5 c+- are critical values", criticality},
      {"6 contractible support iff c+- = 0", contractibility},
      {"7 strict intermediate example", strict_intermediate},
      {"8 decomposition identities", decomposition},
      {"9 scaling and symmetry", scaling},
      {"10 flow verification", flow_verification},
      {"11 convergence under refinement", refinement},
      {"12 CLI determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::string detail = o.detail.str();
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
