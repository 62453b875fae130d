#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hofer/chart_flow.hpp"
#include "hofer/decomposition.hpp"
#include "hofer/error.hpp"
#include "hofer/io.hpp"
#include "hofer/minimax.hpp"
#include "hofer/oracle.hpp"
#include "hofer/plot.hpp"

using namespace hofer;

namespace {

struct Common {
  std::string mesh;
  std::string field;
  std::string out;
  long long seed = 0;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

std::string format_number(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

struct Loaded {
  SurfaceMesh mesh;
  HamiltonianField field;
};

Loaded load(const Common& c) {
  Loaded l{mesh_from_json(read_json(c.mesh)), {}};
  l.field = field_from_json(read_json(c.field), l.mesh);
  return l;
}

int run_mesh(const std::string& kind, const SurfaceParams& params, const std::string& name, const std::string& out) {
  SurfaceKind k;
  if (kind == "plane")
    k = SurfaceKind::plane;
  else if (kind == "cylinder")
    k = SurfaceKind::cylinder;
  else if (kind == "punctured_plane")
    k = SurfaceKind::punctured_plane;
  else
    throw Error(ErrorCode::InvalidParams, "unknown surface kind '" + kind + "'");
  SurfaceMesh mesh = make_standard_surface(k, params);
  if (!name.empty()) mesh.set_name(name);
  emit(out, dump(mesh_to_json(mesh)));
  return 0;
}

struct AnalyzeFlags {
  bool oracle = false;
  int max_cycle_length = 0;
  std::string plot;
};

int run_analyze(const Common& c, const AnalyzeFlags& flags, std::optional<double> epsilon, std::optional<double> kappa,
                bool decompose_too, const std::string& fields_out) {
  Loaded l = load(c);
  AnalyzeOptions options;
  options.oracle = flags.oracle;
  options.max_cycle_length = flags.max_cycle_length;
  GrowthReport report = analyze(l.mesh, l.field, options);
  Json doc = report_to_json(report, l.mesh);
  doc["seed"] = c.seed;
  if (decompose_too) {
    double eps = epsilon.value_or(default_epsilon(report, l.field));
    double k = kappa.value_or(default_kappa(l.field, report.c_minus, report.c_plus, eps));
    Decomposition d = decompose(l.mesh, l.field, report, eps, k);
    doc["upper_bound"] = certificate_to_json(upper_bound_certificate(d, report));
    if (!fields_out.empty()) emit(fields_out, dump({{"K", field_to_json(d.K)}, {"H0", field_to_json(d.H0)}}));
  }
  if (!flags.plot.empty()) emit_plot(l.mesh, l.field, report, flags.plot);
  emit(c.out, dump(doc));
  if (flags.oracle && !report.checks.at("oracle_match")) {
    std::cerr << "error: oracle disagrees with the level sweep\n";
    return 3;
  }
  return 0;
}

int run_oracle(const Common& c, int max_cycle_length) {
  Loaded l = load(c);
  OracleResult result = brute_force_minimax(l.mesh, l.field, max_cycle_length);
  Json doc = oracle_to_json(result, l.mesh);
  doc["seed"] = c.seed;
  emit(c.out, dump(doc));
  return 0;
}

struct FlowFlags {
  std::string chart = "cylinder";
  int resolution = 32;
  double extent = 1.0;
  std::string preset = "annular_plateau";
  double t = 1.0;
  double step = 1e-3;
  int samples = 100;
  std::vector<double> x0;
  std::string csv;
  std::optional<double> epsilon;
  double max_drift = std::numeric_limits<double>::infinity();
};

int run_flow(const Common& c, const FlowFlags& f) {
  SurfaceMesh mesh;
  if (!c.mesh.empty())
    mesh = mesh_from_json(read_json(c.mesh));
  else if (f.chart == "cylinder")
    mesh = make_cylinder(f.resolution, f.resolution + 1, f.extent);
  else if (f.chart == "plane")
    mesh = make_plane(f.resolution + 1, f.extent);
  else
    throw Error(ErrorCode::InvalidParams, "unknown chart '" + f.chart + "'");
  const Chart chart = Chart::of(mesh);
  FieldPreset preset;
  if (!c.field.empty())
    preset = preset_from_json(read_json(c.field));
  else
    preset.kind = preset_kind_from_string(f.preset);
  HamiltonianField field = sample_preset(mesh, preset);
  ChartField closed(*field.preset, chart);

  GrowthReport report = analyze(mesh, field);
  const double eps = f.epsilon.value_or(default_epsilon(report, field));
  const CutoffProfile rho = build_cutoff(report.c_minus, report.c_plus, eps);
  ChartFlowSpec<double> spec = chart_flow_spec(closed, f.step, f.t);
  spec.max_energy_drift = f.max_drift;
  SplitSpecs split = split_spec(spec, rho);

  const Eigen::Vector2d size = chart.upper - chart.lower;
  Point2<double> x0 = chart.lower + Eigen::Vector2d(0.3 * size.x(), 0.6 * size.y());
  if (!f.x0.empty()) {
    if (f.x0.size() != 2) throw Error(ErrorCode::InvalidParams, "--x0 takes two numbers");
    x0 = {f.x0[0], f.x0[1]};
  }
  Trajectory<double> trajectory = integrate(spec, x0, std::max(1, static_cast<int>(std::lround(0.01 / f.step))));

  std::vector<Point2<double>> points;
  const int side = static_cast<int>(std::ceil(std::sqrt(std::max(1, f.samples))));
  for (int i = 0; i < side && static_cast<int>(points.size()) < f.samples; ++i)
    for (int j = 0; j < side && static_cast<int>(points.size()) < f.samples; ++j)
      points.push_back(chart.lower + Eigen::Vector2d((0.1 + 0.8 * (i + 0.5) / side) * size.x(),
                                                     (0.1 + 0.8 * (j + 0.5) / side) * size.y()));
  CommutationError<double> err = verify_commutation(split.k, split.h0, points, f.t, f.t);

  if (!f.csv.empty()) {
    std::ostringstream csv;
    csv << "t,q,p\n";
    for (const auto& [t, x] : trajectory.samples)
      csv << format_number(t) << ',' << format_number(x.x()) << ',' << format_number(x.y()) << '\n';
    emit(f.csv, csv.str());
  }
  Json doc = {{"chart", chart.cylinder ? "cylinder" : "plane"},
              {"preset", preset_to_json(*field.preset)},
              {"step", f.step},
              {"t", f.t},
              {"samples", points.size()},
              {"x0", {round12(x0.x()), round12(x0.y())}},
              {"energy_drift", round12(trajectory.energy_drift)},
              {"jacobian_drift", round12(trajectory.jacobian_drift)},
              {"commutation", {{"commute", round12(err.commute)}, {"compose", round12(err.compose)}}},
              {"epsilon", round12(eps)},
              {"c_plus", round12(report.c_plus)},
              {"c_minus", round12(report.c_minus)},
              {"seed", c.seed}};
  emit(c.out, dump(doc));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic Hofer growth of autonomous Hamiltonians on open surfaces"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_field) {
    sub->add_option("--mesh", common.mesh, "mesh JSON")->check(CLI::ExistingFile)->required(needs_field);
    sub->add_option("--field", common.field, "field JSON (values or preset)")->check(CLI::ExistingFile)->required(needs_field);
    sub->add_option("--out,-o", common.out, "output path (default stdout)");
    sub->add_option("--seed", common.seed, "recorded in the output; nothing is random");
  };

  std::string kind = "cylinder";
  std::string mesh_name;
  SurfaceParams params;
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a standard surface mesh");
  mesh_cmd->add_option("--kind", kind, "plane | cylinder | punctured_plane")
      ->check(CLI::IsMember({"plane", "cylinder", "punctured_plane"}));
  mesh_cmd->add_option("--n", params.n, "vertices per side (plane, punctured_plane)");
  mesh_cmd->add_option("--n-theta", params.n_theta, "vertices around (cylinder)");
  mesh_cmd->add_option("--n-y", params.n_y, "vertex rows (cylinder)");
  mesh_cmd->add_option("--extent", params.extent, "half side length or half height");
  mesh_cmd->add_option("--punctures", params.puncture_count, "number of punctures");
  mesh_cmd->add_option("--name", mesh_name, "mesh name");
  mesh_cmd->add_option("--out,-o", common.out, "output path (default stdout)");

  AnalyzeFlags flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "compute c+, c-, mu and the dichotomy verdict");
  add_common(analyze_cmd, true);
  analyze_cmd->add_flag("--oracle", flags.oracle, "cross-check against brute-force cycle enumeration");
  analyze_cmd->add_option("--max-cycle-length", flags.max_cycle_length, "oracle cycle length cap (0: none)");
  analyze_cmd->add_option("--plot", flags.plot, "write an SVG plot");

  std::optional<double> epsilon;
  std::optional<double> kappa;
  std::string fields_out;
  auto* decompose_cmd = app.add_subcommand("decompose", "analyze, then split H = K + H0 and certify r_H");
  add_common(decompose_cmd, true);
  decompose_cmd->add_flag("--oracle", flags.oracle, "cross-check against brute-force cycle enumeration");
  decompose_cmd->add_option("--max-cycle-length", flags.max_cycle_length, "oracle cycle length cap (0: none)");
  decompose_cmd->add_option("--plot", flags.plot, "write an SVG plot");
  decompose_cmd->add_option("--epsilon", epsilon, "cutoff band width")->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--kappa", kappa, "regular level in (0, epsilon)")->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--fields-out", fields_out, "write K and H0");

  int oracle_cap = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force c+ and c- by cycle enumeration");
  add_common(oracle_cmd, true);
  oracle_cmd->add_option("--max-cycle-length", oracle_cap, "cycle length cap (0: none)");

  FlowFlags flow;
  auto* flow_cmd = app.add_subcommand("flow", "integrate a closed-form Hamiltonian and verify the decomposition");
  add_common(flow_cmd, false);
  flow_cmd->add_option("--chart", flow.chart, "plane | cylinder (when no --mesh)")
      ->check(CLI::IsMember({"plane", "cylinder"}));
  flow_cmd->add_option("--resolution", flow.resolution, "faces per side of the generated chart mesh");
  flow_cmd->add_option("--extent", flow.extent, "half side length or half height of the chart");
  flow_cmd->add_option("--preset", flow.preset, "preset kind when no --field is given");
  flow_cmd->add_option("--t", flow.t, "flow time")->check(CLI::NonNegativeNumber);
  flow_cmd->add_option("--step", flow.step, "integrator step")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--samples", flow.samples, "sample points for the commutation check")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--x0", flow.x0, "trajectory start q p")->expected(2);
  flow_cmd->add_option("--csv", flow.csv, "trajectory CSV (t,q,p)");
  flow_cmd->add_option("--epsilon", flow.epsilon, "cutoff band width")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--max-drift", flow.max_drift, "fail when energy drift exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*mesh_cmd) return run_mesh(kind, params, mesh_name, common.out);
    if (*analyze_cmd) return run_analyze(common, flags, std::nullopt, std::nullopt, false, "");
    if (*decompose_cmd) return run_analyze(common, flags, epsilon, kappa, true, fields_out);
    if (*oracle_cmd) return run_oracle(common, oracle_cap);
    if (*flow_cmd) return run_flow(common, flow);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
