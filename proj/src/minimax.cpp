#include "hofer/minimax.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <limits>

#include "hofer/error.hpp"
#include "hofer/homotopy.hpp"
#include "hofer/oracle.hpp"

namespace hofer {

SubComplex level_complex(const SurfaceMesh& mesh, const HamiltonianField& field, double level, LevelSide side) {
  std::vector<bool> mask(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    mask[v] = side == LevelSide::above ? field.values[v] >= level : field.values[v] <= level;
  return SubComplex::induced(mesh, mask);
}

namespace {

std::optional<MeshLoop> non_contractible_end(const SurfaceMesh& mesh) {
  const HomotopyBasis& basis = mesh.homotopy();
  for (const auto& end : mesh.ends()) {
    if (basis.is_trivial(end)) continue;
    try {
      return MeshLoop::from_vertices(mesh, end);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

MinimaxResult sweep_plus(const SurfaceMesh& mesh, const HamiltonianField& field) {
  std::vector<double> levels;
  for (Eigen::Index v = 0; v < field.values.size(); ++v)
    if (field.values[v] > 0.0) levels.push_back(field.values[v]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  MinimaxResult result;
  result.side = Side::plus;
  // Invariant: levels[lo] is non-contractible (lo = -1 stands for level 0),
  // levels[hi] is contractible (hi = size stands for +infinity).
  int lo = -1;
  int hi = static_cast<int>(levels.size());
  std::optional<MeshLoop> witness;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    auto verdict = is_region_contractible(mesh, level_complex(mesh, field, levels[mid], LevelSide::above));
    result.swept_levels.push_back({levels[mid], verdict.contractible});
    if (verdict.contractible) {
      hi = mid;
    } else {
      lo = mid;
      witness = std::move(verdict.witness);
    }
  }
  if (lo >= 0) {
    result.value = levels[lo];
    result.witness = std::move(witness);
  } else {
    result.value = 0.0;
    result.witness = non_contractible_end(mesh);
    if (!result.witness) {
      auto verdict = is_region_contractible(mesh, level_complex(mesh, field, 0.0, LevelSide::above));
      result.witness = std::move(verdict.witness);
    }
    result.swept_levels.push_back({0.0, false});
  }
  std::sort(result.swept_levels.begin(), result.swept_levels.end(),
            [](const SweptLevel& a, const SweptLevel& b) { return a.level < b.level; });
  return result;
}

int thread_budget(const AnalyzeOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("HOFER_ASYM_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<int>(n);
  }
  return 2;
}

bool witness_ok(const SurfaceMesh& mesh, const HamiltonianField& field, const std::optional<MeshLoop>& loop,
                double value, Side side) {
  if (!loop) return false;
  double extreme = side == Side::plus ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  for (int v : loop->vertices())
    extreme = side == Side::plus ? std::min(extreme, field.values[v]) : std::max(extreme, field.values[v]);
  return extreme == value && !is_loop_contractible(mesh, *loop).contractible;
}

}  // namespace

MinimaxResult compute_c(const SurfaceMesh& mesh, const HamiltonianField& field, Side side) {
  check_compact_support(mesh, field);
  if (mesh.first_homology_rank() == 0)
    throw Error(ErrorCode::SimplyConnectedSurface, "mesh '" + mesh.name() + "' is simply connected");
  if (side == Side::plus) return sweep_plus(mesh, field);
  MinimaxResult result = sweep_plus(mesh, field.scaled(-1.0));
  result.side = Side::minus;
  result.value = -result.value + 0.0;
  for (auto& level : result.swept_levels) level.level = -level.level + 0.0;
  return result;
}

const char* to_string(Verdict verdict) { return verdict == Verdict::bounded ? "bounded" : "linear"; }

std::size_t field_digest(const HamiltonianField& field) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(field.values[i]);
    for (int k = 0; k < 8; ++k) {
      hash ^= (bits >> (8 * k)) & 0xffU;
      hash *= 1099511628211ULL;
    }
  }
  return static_cast<std::size_t>(hash);
}

GrowthReport analyze(const SurfaceMesh& mesh, const HamiltonianField& field, const AnalyzeOptions& options) {
  check_compact_support(mesh, field);
  GrowthReport report;
  report.field_digest = field_digest(field);
  report.initial_slope = field.values.size() ? field.max() - field.min() : 0.0;

  if (mesh.first_homology_rank() == 0) {
    report.simply_connected = true;
  } else {
    MinimaxResult plus;
    MinimaxResult minus;
    if (thread_budget(options) >= 2) {
      auto pending = std::async(std::launch::async, [&] { return compute_c(mesh, field, Side::minus); });
      plus = compute_c(mesh, field, Side::plus);
      minus = pending.get();
    } else {
      plus = compute_c(mesh, field, Side::plus);
      minus = compute_c(mesh, field, Side::minus);
    }
    report.c_plus = plus.value;
    report.c_minus = minus.value;
    report.witness_plus = std::move(plus.witness);
    report.witness_minus = std::move(minus.witness);
  }
  report.mu = report.c_plus - report.c_minus;
  report.verdict = report.mu == 0.0 ? Verdict::bounded : Verdict::linear;

  report.checks["sig"] = report.c_plus >= 0.0 && report.c_minus <= 0.0;
  auto critical = discrete_critical_values(mesh, field);
  auto is_critical = [&](double c) {
    return c == 0.0 || std::find(critical.begin(), critical.end(), c) != critical.end();
  };
  report.checks["crit"] = is_critical(report.c_plus) && is_critical(report.c_minus);
  const bool support_contractible = is_region_contractible(mesh, support_region(mesh, field)).contractible;
  report.checks["cont"] = (report.c_plus == 0.0 && report.c_minus == 0.0) == support_contractible;
  report.checks["witness_valid"] =
      report.simply_connected ||
      (witness_ok(mesh, field, report.witness_plus, report.c_plus, Side::plus) &&
       witness_ok(mesh, field, report.witness_minus, report.c_minus, Side::minus));
  if (options.oracle) {
    OracleResult oracle = brute_force_minimax(mesh, field, options.max_cycle_length);
    report.checks["oracle_match"] = oracle.c_plus == report.c_plus && oracle.c_minus == report.c_minus &&
                                    oracle.simply_connected == report.simply_connected;
  }
  return report;
}

}  // namespace hofer
