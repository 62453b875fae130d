#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hofer/field.hpp"
#include "hofer/surface.hpp"

namespace hofer {

enum class LevelSide { above, below };

/// Full subcomplex on {H >= E} (above) or {H <= E} (below).
SubComplex level_complex(const SurfaceMesh& mesh, const HamiltonianField& field, double level, LevelSide side);

enum class Side { plus, minus };

struct SweptLevel {
  double level;
  bool contractible;
};

struct MinimaxResult {
  double value = 0.0;
  std::optional<MeshLoop> witness;
  Side side = Side::plus;
  std::vector<SweptLevel> swept_levels;  // ascending for plus, descending for minus
};

/// c+ (plus) or c- (minus) by bisection over the distinct vertex values of
/// the right sign. Throws SimplyConnectedSurface when the mesh has trivial
/// fundamental group, and whatever check_compact_support throws.
MinimaxResult compute_c(const SurfaceMesh& mesh, const HamiltonianField& field, Side side);

enum class Verdict { bounded, linear };

const char* to_string(Verdict verdict);

struct GrowthReport {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double mu = 0.0;
  Verdict verdict = Verdict::bounded;
  std::optional<MeshLoop> witness_plus;
  std::optional<MeshLoop> witness_minus;
  double initial_slope = 0.0;
  bool simply_connected = false;
  std::map<std::string, bool> checks;
  std::size_t field_digest = 0;
};

struct AnalyzeOptions {
  bool oracle = false;
  int max_cycle_length = 0;  // 0: exhaustive
  /// Upper bound on worker threads; 0 reads HOFER_ASYM_THREADS, unset means 2.
  int threads = 0;
};

/// Stable hash of the field values, used to pair reports with decompositions.
std::size_t field_digest(const HamiltonianField& field);

GrowthReport analyze(const SurfaceMesh& mesh, const HamiltonianField& field, const AnalyzeOptions& options = {});

}  // namespace hofer
