#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hofer/field.hpp"
#include "hofer/surface.hpp"

namespace hofer {

inline constexpr std::size_t kCycleGuard = 1'000'000;

struct CycleEnumeration {
  std::vector<MeshLoop> cycles;
  int max_length = 0;
  bool exhaustive = false;  // max_length reached the vertex count
};

/// Every simple edge cycle of length <= max_length (0: no bound), once up to
/// rotation and reversal. Throws TooLarge past `guard` cycles.
CycleEnumeration enumerate_simple_cycles(const SurfaceMesh& mesh, int max_length = 0,
                                         std::size_t guard = kCycleGuard);

struct OracleResult {
  double c_plus = 0.0;
  double c_minus = 0.0;
  std::optional<MeshLoop> witness_plus;
  std::optional<MeshLoop> witness_minus;
  bool simply_connected = false;
  std::size_t cycles_examined = 0;
};

/// c+ and c- straight from their definitions: extreme loop minima (maxima)
/// over all simple cycles that do not bound a disc, decided by cutting.
/// Levels are visited from the top, and at each level only cycles through a
/// vertex of exactly that value are new. A non-contractible end cycle, where
/// H vanishes, clamps both values at 0; when no end is non-contractible the
/// surface is a plane and (0, 0) is returned with simply_connected set.
OracleResult brute_force_minimax(const SurfaceMesh& mesh, const HamiltonianField& field, int max_length = 0,
                                 std::size_t guard = kCycleGuard);

}  // namespace hofer
