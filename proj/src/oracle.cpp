#include "hofer/oracle.hpp"

#include <algorithm>
#include <functional>

#include "hofer/error.hpp"

namespace hofer {

namespace {

/// Depth-first search for simple cycles through a fixed start vertex. A
/// cycle is reported once per orientation pair: its second vertex is
/// smaller than its last.
class CycleSearch {
 public:
  using Visitor = std::function<bool(const std::vector<int>&)>;

  CycleSearch(const SurfaceMesh& mesh, int max_length, std::size_t guard, std::size_t* count)
      : mesh_(mesh), max_length_(max_length), guard_(guard), count_(count), on_path_(mesh.vertex_count(), false) {}

  /// `admit(w)` decides whether w may follow the start vertex on a path.
  /// Returns true when the visitor asked to stop.
  bool run(int start, const std::function<bool(int)>& admit, const Visitor& visit) {
    start_ = start;
    admit_ = &admit;
    visit_ = &visit;
    path_.assign(1, start);
    on_path_[start] = true;
    bool stop = extend(start);
    on_path_[start] = false;
    return stop;
  }

 private:
  bool extend(int v) {
    for (int e : mesh_.vertex_edges(v)) {
      const int w = mesh_.other_vertex(e, v);
      if (w == start_) {
        if (path_.size() >= 3 && path_[1] < path_.back()) {
          if (++*count_ > guard_)
            throw Error(ErrorCode::TooLarge, "more than " + std::to_string(guard_) + " simple cycles");
          if ((*visit_)(path_)) return true;
        }
        continue;
      }
      if (on_path_[w] || !(*admit_)(w)) continue;
      if (max_length_ > 0 && static_cast<int>(path_.size()) >= max_length_) continue;
      path_.push_back(w);
      on_path_[w] = true;
      bool stop = extend(w);
      on_path_[w] = false;
      path_.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const SurfaceMesh& mesh_;
  int max_length_;
  std::size_t guard_;
  std::size_t* count_;
  std::vector<bool> on_path_;
  std::vector<int> path_;
  int start_ = 0;
  const std::function<bool(int)>* admit_ = nullptr;
  const Visitor* visit_ = nullptr;
};

bool bounds_disc(const SurfaceMesh& mesh, const MeshLoop& loop) { return is_loop_contractible(mesh, loop).contractible; }

struct SideResult {
  double value = 0.0;
  std::optional<MeshLoop> witness;
};

SideResult search_plus(const SurfaceMesh& mesh, const Eigen::VectorXd& h, const MeshLoop& far_field, int max_length,
                       std::size_t guard, std::size_t* count) {
  std::vector<double> levels;
  for (Eigen::Index v = 0; v < h.size(); ++v)
    if (h[v] > 0.0) levels.push_back(h[v]);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  CycleSearch search(mesh, max_length, guard, count);
  for (double level : levels) {
    std::optional<MeshLoop> found;
    auto visit = [&](const std::vector<int>& cycle) {
      MeshLoop loop = MeshLoop::from_vertices(mesh, cycle);
      if (bounds_disc(mesh, loop)) return false;
      found = std::move(loop);
      return true;
    };
    for (int s = 0; s < mesh.vertex_count() && !found; ++s) {
      if (h[s] != level) continue;
      // A cycle is charged to its smallest vertex of value exactly `level`.
      auto admit = [&](int w) { return h[w] > level || (h[w] == level && w > s); };
      search.run(s, admit, visit);
    }
    if (found) return {level, std::move(found)};
  }
  return {0.0, far_field};
}

}  // namespace

CycleEnumeration enumerate_simple_cycles(const SurfaceMesh& mesh, int max_length, std::size_t guard) {
  CycleEnumeration out;
  out.max_length = max_length > 0 ? max_length : mesh.vertex_count();
  out.exhaustive = out.max_length >= mesh.vertex_count();
  std::size_t count = 0;
  CycleSearch search(mesh, out.max_length, guard, &count);
  auto visit = [&](const std::vector<int>& cycle) {
    out.cycles.push_back(MeshLoop::from_vertices(mesh, cycle));
    return false;
  };
  for (int s = 0; s < mesh.vertex_count(); ++s) {
    auto admit = [s](int w) { return w > s; };
    search.run(s, admit, visit);
  }
  return out;
}

OracleResult brute_force_minimax(const SurfaceMesh& mesh, const HamiltonianField& field, int max_length,
                                 std::size_t guard) {
  check_compact_support(mesh, field);
  OracleResult out;
  std::optional<MeshLoop> far_field;
  for (const auto& end : mesh.ends()) {
    try {
      MeshLoop loop = MeshLoop::from_vertices(mesh, end);
      if (!bounds_disc(mesh, loop)) {
        far_field = std::move(loop);
        break;
      }
    } catch (const Error&) {
    }
  }
  if (!far_field) {
    out.simply_connected = true;
    return out;
  }
  auto plus = search_plus(mesh, field.values, *far_field, max_length, guard, &out.cycles_examined);
  Eigen::VectorXd negated = -field.values;
  auto minus = search_plus(mesh, negated, *far_field, max_length, guard, &out.cycles_examined);
  out.c_plus = plus.value;
  out.witness_plus = std::move(plus.witness);
  out.c_minus = -minus.value + 0.0;
  out.witness_minus = std::move(minus.witness);
  return out;
}

}  // namespace hofer
