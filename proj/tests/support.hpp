#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "hofer/field.hpp"
#include "hofer/io.hpp"
#include "hofer/surface.hpp"

namespace testing {

using namespace hofer;

inline std::string fixture(const std::string& relative) { return std::string(HOFER_FIXTURE_DIR) + "/" + relative; }

inline SurfaceMesh load_mesh(const std::string& relative) { return mesh_from_json(read_json(fixture(relative))); }

inline HamiltonianField load_field(const std::string& relative, const SurfaceMesh& mesh) {
  return field_from_json(read_json(fixture(relative)), mesh);
}

inline HamiltonianField field_of(const SurfaceMesh& mesh, Eigen::VectorXd values) {
  HamiltonianField field;
  field.mesh_name = mesh.name();
  field.values = std::move(values);
  return field;
}

inline HamiltonianField preset_field(const SurfaceMesh& mesh, PresetKind kind, double height = 1.0) {
  FieldPreset preset;
  preset.kind = kind;
  preset.height = height;
  return sample_preset(mesh, preset);
}

// Hole centres of a planar mesh: centroids of every end cycle but the one
// with the largest extent.
inline std::vector<Eigen::Vector2d> hole_centres(const SurfaceMesh& mesh) {
  std::vector<Eigen::Vector2d> out;
  if (mesh.period()) return out;
  int outer = 0;
  double widest = -1.0;
  for (int e = 0; e < static_cast<int>(mesh.ends().size()); ++e) {
    double w = 0.0;
    for (int v : mesh.ends()[e]) w = std::max(w, mesh.coords()[v].cwiseAbs().maxCoeff());
    if (w > widest) widest = w, outer = e;
  }
  for (int e = 0; e < static_cast<int>(mesh.ends().size()); ++e) {
    if (e == outer) continue;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int v : mesh.ends()[e]) c += mesh.coords()[v];
    out.push_back(c / static_cast<double>(mesh.ends()[e].size()));
  }
  return out;
}

// Winding vector of a straight edge u -> v, in turns: around the cylinder
// axis, or around each hole of a planar mesh.
inline std::vector<double> edge_turns(const SurfaceMesh& mesh, const std::vector<Eigen::Vector2d>& holes, int u,
                                      int v) {
  const auto& a = mesh.coords()[u];
  const auto& b = mesh.coords()[v];
  if (mesh.period()) {
    const double p = *mesh.period();
    double d = b.x() - a.x();
    d -= p * std::round(d / p);
    return {d / p};
  }
  std::vector<double> out;
  for (const auto& c : holes) {
    const Eigen::Vector2d x = a - c;
    const Eigen::Vector2d y = b - c;
    out.push_back(std::atan2(x.x() * y.y() - x.y() * y.x(), x.dot(y)) / (2.0 * std::numbers::pi));
  }
  return out;
}

inline std::vector<long> cycle_winding(const SurfaceMesh& mesh, const std::vector<int>& cycle) {
  const auto holes = hole_centres(mesh);
  std::vector<double> sum(mesh.period() ? 1 : holes.size(), 0.0);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    auto t = edge_turns(mesh, holes, cycle[i], cycle[(i + 1) % cycle.size()]);
    for (std::size_t k = 0; k < t.size(); ++k) sum[k] += t[k];
  }
  std::vector<long> out;
  for (double s : sum) out.push_back(std::lround(s));
  return out;
}

inline bool winds(const SurfaceMesh& mesh, const std::vector<int>& cycle) {
  auto w = cycle_winding(mesh, cycle);
  return std::any_of(w.begin(), w.end(), [](long x) { return x != 0; });
}

// True when the graph induced on the mask carries a closed walk that winds
// around the cylinder or around some hole. Walks the induced graph keeping
// accumulated turns per vertex; a disagreement on a non-tree edge is a
// winding cycle.
inline bool induced_graph_winds(const SurfaceMesh& mesh, const std::vector<bool>& mask) {
  const auto holes = hole_centres(mesh);
  const int n = mesh.vertex_count();
  std::vector<std::vector<double>> pot(n);
  std::vector<bool> seen(n, false);
  for (int s = 0; s < n; ++s) {
    if (!mask[s] || seen[s]) continue;
    seen[s] = true;
    pot[s].assign(mesh.period() ? 1 : holes.size(), 0.0);
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int e : mesh.vertex_edges(u)) {
        int v = mesh.other_vertex(e, u);
        if (!mask[v]) continue;
        auto t = edge_turns(mesh, holes, u, v);
        std::vector<double> p = pot[u];
        for (std::size_t k = 0; k < t.size(); ++k) p[k] += t[k];
        if (!seen[v]) {
          seen[v] = true;
          pot[v] = p;
          queue.push(v);
        } else {
          for (std::size_t k = 0; k < p.size(); ++k)
            if (std::abs(p[k] - pot[v][k]) > 0.5) return true;
        }
      }
    }
  }
  return false;
}

// c+ from winding numbers alone: the largest positive level whose
// superlevel graph winds, else 0.
inline double winding_c_plus(const SurfaceMesh& mesh, const Eigen::VectorXd& h) {
  std::vector<double> levels;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h[i] > 0) levels.push_back(h[i]);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double e : levels) {
    std::vector<bool> mask(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) mask[v] = h[v] >= e;
    if (induced_graph_winds(mesh, mask)) return e;
  }
  return 0.0;
}

inline double winding_c_minus(const SurfaceMesh& mesh, const Eigen::VectorXd& h) {
  return -winding_c_plus(mesh, -h);
}

// Vertices on an end or adjacent to one.
inline std::vector<bool> near_end(const SurfaceMesh& mesh) {
  std::vector<bool> out(mesh.vertex_count(), false);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.is_end_vertex(v)) continue;
    out[v] = true;
    for (int e : mesh.vertex_edges(v)) out[mesh.other_vertex(e, v)] = true;
  }
  return out;
}

// Dyadic values k/32 keep scaling by 0.5, 2 and 10 exact.
inline double dyadic(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng) / 32.0;
}

// Random compactly supported field, zero near the ends. Alternates between
// scattered values, a blob around a random vertex and a ring (a band of rows
// on the cylinder, a square annulus about the origin on planar meshes), the
// last either with gaps or with scattered values of both signs on top.
inline HamiltonianField random_field(const SurfaceMesh& mesh, std::mt19937_64& rng) {
  const auto zero = near_end(mesh);
  const int n = mesh.vertex_count();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int mode = std::uniform_int_distribution<int>(0, 3)(rng);
  if (mode == 0) {
    const double density = 0.2 + 0.7 * unit(rng);
    const int bias = std::uniform_int_distribution<int>(-16, 16)(rng);
    for (int v = 0; v < n; ++v)
      if (unit(rng) < density) h[v] = dyadic(rng, -32 + bias, 32 + bias);
  } else if (mode == 1) {
    const int centre = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const double radius = 0.2 + 0.8 * unit(rng);
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    for (int v = 0; v < n; ++v) {
      Eigen::Vector2d d = mesh.coords()[v] - mesh.coords()[centre];
      if (mesh.period()) d.x() -= *mesh.period() * std::round(d.x() / *mesh.period());
      if (d.norm() < radius) h[v] = sign * dyadic(rng, 1, 64);
    }
  } else {
    const bool cylinder = mesh.period().has_value();
    const double lo = cylinder ? -1.0 + 1.6 * unit(rng) : 0.25 + 0.5 * unit(rng);
    const double hi = lo + 0.1 + 0.4 * unit(rng);
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double gaps = mode == 2 ? 0.2 * unit(rng) : 0.0;
    for (int v = 0; v < n; ++v) {
      const auto& x = mesh.coords()[v];
      const double r = cylinder ? x.y() : x.cwiseAbs().maxCoeff();
      if (r >= lo && r <= hi && unit(rng) >= gaps) h[v] = sign * dyadic(rng, 1, 64);
      else if (mode == 3 && unit(rng) < 0.2) h[v] = dyadic(rng, -64, 64);
    }
  }
  for (int v = 0; v < n; ++v)
    if (zero[v]) h[v] = 0.0;
  return field_of(mesh, h);
}

inline std::vector<bool> mask_of(const Eigen::VectorXd& h, auto predicate) {
  std::vector<bool> out(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) out[i] = predicate(h[i]);
  return out;
}

}  // namespace testing

#ifdef CHECK
#define CHECK_ERROR_CODE(expr, expected)            \
  do {                                              \
    bool thrown_ = false;                           \
    try {                                           \
      (void)(expr);                                 \
    } catch (const hofer::Error& e) {               \
      thrown_ = true;                               \
      CHECK_MESSAGE(e.code() == (expected), e.what()); \
    }                                               \
    CHECK_MESSAGE(thrown_, "expected an error");    \
  } while (0)
#endif
