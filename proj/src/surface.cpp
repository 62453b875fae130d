#include "hofer/surface.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "dsu.hpp"
#include "hofer/error.hpp"
#include "hofer/homotopy.hpp"

namespace hofer {

using detail::DisjointSets;

struct SurfaceMesh::Cache {
  std::once_flag once;
  std::unique_ptr<HomotopyBasis> basis;
};

SurfaceMesh::SurfaceMesh(int vertex_count, std::vector<std::vector<int>> faces, Eigen::VectorXd face_area,
                         std::vector<std::vector<int>> ends)
    : vertex_count_(vertex_count),
      faces_(std::move(faces)),
      face_area_(std::move(face_area)),
      ends_(std::move(ends)),
      cache_(std::make_shared<Cache>()) {
  if (vertex_count_ < 0) throw Error(ErrorCode::InvalidMesh, "negative vertex count");
  if (face_area_.size() != static_cast<Eigen::Index>(faces_.size()))
    throw Error(ErrorCode::InvalidMesh, "face_area has " + std::to_string(face_area_.size()) + " entries for " +
                                            std::to_string(faces_.size()) + " faces");
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (faces_[f].size() < 3) throw Error(ErrorCode::InvalidMesh, "face " + std::to_string(f) + " has < 3 corners");
    for (int v : faces_[f])
      if (v < 0 || v >= vertex_count_)
        throw Error(ErrorCode::InvalidMesh, "face " + std::to_string(f) + " references vertex out of range");
  }
  for (std::size_t j = 0; j < ends_.size(); ++j) {
    if (ends_[j].size() < 2) throw Error(ErrorCode::InvalidMesh, "end " + std::to_string(j) + " is too short");
    for (int v : ends_[j])
      if (v < 0 || v >= vertex_count_)
        throw Error(ErrorCode::InvalidMesh, "end " + std::to_string(j) + " references vertex out of range");
  }
  vertex_ids_.resize(vertex_count_);
  std::iota(vertex_ids_.begin(), vertex_ids_.end(), 0LL);
  build_topology();
}

void SurfaceMesh::build_topology() {
  std::map<std::pair<int, int>, int> index;
  face_edges_.assign(faces_.size(), {});
  vertex_faces_.assign(vertex_count_, {});
  for (int f = 0; f < face_count(); ++f) {
    const auto& cycle = faces_[f];
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
      int u = cycle[i];
      int v = cycle[(i + 1) % k];
      if (std::find(vertex_faces_[u].begin(), vertex_faces_[u].end(), f) == vertex_faces_[u].end())
        vertex_faces_[u].push_back(f);
      if (u == v) continue;
      auto key = std::minmax(u, v);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({key.first, key.second});
        edge_faces_.emplace_back();
      }
      auto& incident = edge_faces_[it->second];
      if (std::find(incident.begin(), incident.end(), f) == incident.end()) incident.push_back(f);
      face_edges_[f].push_back(it->second);
    }
  }
  vertex_edges_.assign(vertex_count_, {});
  for (int e = 0; e < edge_count(); ++e) {
    vertex_edges_[edges_[e].a].push_back(e);
    vertex_edges_[edges_[e].b].push_back(e);
  }
  edge_end_.assign(edges_.size(), -1);
  end_vertex_.assign(vertex_count_, false);
  for (int j = 0; j < static_cast<int>(ends_.size()); ++j) {
    const auto& cycle = ends_[j];
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      end_vertex_[cycle[i]] = true;
      int e = find_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
      if (e >= 0) edge_end_[e] = j;
    }
  }
}

int SurfaceMesh::find_edge(int u, int v) const {
  if (u < 0 || u >= vertex_count_ || v < 0 || v >= vertex_count_) return -1;
  for (int e : vertex_edges_[u])
    if (edges_[e].a == v || edges_[e].b == v) return e;
  return -1;
}

void SurfaceMesh::set_coords(std::vector<Eigen::Vector2d> coords) {
  if (!coords.empty() && static_cast<int>(coords.size()) != vertex_count_)
    throw Error(ErrorCode::InvalidMesh, "coordinate count differs from vertex count");
  coords_ = std::move(coords);
}

void SurfaceMesh::set_vertex_ids(std::vector<long long> ids) {
  if (static_cast<int>(ids.size()) != vertex_count_)
    throw Error(ErrorCode::InvalidMesh, "vertex id count differs from vertex count");
  vertex_ids_ = std::move(ids);
}

const HomotopyBasis& SurfaceMesh::homotopy() const {
  if (!cache_) throw Error(ErrorCode::InvalidMesh, "empty mesh");
  std::call_once(cache_->once, [this] { cache_->basis = std::make_unique<HomotopyBasis>(*this); });
  if (!cache_->basis) throw Error(ErrorCode::InvalidMesh, "homotopy basis unavailable");
  return *cache_->basis;
}

// ---------------------------------------------------------------------------
// Validation

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::DegenerateFace: return "DegenerateFace";
    case DiagnosticKind::NonPositiveArea: return "NonPositiveArea";
    case DiagnosticKind::NonManifoldEdge: return "NonManifoldEdge";
    case DiagnosticKind::InconsistentOrientation: return "InconsistentOrientation";
    case DiagnosticKind::NonManifoldVertex: return "NonManifoldVertex";
    case DiagnosticKind::IsolatedVertex: return "IsolatedVertex";
    case DiagnosticKind::UnmarkedEnd: return "UnmarkedEnd";
    case DiagnosticKind::EndNotBoundary: return "EndNotBoundary";
    case DiagnosticKind::NoEnds: return "NoEnds";
    case DiagnosticKind::Disconnected: return "Disconnected";
  }
  return "Unknown";
}

std::vector<std::vector<int>> boundary_cycles(const SurfaceMesh& mesh) {
  // Boundary edges oriented as their unique face traverses them.
  std::multimap<int, int> next;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& cycle = mesh.face(f);
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
      int u = cycle[i];
      int v = cycle[(i + 1) % k];
      int e = mesh.find_edge(u, v);
      if (e >= 0 && mesh.is_boundary_edge(e)) next.emplace(u, v);
    }
  }
  std::vector<std::vector<int>> cycles;
  while (!next.empty()) {
    auto it = next.begin();
    const int start = it->first;
    std::vector<int> cycle{start};
    int v = it->second;
    next.erase(it);
    while (v != start) {
      auto step = next.find(v);
      if (step == next.end()) break;  // open chain on a broken mesh
      cycle.push_back(v);
      v = step->second;
      next.erase(step);
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

namespace {

std::vector<int> cycle_edge_set(const SurfaceMesh& mesh, const std::vector<int>& cycle, bool* complete) {
  std::vector<int> edges;
  *complete = true;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    int e = mesh.find_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
    if (e < 0) {
      *complete = false;
      continue;
    }
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

std::vector<Diagnostic> validate_mesh(const SurfaceMesh& mesh) {
  std::vector<Diagnostic> out;
  auto report = [&](DiagnosticKind kind, std::vector<int> elements, std::string message) {
    out.push_back({kind, std::move(elements), std::move(message)});
  };

  for (int f = 0; f < mesh.face_count(); ++f) {
    std::vector<int> sorted = mesh.face(f);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      report(DiagnosticKind::DegenerateFace, {f}, "face repeats a vertex");
    if (!(mesh.face_area(f) > 0.0) || !std::isfinite(mesh.face_area(f)))
      report(DiagnosticKind::NonPositiveArea, {f}, "face area must be positive and finite");
  }

  // Orientation: an interior edge is traversed once in each direction.
  std::vector<int> forward(mesh.edge_count(), 0);
  std::vector<int> backward(mesh.edge_count(), 0);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& cycle = mesh.face(f);
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
      int u = cycle[i];
      int v = cycle[(i + 1) % k];
      int e = mesh.find_edge(u, v);
      if (e < 0) continue;
      (mesh.edge(e).a == u ? forward : backward)[e]++;
    }
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (mesh.edge_faces(e).size() > 2)
      report(DiagnosticKind::NonManifoldEdge, {e}, "edge bounds more than two faces");
    else if (mesh.edge_faces(e).size() == 2 && (forward[e] != 1 || backward[e] != 1))
      report(DiagnosticKind::InconsistentOrientation, {e}, "adjacent faces traverse the edge in the same direction");
  }

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto& star = mesh.vertex_faces(v);
    if (star.empty()) {
      report(DiagnosticKind::IsolatedVertex, {v}, "vertex belongs to no face");
      continue;
    }
    int boundary = 0;
    DisjointSets sets(static_cast<int>(star.size()));
    auto slot = [&](int f) { return static_cast<int>(std::find(star.begin(), star.end(), f) - star.begin()); };
    for (int e : mesh.vertex_edges(v)) {
      const auto& incident = mesh.edge_faces(e);
      if (incident.size() == 1) ++boundary;
      if (incident.size() == 2) sets.unite(slot(incident[0]), slot(incident[1]));
    }
    int components = 0;
    for (int i = 0; i < static_cast<int>(star.size()); ++i)
      if (sets.find(i) == i) ++components;
    if (components != 1 || (boundary != 0 && boundary != 2))
      report(DiagnosticKind::NonManifoldVertex, {v}, "vertex star is not a disc or half-disc");
  }

  if (mesh.ends().empty()) report(DiagnosticKind::NoEnds, {}, "an open surface needs at least one end");

  auto cycles = boundary_cycles(mesh);
  std::vector<std::vector<int>> end_sets;
  for (int j = 0; j < static_cast<int>(mesh.ends().size()); ++j) {
    bool complete = false;
    end_sets.push_back(cycle_edge_set(mesh, mesh.ends()[j], &complete));
    bool all_boundary = complete;
    for (int e : end_sets.back()) all_boundary = all_boundary && mesh.is_boundary_edge(e);
    bool matches = false;
    for (const auto& cycle : cycles) {
      bool c = false;
      if (cycle_edge_set(mesh, cycle, &c) == end_sets.back()) matches = true;
    }
    if (!all_boundary || !matches)
      report(DiagnosticKind::EndNotBoundary, {j}, "end is not a boundary cycle of the mesh");
  }
  for (int c = 0; c < static_cast<int>(cycles.size()); ++c) {
    bool complete = false;
    auto set = cycle_edge_set(mesh, cycles[c], &complete);
    if (std::find(end_sets.begin(), end_sets.end(), set) == end_sets.end())
      report(DiagnosticKind::UnmarkedEnd, cycles[c], "boundary cycle is not flagged as an end");
  }

  if (mesh.vertex_count() > 0) {
    DisjointSets sets(mesh.vertex_count());
    for (int e = 0; e < mesh.edge_count(); ++e) sets.unite(mesh.edge(e).a, mesh.edge(e).b);
    int root = sets.find(0);
    for (int v = 1; v < mesh.vertex_count(); ++v)
      if (sets.find(v) != root) {
        report(DiagnosticKind::Disconnected, {v}, "mesh is not connected");
        break;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loops and subcomplexes

MeshLoop MeshLoop::from_vertices(const SurfaceMesh& mesh, std::vector<int> cycle) {
  for (int v : cycle)
    if (v < 0 || v >= mesh.vertex_count())
      throw Error(ErrorCode::LoopNotInMesh, "loop vertex " + std::to_string(v) + " out of range");
  if (cycle.size() < 3) throw Error(ErrorCode::NotEmbedded, "a loop needs at least three vertices");
  std::vector<int> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::NotEmbedded, "loop revisits a vertex");
  MeshLoop loop;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    int e = mesh.find_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
    if (e < 0)
      throw Error(ErrorCode::LoopNotInMesh, "no edge between " + std::to_string(cycle[i]) + " and " +
                                                std::to_string(cycle[(i + 1) % cycle.size()]));
    loop.edges_.push_back(e);
  }
  loop.vertices_ = std::move(cycle);
  return loop;
}

MeshLoop MeshLoop::reversed() const {
  MeshLoop out;
  out.vertices_.assign(vertices_.rbegin(), vertices_.rend());
  // edge i joins vertices i and i+1; after reversal it is edge (n-2-i), and
  // the closing edge stays last.
  const std::size_t n = edges_.size();
  for (std::size_t i = 0; i + 1 < n; ++i) out.edges_.push_back(edges_[n - 2 - i]);
  out.edges_.push_back(edges_[n - 1]);
  return out;
}

SubComplex SubComplex::empty(const SurfaceMesh& mesh) {
  return {std::vector<bool>(mesh.vertex_count(), false), std::vector<bool>(mesh.edge_count(), false),
          std::vector<bool>(mesh.face_count(), false)};
}

SubComplex SubComplex::whole(const SurfaceMesh& mesh) {
  return {std::vector<bool>(mesh.vertex_count(), true), std::vector<bool>(mesh.edge_count(), true),
          std::vector<bool>(mesh.face_count(), true)};
}

SubComplex SubComplex::induced(const SurfaceMesh& mesh, const std::vector<bool>& vertex_mask) {
  SubComplex out = empty(mesh);
  out.vertices = vertex_mask;
  for (int e = 0; e < mesh.edge_count(); ++e) out.edges[e] = vertex_mask[mesh.edge(e).a] && vertex_mask[mesh.edge(e).b];
  for (int f = 0; f < mesh.face_count(); ++f)
    out.faces[f] = std::all_of(mesh.face(f).begin(), mesh.face(f).end(), [&](int v) { return vertex_mask[v]; });
  return out;
}

SubComplex SubComplex::closure_of_faces(const SurfaceMesh& mesh, const std::vector<bool>& face_mask) {
  SubComplex out = empty(mesh);
  out.faces = face_mask;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!face_mask[f]) continue;
    for (int v : mesh.face(f)) out.vertices[v] = true;
    for (int e : mesh.face_edges(f)) out.edges[e] = true;
  }
  return out;
}

bool SubComplex::is_closed(const SurfaceMesh& mesh) const {
  if (static_cast<int>(vertices.size()) != mesh.vertex_count() || static_cast<int>(edges.size()) != mesh.edge_count() ||
      static_cast<int>(faces.size()) != mesh.face_count())
    return false;
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (edges[e] && !(vertices[mesh.edge(e).a] && vertices[mesh.edge(e).b])) return false;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!faces[f]) continue;
    for (int e : mesh.face_edges(f))
      if (!edges[e]) return false;
  }
  return true;
}

bool SubComplex::is_empty() const { return vertex_count() == 0; }

bool SubComplex::subset_of(const SubComplex& other) const {
  auto within = [](const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  return within(vertices, other.vertices) && within(edges, other.edges) && within(faces, other.faces);
}

int SubComplex::vertex_count() const { return static_cast<int>(std::count(vertices.begin(), vertices.end(), true)); }
int SubComplex::edge_count() const { return static_cast<int>(std::count(edges.begin(), edges.end(), true)); }
int SubComplex::face_count() const { return static_cast<int>(std::count(faces.begin(), faces.end(), true)); }

double SubComplex::area(const SurfaceMesh& mesh) const {
  double total = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f)
    if (faces[f]) total += mesh.face_area(f);
  return total;
}

SubComplex& SubComplex::operator|=(const SubComplex& other) {
  for (std::size_t i = 0; i < vertices.size(); ++i) vertices[i] = vertices[i] || other.vertices[i];
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = edges[i] || other.edges[i];
  for (std::size_t i = 0; i < faces.size(); ++i) faces[i] = faces[i] || other.faces[i];
  return *this;
}

// ---------------------------------------------------------------------------
// Standard surfaces

SurfaceMesh make_plane(int n, double extent) {
  if (n < 3) throw Error(ErrorCode::InvalidParams, "plane resolution must be >= 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error(ErrorCode::InvalidParams, "degenerate extent");
  const double h = 2.0 * extent / (n - 1);
  auto id = [n](int i, int j) { return j * n + i; };
  std::vector<std::vector<int>> faces;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  std::vector<int> outer;
  for (int i = 0; i + 1 < n; ++i) outer.push_back(id(i, 0));
  for (int j = 0; j + 1 < n; ++j) outer.push_back(id(n - 1, j));
  for (int i = n - 1; i > 0; --i) outer.push_back(id(i, n - 1));
  for (int j = n - 1; j > 0; --j) outer.push_back(id(0, j));
  Eigen::VectorXd area = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(faces.size()), h * h);
  SurfaceMesh mesh(n * n, std::move(faces), std::move(area), {outer});
  std::vector<Eigen::Vector2d> coords(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) coords[id(i, j)] = {-extent + i * h, -extent + j * h};
  mesh.set_coords(std::move(coords));
  mesh.set_name("plane_" + std::to_string(n));
  return mesh;
}

SurfaceMesh make_cylinder(int n_theta, int n_y, double half_height) {
  if (n_theta < 3 || n_y < 3) throw Error(ErrorCode::InvalidParams, "cylinder resolutions must be >= 3");
  if (!(half_height > 0.0) || !std::isfinite(half_height)) throw Error(ErrorCode::InvalidParams, "degenerate extent");
  const double dtheta = 2.0 * std::numbers::pi / n_theta;
  const double dy = 2.0 * half_height / (n_y - 1);
  auto id = [n_theta](int i, int j) { return j * n_theta + ((i % n_theta) + n_theta) % n_theta; };
  std::vector<std::vector<int>> faces;
  for (int j = 0; j + 1 < n_y; ++j)
    for (int i = 0; i < n_theta; ++i) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  std::vector<int> bottom;
  std::vector<int> top;
  for (int i = 0; i < n_theta; ++i) bottom.push_back(id(i, 0));
  for (int i = n_theta; i > 0; --i) top.push_back(id(i, n_y - 1));
  Eigen::VectorXd area = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(faces.size()), dtheta * dy);
  SurfaceMesh mesh(n_theta * n_y, std::move(faces), std::move(area), {bottom, top});
  std::vector<Eigen::Vector2d> coords(n_theta * n_y);
  for (int j = 0; j < n_y; ++j)
    for (int i = 0; i < n_theta; ++i) coords[id(i, j)] = {i * dtheta, -half_height + j * dy};
  mesh.set_coords(std::move(coords));
  mesh.set_period(2.0 * std::numbers::pi);
  mesh.set_name("cylinder_" + std::to_string(n_theta) + "x" + std::to_string(n_y));
  return mesh;
}

std::vector<Puncture> default_punctures(int n, double extent, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidParams, "negative puncture count");
  const double h = 2.0 * extent / (n - 1);
  const int faces_per_side = n - 1;
  const int row = (faces_per_side - 1) / 2;
  const int centre = (faces_per_side - 1) / 2;
  std::vector<Puncture> out;
  for (int m = 0; m < k; ++m) {
    int col = centre + 2 * m - (k - 1);
    out.push_back({-extent + (col + 0.5) * h, -extent + (row + 0.5) * h, 0.3 * h});
  }
  return out;
}

SurfaceMesh make_punctured_plane(int n, double extent, const std::vector<Puncture>& punctures) {
  if (n < 3) throw Error(ErrorCode::InvalidParams, "plane resolution must be >= 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error(ErrorCode::InvalidParams, "degenerate extent");
  const double h = 2.0 * extent / (n - 1);
  for (const auto& p : punctures) {
    if (!(p.radius > 0.0)) throw Error(ErrorCode::InvalidParams, "puncture radius must be positive");
    if (std::abs(p.x) + p.radius >= extent || std::abs(p.y) + p.radius >= extent)
      throw Error(ErrorCode::InvalidParams, "puncture leaves the extent");
  }
  auto id = [n](int i, int j) { return j * n + i; };
  const int m = n - 1;
  std::vector<int> owner(m * m, -1);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double cx = -extent + (i + 0.5) * h;
      const double cy = -extent + (j + 0.5) * h;
      for (int p = 0; p < static_cast<int>(punctures.size()); ++p) {
        if (std::hypot(cx - punctures[p].x, cy - punctures[p].y) > punctures[p].radius) continue;
        if (owner[j * m + i] >= 0) throw Error(ErrorCode::InvalidParams, "punctures overlap");
        if (i == 0 || j == 0 || i == m - 1 || j == m - 1)
          throw Error(ErrorCode::InvalidParams, "puncture touches the outer boundary");
        owner[j * m + i] = p;
      }
    }
  for (int p = 0; p < static_cast<int>(punctures.size()); ++p)
    if (std::find(owner.begin(), owner.end(), p) == owner.end())
      throw Error(ErrorCode::InvalidParams, "puncture " + std::to_string(p) + " removes no face");
  // Holes of distinct punctures may not share a vertex.
  std::vector<int> vertex_owner(n * n, -1);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      int p = owner[j * m + i];
      if (p < 0) continue;
      for (int v : {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}) {
        if (vertex_owner[v] >= 0 && vertex_owner[v] != p) throw Error(ErrorCode::InvalidParams, "punctures overlap");
        vertex_owner[v] = p;
      }
    }

  std::vector<std::vector<int>> faces;
  std::vector<bool> used(n * n, false);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (owner[j * m + i] >= 0) continue;
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      for (int v : faces.back()) used[v] = true;
    }
  std::vector<int> remap(n * n, -1);
  std::vector<Eigen::Vector2d> coords;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!used[id(i, j)]) continue;
      remap[id(i, j)] = static_cast<int>(coords.size());
      coords.emplace_back(-extent + i * h, -extent + j * h);
    }
  for (auto& face : faces)
    for (int& v : face) v = remap[v];
  Eigen::VectorXd area = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(faces.size()), h * h);
  const int vertex_count = static_cast<int>(coords.size());
  SurfaceMesh probe(vertex_count, faces, area, {});
  auto ends = boundary_cycles(probe);
  // Outer boundary first, then holes in puncture order.
  std::sort(ends.begin(), ends.end(), [&](const auto& a, const auto& b) {
    auto key = [&](const std::vector<int>& c) {
      const auto& x = coords[c.front()];
      bool outer = std::abs(std::abs(x.x()) - extent) < 1e-12 * extent || std::abs(std::abs(x.y()) - extent) < 1e-12 * extent;
      if (outer) return -1;
      double best = 1e300;
      int which = 0;
      for (int p = 0; p < static_cast<int>(punctures.size()); ++p) {
        double d = std::hypot(x.x() - punctures[p].x, x.y() - punctures[p].y);
        if (d < best) {
          best = d;
          which = p;
        }
      }
      return which;
    };
    return key(a) < key(b);
  });
  SurfaceMesh mesh(vertex_count, std::move(faces), std::move(area), std::move(ends));
  mesh.set_coords(std::move(coords));
  mesh.set_name("punctured_plane_" + std::to_string(n) + "_k" + std::to_string(punctures.size()));
  if (!validate_mesh(mesh).empty()) throw Error(ErrorCode::InvalidParams, "punctures produce an invalid surface");
  return mesh;
}

SurfaceMesh make_standard_surface(SurfaceKind kind, const SurfaceParams& params) {
  switch (kind) {
    case SurfaceKind::plane: return make_plane(params.n, params.extent);
    case SurfaceKind::cylinder: return make_cylinder(params.n_theta, params.n_y, params.extent);
    case SurfaceKind::punctured_plane: {
      if (params.n < 3) throw Error(ErrorCode::InvalidParams, "plane resolution must be >= 3");
      auto punctures = params.punctures.empty() ? default_punctures(params.n, params.extent, params.puncture_count)
                                                : params.punctures;
      return make_punctured_plane(params.n, params.extent, punctures);
    }
  }
  throw Error(ErrorCode::InvalidParams, "unknown surface kind");
}

// ---------------------------------------------------------------------------
// Cutting along a loop

namespace {

int corner_index(const SurfaceMesh& mesh, int f, int v) {
  const auto& cycle = mesh.face(f);
  return static_cast<int>(std::find(cycle.begin(), cycle.end(), v) - cycle.begin());
}

}  // namespace

std::vector<RegionSummary> cut_along_loop(const SurfaceMesh& mesh, const MeshLoop& loop) {
  for (int v : loop.vertices())
    if (v < 0 || v >= mesh.vertex_count()) throw Error(ErrorCode::LoopNotInMesh, "loop vertex out of range");
  for (int e : loop.edges())
    if (e < 0 || e >= mesh.edge_count()) throw Error(ErrorCode::LoopNotInMesh, "loop edge out of range");
  {
    std::vector<int> sorted = loop.vertices();
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() < 3 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::NotEmbedded, "loop is not a simple cycle");
  }
  std::vector<bool> cut(mesh.edge_count(), false);
  for (int e : loop.edges()) cut[e] = true;

  const int n_faces = mesh.face_count();
  std::vector<int> corner_offset(n_faces + 1, 0);
  for (int f = 0; f < n_faces; ++f) corner_offset[f + 1] = corner_offset[f] + static_cast<int>(mesh.face(f).size());
  const int n_corners = corner_offset[n_faces];
  // Corner (f, i) sits at face vertex i; side (f, i) is the face edge from
  // vertex i to vertex i + 1. Both share the same numbering.
  DisjointSets faces(n_faces);
  DisjointSets corners(n_corners);
  DisjointSets sides(n_corners);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto& incident = mesh.edge_faces(e);
    if (incident.size() != 2 || cut[e]) continue;
    const int f = incident[0];
    const int g = incident[1];
    faces.unite(f, g);
    for (int v : {mesh.edge(e).a, mesh.edge(e).b})
      corners.unite(corner_offset[f] + corner_index(mesh, f, v), corner_offset[g] + corner_index(mesh, g, v));
    auto side_of = [&](int face) {
      const auto& cycle = mesh.face(face);
      const int k = static_cast<int>(cycle.size());
      for (int i = 0; i < k; ++i)
        if (mesh.find_edge(cycle[i], cycle[(i + 1) % k]) == e) return corner_offset[face] + i;
      return -1;
    };
    sides.unite(side_of(f), side_of(g));
  }

  std::map<int, int> component_of_root;
  std::vector<int> component(n_faces);
  for (int f = 0; f < n_faces; ++f) {
    auto [it, inserted] = component_of_root.try_emplace(faces.find(f), static_cast<int>(component_of_root.size()));
    component[f] = it->second;
  }
  const int n_components = static_cast<int>(component_of_root.size());
  std::vector<RegionSummary> out(n_components);
  std::vector<std::set<int>> corner_classes(n_components);
  std::vector<std::set<int>> side_classes(n_components);
  std::vector<int> side_multiplicity(n_corners, 0);
  for (int s = 0; s < n_corners; ++s) side_multiplicity[sides.find(s)]++;

  for (int f = 0; f < n_faces; ++f) {
    auto& summary = out[component[f]];
    summary.component_id = component[f];
    summary.area += mesh.face_area(f);
    summary.euler_characteristic += 1;
    const auto& cycle = mesh.face(f);
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
      corner_classes[component[f]].insert(corners.find(corner_offset[f] + i));
      side_classes[component[f]].insert(sides.find(corner_offset[f] + i));
      int e = mesh.find_edge(cycle[i], cycle[(i + 1) % k]);
      if (mesh.is_boundary_edge(e) && !cut[e]) summary.touches_end = true;
    }
  }

  // Boundary components: boundary sides chained through their end corners.
  DisjointSets chain(n_corners);
  std::vector<std::set<int>> boundary_roots(n_components);
  for (int f = 0; f < n_faces; ++f) {
    const int k = static_cast<int>(mesh.face(f).size());
    for (int i = 0; i < k; ++i) {
      const int s = corner_offset[f] + i;
      if (side_multiplicity[sides.find(s)] != 1) continue;
      chain.unite(corners.find(corner_offset[f] + i), corners.find(corner_offset[f] + (i + 1) % k));
    }
  }
  for (int f = 0; f < n_faces; ++f) {
    const int k = static_cast<int>(mesh.face(f).size());
    for (int i = 0; i < k; ++i) {
      const int s = corner_offset[f] + i;
      if (side_multiplicity[sides.find(s)] != 1) continue;
      boundary_roots[component[f]].insert(chain.find(corners.find(s)));
    }
  }
  for (int c = 0; c < n_components; ++c) {
    out[c].euler_characteristic += static_cast<int>(corner_classes[c].size()) - static_cast<int>(side_classes[c].size());
    out[c].boundary_count = static_cast<int>(boundary_roots[c].size());
  }
  return out;
}

LoopContractibility is_loop_contractible(const SurfaceMesh& mesh, const MeshLoop& loop) {
  LoopContractibility out;
  for (const auto& piece : cut_along_loop(mesh, loop)) {
    if (piece.is_disc()) {
      out.contractible = true;
      out.disc = piece;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regions

RegionContractibility is_region_contractible(const SurfaceMesh& mesh, const SubComplex& region) {
  if (!region.is_closed(mesh))
    throw Error(ErrorCode::NotRegularRegion, "region is not closed under incidence");
  RegionContractibility out;
  if (mesh.first_homology_rank() == 0) return out;
  const HomotopyBasis& basis = mesh.homotopy();

  const int n = mesh.vertex_count();
  std::vector<int> parent(n, -1);
  std::vector<int> depth(n, -1);
  std::vector<bool> tree_edge(mesh.edge_count(), false);
  std::vector<Word> potential(n);
  for (int root = 0; root < n; ++root) {
    if (!region.vertices[root] || depth[root] >= 0) continue;
    depth[root] = 0;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : mesh.vertex_edges(v)) {
        if (!region.edges[e]) continue;
        int w = mesh.other_vertex(e, v);
        if (depth[w] >= 0) continue;
        depth[w] = depth[v] + 1;
        parent[w] = v;
        tree_edge[e] = true;
        potential[w] = potential[v];
        append_reduced(potential[w], basis.edge_word(v, w));
        queue.push_back(w);
      }
    }
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (!region.edges[e] || tree_edge[e]) continue;
    const int u = mesh.edge(e).a;
    const int v = mesh.edge(e).b;
    Word w = potential[u];
    append_reduced(w, basis.edge_word(u, v));
    append_reduced(w, inverse(potential[v]));
    if (w.empty()) continue;
    // Fundamental cycle: u up to the common ancestor, then down to v.
    std::vector<int> up{u};
    std::vector<int> down{v};
    int a = u;
    int b = v;
    while (depth[a] > depth[b]) up.push_back(a = parent[a]);
    while (depth[b] > depth[a]) down.push_back(b = parent[b]);
    while (a != b) {
      up.push_back(a = parent[a]);
      down.push_back(b = parent[b]);
    }
    down.pop_back();
    std::vector<int> cycle(up.begin(), up.end());
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    // cycle runs u -> ... -> lca -> ... -> v and closes along e.
    out.contractible = false;
    out.witness = MeshLoop::from_vertices(mesh, std::move(cycle));
    return out;
  }
  return out;
}

namespace {

struct Segment {
  int from;
  int to;
  std::vector<int> walk;
};

}  // namespace

std::vector<std::vector<int>> boundary_circles(const SurfaceMesh& mesh, const SubComplex& region) {
  if (!region.is_closed(mesh))
    throw Error(ErrorCode::NotRegularRegion, "region is not closed under incidence");
  std::vector<std::vector<int>> circles;
  std::vector<Segment> segments;
  auto crossing = [&](int e, int v) { return 2 * e + (mesh.edge(e).a == v ? 0 : 1); };

  auto visit_polygon = [&](const std::vector<int>& p) {
    const int m = static_cast<int>(p.size());
    std::vector<int> edge(m);
    bool full = true;
    for (int i = 0; i < m; ++i) {
      edge[i] = mesh.find_edge(p[i], p[(i + 1) % m]);
      full = full && region.vertices[p[i]] && region.edges[edge[i]];
    }
    if (full) {
      circles.push_back(p);
      return;
    }
    // Walk the cyclic sequence vertex, edge, vertex, ... starting after an
    // element outside the region.
    auto in_region = [&](int pos) {
      pos = ((pos % (2 * m)) + 2 * m) % (2 * m);
      return pos % 2 == 0 ? static_cast<bool>(region.vertices[p[pos / 2]])
                          : static_cast<bool>(region.edges[edge[pos / 2]]);
    };
    int start = 0;
    while (in_region(start)) ++start;
    for (int step = 1; step <= 2 * m; ++step) {
      int pos = start + step;
      if (!in_region(pos) || in_region(pos - 1)) continue;
      // pos opens a run; it is a vertex position because an edge in a closed
      // subcomplex brings its endpoints.
      int end = pos;
      while (in_region(end + 1)) ++end;
      const int a = (pos / 2) % m;
      const int b = (end / 2) % m;
      Segment s;
      s.from = crossing(edge[(a + m - 1) % m], p[a]);
      s.to = crossing(edge[b], p[b]);
      for (int i = a;; i = (i + 1) % m) {
        s.walk.push_back(p[i]);
        if (i == b) break;
      }
      segments.push_back(std::move(s));
    }
  };

  for (int f = 0; f < mesh.face_count(); ++f)
    if (!region.faces[f]) visit_polygon(mesh.face(f));
  for (const auto& end : mesh.ends()) visit_polygon(end);

  std::map<int, std::vector<int>> at_point;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    at_point[segments[s].from].push_back(s);
    at_point[segments[s].to].push_back(s);
  }
  for (const auto& [point, incident] : at_point)
    if (incident.size() != 2) throw Error(ErrorCode::InvalidMesh, "regular neighbourhood boundary is not a 1-manifold");

  std::vector<bool> used(segments.size(), false);
  for (int s0 = 0; s0 < static_cast<int>(segments.size()); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<int> walk = segments[s0].walk;
    int point = segments[s0].to;
    int current = s0;
    while (true) {
      const auto& pair = at_point[point];
      int next = pair[0] == current ? pair[1] : pair[0];
      if (next == s0) break;
      used[next] = true;
      const Segment& seg = segments[next];
      std::vector<int> piece = seg.walk;
      if (seg.to == point) std::reverse(piece.begin(), piece.end());
      walk.insert(walk.end(), piece.begin() + 1, piece.end());
      point = seg.from == point ? seg.to : seg.from;
      current = next;
    }
    if (walk.size() > 1 && walk.back() == walk.front()) walk.pop_back();
    circles.push_back(std::move(walk));
  }
  return circles;
}

std::vector<RegionSummary> region_components(const SurfaceMesh& mesh, const SubComplex& region) {
  auto circles = boundary_circles(mesh, region);
  DisjointSets sets(mesh.vertex_count());
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (region.edges[e]) sets.unite(mesh.edge(e).a, mesh.edge(e).b);
  std::map<int, int> id_of_root;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (region.vertices[v]) id_of_root.try_emplace(sets.find(v), static_cast<int>(id_of_root.size()));
  std::vector<RegionSummary> out(id_of_root.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c].component_id = static_cast<int>(c);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!region.vertices[v]) continue;
    auto& s = out[id_of_root[sets.find(v)]];
    s.euler_characteristic += 1;
    if (mesh.is_end_vertex(v)) s.touches_end = true;
  }
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (region.edges[e]) out[id_of_root[sets.find(mesh.edge(e).a)]].euler_characteristic -= 1;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!region.faces[f]) continue;
    auto& s = out[id_of_root[sets.find(mesh.face(f)[0])]];
    s.euler_characteristic += 1;
    s.area += mesh.face_area(f);
  }
  for (const auto& circle : circles) out[id_of_root[sets.find(circle.front())]].boundary_count += 1;
  return out;
}

HullResult hull(const SurfaceMesh& mesh, const SubComplex& region) {
  auto verdict = is_region_contractible(mesh, region);
  if (!verdict.contractible) {
    std::ostringstream msg;
    msg << "region carries a non-contractible circle through vertices";
    for (int v : verdict.witness->vertices()) msg << ' ' << v;
    throw Error(ErrorCode::NonContractibleBoundary, msg.str());
  }
  // Complement pieces: faces outside the region joined across edges outside
  // the region, plus one node per end collar.
  const int n_faces = mesh.face_count();
  const int n_ends = static_cast<int>(mesh.ends().size());
  DisjointSets pieces(n_faces + n_ends);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (region.edges[e]) continue;
    const auto& incident = mesh.edge_faces(e);
    if (incident.size() == 2) {
      if (!region.faces[incident[0]] && !region.faces[incident[1]]) pieces.unite(incident[0], incident[1]);
    } else if (incident.size() == 1 && !region.faces[incident[0]]) {
      int j = mesh.end_of_edge(e);
      if (j >= 0) pieces.unite(incident[0], n_faces + j);
    }
  }
  std::set<int> unbounded;
  for (int j = 0; j < n_ends; ++j) unbounded.insert(pieces.find(n_faces + j));
  std::vector<bool> filled = region.faces;
  for (int f = 0; f < n_faces; ++f)
    if (!region.faces[f] && !unbounded.count(pieces.find(f))) filled[f] = true;
  SubComplex full = SubComplex::closure_of_faces(mesh, filled);
  full |= region;

  DisjointSets sets(mesh.vertex_count());
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (full.edges[e]) sets.unite(mesh.edge(e).a, mesh.edge(e).b);
  std::map<int, int> id_of_root;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (full.vertices[v]) id_of_root.try_emplace(sets.find(v), static_cast<int>(id_of_root.size()));
  HullResult out;
  out.discs.assign(id_of_root.size(), SubComplex::empty(mesh));
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (full.vertices[v]) out.discs[id_of_root[sets.find(v)]].vertices[v] = true;
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (full.edges[e]) out.discs[id_of_root[sets.find(mesh.edge(e).a)]].edges[e] = true;
  for (int f = 0; f < n_faces; ++f)
    if (full.faces[f]) out.discs[id_of_root[sets.find(mesh.face(f)[0])]].faces[f] = true;
  for (std::size_t c = 0; c < out.discs.size(); ++c) {
    auto summary = region_components(mesh, out.discs[c]);
    if (summary.size() != 1 || summary[0].euler_characteristic != 1 || summary[0].boundary_count != 1)
      throw Error(ErrorCode::NonContractibleBoundary, "hull component is not a disc");
    summary[0].component_id = static_cast<int>(c);
    out.summaries.push_back(summary[0]);
  }
  return out;
}

}  // namespace hofer
