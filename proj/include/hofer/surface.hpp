#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hofer {

class HomotopyBasis;

/// Undirected mesh edge, stored with a < b.
struct Edge {
  int a;
  int b;
};

/// Combinatorial open surface. The finite mesh is the compact core of M;
/// every boundary cycle is an end to which an infinite-area collar is
/// attached, so M itself has no boundary. Face areas are the symplectic
/// areas of the faces. Coordinates are optional chart metadata.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /// Throws Error(InvalidMesh) only for structural corruption that would make
  /// the incidence tables meaningless (indices out of range, faces with fewer
  /// than three corners, area count mismatch). Everything else is reported by
  /// validate_mesh.
  SurfaceMesh(int vertex_count, std::vector<std::vector<int>> faces, Eigen::VectorXd face_area,
              std::vector<std::vector<int>> ends);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<int>& face(int f) const { return faces_[f]; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  double face_area(int f) const { return face_area_[f]; }
  const Eigen::VectorXd& face_areas() const { return face_area_; }
  const std::vector<std::vector<int>>& ends() const { return ends_; }

  const Edge& edge(int e) const { return edges_[e]; }
  /// Edge id joining u and v, or -1.
  int find_edge(int u, int v) const;
  int other_vertex(int e, int v) const { return edges_[e].a == v ? edges_[e].b : edges_[e].a; }
  const std::vector<int>& edge_faces(int e) const { return edge_faces_[e]; }
  const std::vector<int>& face_edges(int f) const { return face_edges_[f]; }
  const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
  bool is_boundary_edge(int e) const { return edge_faces_[e].size() == 1; }
  /// Index of the end whose cycle contains edge e, or -1.
  int end_of_edge(int e) const { return edge_end_[e]; }
  bool is_end_vertex(int v) const { return end_vertex_[v]; }

  int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }
  /// Rank of the free group pi_1(M) for a valid (connected, open) mesh.
  int first_homology_rank() const { return 1 - euler_characteristic(); }
  double total_area() const { return face_area_.sum(); }

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Eigen::Vector2d>& coords() const { return coords_; }
  void set_coords(std::vector<Eigen::Vector2d> coords);
  /// Period of the first coordinate when the chart is a cylinder (theta).
  const std::optional<double>& period() const { return period_; }
  void set_period(std::optional<double> period) { period_ = period; }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// External ids used by file formats; defaults to 0..n-1.
  const std::vector<long long>& vertex_ids() const { return vertex_ids_; }
  void set_vertex_ids(std::vector<long long> ids);

  /// Tree-cotree presentation of pi_1(M), built on first use. Requires a
  /// valid mesh.
  const HomotopyBasis& homotopy() const;

 private:
  void build_topology();

  int vertex_count_ = 0;
  std::vector<std::vector<int>> faces_;
  Eigen::VectorXd face_area_;
  std::vector<std::vector<int>> ends_;
  std::vector<Eigen::Vector2d> coords_;
  std::optional<double> period_;
  std::string name_;
  std::vector<long long> vertex_ids_;

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> edge_faces_;
  std::vector<std::vector<int>> face_edges_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<int> edge_end_;
  std::vector<bool> end_vertex_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

enum class DiagnosticKind {
  DegenerateFace,
  NonPositiveArea,
  NonManifoldEdge,
  InconsistentOrientation,
  NonManifoldVertex,
  IsolatedVertex,
  UnmarkedEnd,
  EndNotBoundary,
  NoEnds,
  Disconnected,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::vector<int> elements;  // face, edge, vertex or cycle indices, by kind
  std::string message;
};

/// Empty iff every SurfaceMesh invariant holds.
std::vector<Diagnostic> validate_mesh(const SurfaceMesh& mesh);

/// Boundary cycles of the mesh as oriented vertex cycles.
std::vector<std::vector<int>> boundary_cycles(const SurfaceMesh& mesh);

/// Embedded edge cycle.
class MeshLoop {
 public:
  /// Throws LoopNotInMesh if a vertex is out of range or consecutive vertices
  /// are not joined by an edge, NotEmbedded if a vertex repeats or the cycle
  /// has fewer than three vertices.
  static MeshLoop from_vertices(const SurfaceMesh& mesh, std::vector<int> cycle);

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<int>& edges() const { return edges_; }
  std::size_t size() const { return vertices_.size(); }
  MeshLoop reversed() const;

 private:
  std::vector<int> vertices_;
  std::vector<int> edges_;  // edges_[i] joins vertices_[i] and vertices_[i + 1]
};

/// Topological summary of a connected piece of a cut surface or of a region.
struct RegionSummary {
  int component_id = 0;
  int euler_characteristic = 0;
  int boundary_count = 0;
  bool touches_end = false;
  double area = 0.0;

  bool is_disc() const { return euler_characteristic == 1 && boundary_count == 1 && !touches_end; }
};

/// Subcomplex of a mesh as incidence masks.
struct SubComplex {
  std::vector<bool> vertices;
  std::vector<bool> edges;
  std::vector<bool> faces;

  static SubComplex empty(const SurfaceMesh& mesh);
  static SubComplex whole(const SurfaceMesh& mesh);
  /// Full subcomplex spanned by the selected vertices: every edge and face
  /// whose vertices are all selected.
  static SubComplex induced(const SurfaceMesh& mesh, const std::vector<bool>& vertex_mask);
  /// Closed faces selected by the mask, with their edges and vertices.
  static SubComplex closure_of_faces(const SurfaceMesh& mesh, const std::vector<bool>& face_mask);

  bool is_closed(const SurfaceMesh& mesh) const;
  bool is_empty() const;
  bool subset_of(const SubComplex& other) const;
  int vertex_count() const;
  int edge_count() const;
  int face_count() const;
  int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }
  double area(const SurfaceMesh& mesh) const;

  SubComplex& operator|=(const SubComplex& other);
  friend bool operator==(const SubComplex&, const SubComplex&) = default;
};

enum class SurfaceKind { plane, cylinder, punctured_plane };

struct Puncture {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

struct SurfaceParams {
  int n = 8;           // plane and punctured plane: vertices per side
  int n_theta = 8;     // cylinder: vertices around
  int n_y = 8;         // cylinder: vertex rows
  double extent = 1.0; // half side length, or cylinder half height
  std::vector<Puncture> punctures;
  int puncture_count = 0;  // used when punctures is empty
};

/// Quad-grid models of the plane, the cylinder S^1 x R and the plane with
/// disc-shaped holes. Coordinates are set; the cylinder chart is (theta, y)
/// with theta periodic.
SurfaceMesh make_standard_surface(SurfaceKind kind, const SurfaceParams& params);
SurfaceMesh make_plane(int n, double extent = 1.0);
SurfaceMesh make_cylinder(int n_theta, int n_y, double half_height = 1.0);
SurfaceMesh make_punctured_plane(int n, double extent, const std::vector<Puncture>& punctures);
/// Default puncture layout: k small holes spaced along the x axis.
std::vector<Puncture> default_punctures(int n, double extent, int k);

/// Connected components of the surface cut open along the loop.
std::vector<RegionSummary> cut_along_loop(const SurfaceMesh& mesh, const MeshLoop& loop);

struct LoopContractibility {
  bool contractible = false;
  std::optional<RegionSummary> disc;
};

/// A simple loop is contractible iff one side of the cut is a disc that does
/// not reach an end.
LoopContractibility is_loop_contractible(const SurfaceMesh& mesh, const MeshLoop& loop);

struct RegionContractibility {
  bool contractible = true;
  std::optional<MeshLoop> witness;
};

/// Decides whether the inclusion of the region into M is null-homotopic by
/// checking that every embedded circle of the region is contractible. The
/// circles checked are the fundamental cycles of a spanning forest of the
/// region's 1-skeleton; a non-contractible one is returned as witness.
RegionContractibility is_region_contractible(const SurfaceMesh& mesh, const SubComplex& region);

/// Boundary circles of a regular neighbourhood of the region, each projected
/// to a closed vertex walk inside the region. Pinch vertices are split, so a
/// walk may revisit a vertex of the mesh.
std::vector<std::vector<int>> boundary_circles(const SurfaceMesh& mesh, const SubComplex& region);

/// Per connected component summaries. boundary_count counts the boundary
/// circles of the component's regular neighbourhood; touches_end is set when
/// the component meets an end cycle.
std::vector<RegionSummary> region_components(const SurfaceMesh& mesh, const SubComplex& region);

struct HullResult {
  std::vector<SubComplex> discs;
  std::vector<RegionSummary> summaries;
};

/// Union of the discs bounded by contractible circles of the region, as
/// pairwise disjoint maximal discs. Throws NonContractibleBoundary when the
/// region carries a non-contractible circle.
HullResult hull(const SurfaceMesh& mesh, const SubComplex& region);

}  // namespace hofer
