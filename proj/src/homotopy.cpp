#include "hofer/homotopy.hpp"

#include <algorithm>
#include <deque>

#include "hofer/error.hpp"
#include "hofer/surface.hpp"

namespace hofer {

void reduce(Word& word) {
  Word out;
  out.reserve(word.size());
  for (int letter : word) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  word = std::move(out);
}

void append_reduced(Word& lhs, const Word& rhs) {
  for (int letter : rhs) {
    if (!lhs.empty() && lhs.back() == -letter)
      lhs.pop_back();
    else
      lhs.push_back(letter);
  }
}

Word inverse(const Word& word) {
  Word out(word.rbegin(), word.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

HomotopyBasis::HomotopyBasis(const SurfaceMesh& mesh) {
  const int n_vertices = mesh.vertex_count();
  const int n_edges = mesh.edge_count();
  const int n_faces = mesh.face_count();
  edges_.reserve(n_edges);
  for (int e = 0; e < n_edges; ++e) edges_.push_back(mesh.edge(e));
  vertex_edges_.resize(n_vertices);
  for (int v = 0; v < n_vertices; ++v) vertex_edges_[v] = mesh.vertex_edges(v);
  for (int e = 0; e < n_edges; ++e)
    if (mesh.edge_faces(e).empty() || mesh.edge_faces(e).size() > 2)
      throw Error(ErrorCode::InvalidMesh, "homotopy basis needs a manifold mesh");

  // Primal spanning tree by BFS.
  std::vector<bool> in_tree(n_edges, false);
  std::vector<bool> seen(n_vertices, false);
  std::deque<int> queue;
  if (n_vertices > 0) {
    seen[0] = true;
    queue.push_back(0);
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : mesh.vertex_edges(v)) {
      int w = mesh.other_vertex(e, v);
      if (!seen[w]) {
        seen[w] = true;
        in_tree[e] = true;
        queue.push_back(w);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorCode::InvalidMesh, "homotopy basis needs a connected mesh");

  // Dual spanning tree over faces plus the node `infinity` (index n_faces)
  // that every boundary edge attaches to. Tree edges are not available.
  const int infinity = n_faces;
  std::vector<bool> in_cotree(n_edges, false);
  std::vector<int> parent_edge(n_faces, -1);
  std::vector<int> order;
  order.reserve(n_faces);
  std::vector<bool> reached(n_faces + 1, false);
  reached[infinity] = true;
  std::deque<int> dual_queue;
  for (int e = 0; e < n_edges; ++e) {
    if (in_tree[e] || !mesh.is_boundary_edge(e)) continue;
    int f = mesh.edge_faces(e)[0];
    if (reached[f]) continue;
    reached[f] = true;
    in_cotree[e] = true;
    parent_edge[f] = e;
    order.push_back(f);
    dual_queue.push_back(f);
  }
  while (!dual_queue.empty()) {
    int f = dual_queue.front();
    dual_queue.pop_front();
    for (int e : mesh.face_edges(f)) {
      if (in_tree[e] || mesh.edge_faces(e).size() != 2) continue;
      int g = mesh.edge_faces(e)[0] == f ? mesh.edge_faces(e)[1] : mesh.edge_faces(e)[0];
      if (reached[g]) continue;
      reached[g] = true;
      in_cotree[e] = true;
      parent_edge[g] = e;
      order.push_back(g);
      dual_queue.push_back(g);
    }
  }
  if (static_cast<int>(order.size()) != n_faces)
    throw Error(ErrorCode::InvalidMesh, "dual graph of an open mesh must be connected");

  words_.assign(n_edges, Word{});
  for (int e = 0; e < n_edges; ++e) {
    if (in_tree[e] || in_cotree[e]) continue;
    words_[e] = Word{rank_ + 1};
    ++rank_;
  }

  // Children precede parents in reverse BFS order, so every face relation
  // has exactly one unknown edge left: the one to its parent.
  auto directed = [&](int u, int v) {
    int e = mesh.find_edge(u, v);
    return mesh.edge(e).a == u ? words_[e] : inverse(words_[e]);
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int f = *it;
    const auto& cycle = mesh.face(f);
    const int k = static_cast<int>(cycle.size());
    const int pe = parent_edge[f];
    int j = 0;
    while (mesh.find_edge(cycle[j], cycle[(j + 1) % k]) != pe) ++j;
    Word rest;
    for (int step = 1; step < k; ++step) {
      int i = (j + step) % k;
      append_reduced(rest, directed(cycle[i], cycle[(i + 1) % k]));
    }
    Word w = inverse(rest);
    words_[pe] = mesh.edge(pe).a == cycle[j] ? w : inverse(w);
  }

  if (rank_ != mesh.first_homology_rank())
    throw Error(ErrorCode::InvalidMesh, "generator count disagrees with Euler characteristic");
}

int HomotopyBasis::find_edge(int u, int v) const {
  if (u < 0 || u >= static_cast<int>(vertex_edges_.size())) return -1;
  for (int e : vertex_edges_[u])
    if (edges_[e].a == v || edges_[e].b == v) return e;
  return -1;
}

Word HomotopyBasis::edge_word(int u, int v) const {
  int e = find_edge(u, v);
  if (e < 0) throw Error(ErrorCode::LoopNotInMesh, "vertices are not adjacent");
  return edges_[e].a == u ? words_[e] : inverse(words_[e]);
}

Word HomotopyBasis::walk_word(std::span<const int> closed_walk) const {
  Word out;
  const std::size_t m = closed_walk.size();
  if (m < 2) return out;
  for (std::size_t i = 0; i < m; ++i) {
    int u = closed_walk[i];
    int v = closed_walk[(i + 1) % m];
    if (u == v) continue;
    append_reduced(out, edge_word(u, v));
  }
  return out;
}

}  // namespace hofer
