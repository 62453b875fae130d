#pragma once

#include <span>
#include <vector>

#include "hofer/surface.hpp"

namespace hofer {

/// Element of a free group. Letter +(g+1) is generator g, -(g+1) its inverse.
using Word = std::vector<int>;

/// Freely reduces in place.
void reduce(Word& word);
/// Appends rhs to lhs and reduces across the seam. lhs must already be reduced.
void append_reduced(Word& lhs, const Word& rhs);
Word inverse(const Word& word);

/// Presentation of pi_1 of an open surface mesh as a free group, obtained
/// from a spanning tree of the vertices and a spanning tree of the faces plus
/// one node standing for all ends (tree-cotree decomposition). Each directed
/// edge carries the reduced word of the based loop root -> u -> v -> root.
class HomotopyBasis {
 public:
  explicit HomotopyBasis(const SurfaceMesh& mesh);

  int rank() const { return rank_; }
  /// Word of the directed edge u -> v; u and v must be adjacent.
  Word edge_word(int u, int v) const;
  /// Reduced word of a closed vertex walk (the closing edge is implicit).
  Word walk_word(std::span<const int> closed_walk) const;
  bool is_trivial(std::span<const int> closed_walk) const { return walk_word(closed_walk).empty(); }

 private:
  int find_edge(int u, int v) const;

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> vertex_edges_;
  int rank_ = 0;
  std::vector<Word> words_;  // per edge, direction a -> b
};

}  // namespace hofer
