#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roql/truth_table.hpp"

namespace roql {

/// Rooted tree whose inner vertices are coloured 0/1 with no two adjacent
/// inner vertices sharing a colour and no inner vertex having a single child.
/// Leaves carry distinct variables. Children are kept sorted by their
/// smallest leaf so equal trees compare equal structurally.
struct GlueTree {
  bool is_leaf = true;
  VarIndex var = 0;
  bool label = false;
  std::vector<GlueTree> children;

  static GlueTree leaf(VarIndex v);
  static GlueTree node(bool label, std::vector<GlueTree> children);

  VarIndex min_var() const;
  VarMask vars() const;
  /// Label of the lowest common ancestor of leaves u and v (both present, u != v).
  bool lca_label(VarIndex u, VarIndex v) const;

  /// Rendering such as 1(x1,0(x2,x3)).
  std::string to_string() const;

  friend bool operator==(const GlueTree&, const GlueTree&) = default;
};

/// Proper 0/1 alternation, no unary inner vertices, distinct leaves, sorted children.
bool is_valid_cotree(const GlueTree& t);

/// Simple undirected graph on a set of variables.
class Cograph {
 public:
  Cograph() = default;
  explicit Cograph(std::vector<VarIndex> vertices);

  const std::vector<VarIndex>& vertices() const { return vertices_; }
  void add_edge(VarIndex u, VarIndex v);
  bool has_edge(VarIndex u, VarIndex v) const;
  std::size_t edge_count() const;

  /// Induced subgraph on the given vertex positions.
  Cograph induced(const std::vector<std::size_t>& positions) const;
  Cograph complement() const;
  /// Connected components as lists of vertex positions, ordered by first vertex.
  std::vector<std::vector<std::size_t>> components() const;

  friend bool operator==(const Cograph&, const Cograph&) = default;

 private:
  std::size_t position(VarIndex v) const;

  std::vector<VarIndex> vertices_;
  std::vector<std::uint64_t> adjacency_;
};

/// Graph with an edge {u, v} iff the lowest common ancestor of u and v is coloured 1.
Cograph cotree_to_cograph(const GlueTree& t);

/// Inverse of cotree_to_cograph. Throws NotACograph when some connected
/// piece and its complement are both connected (an induced P4 exists).
GlueTree cograph_to_cotree(const Cograph& g);

/// Whether repeatedly complementing connected components reaches the edgeless graph.
bool cograph_reduce(const Cograph& g);

}  // namespace roql
