#include "roql/cotree.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "roql/errors.hpp"

namespace roql {

namespace {

void sort_children(std::vector<GlueTree>& kids) {
  std::sort(kids.begin(), kids.end(),
            [](const GlueTree& a, const GlueTree& b) { return a.min_var() < b.min_var(); });
}

bool valid(const GlueTree& t, VarMask& seen, const GlueTree* parent) {
  if (t.is_leaf) {
    if (!t.children.empty()) return false;
    if (seen & (VarMask{1} << t.var)) return false;
    seen |= VarMask{1} << t.var;
    return true;
  }
  if (t.children.size() < 2) return false;
  if (parent && parent->label == t.label) return false;
  for (std::size_t k = 0; k + 1 < t.children.size(); ++k) {
    if (t.children[k].min_var() >= t.children[k + 1].min_var()) return false;
  }
  return std::all_of(t.children.begin(), t.children.end(),
                     [&](const GlueTree& c) { return valid(c, seen, &t); });
}

}  // namespace

GlueTree GlueTree::leaf(VarIndex v) {
  GlueTree t;
  t.var = v;
  return t;
}

GlueTree GlueTree::node(bool label, std::vector<GlueTree> children) {
  GlueTree t;
  t.is_leaf = false;
  t.label = label;
  t.children = std::move(children);
  sort_children(t.children);
  return t;
}

VarIndex GlueTree::min_var() const {
  if (is_leaf) return var;
  VarIndex m = std::numeric_limits<VarIndex>::max();
  for (const auto& c : children) m = std::min(m, c.min_var());
  return m;
}

VarMask GlueTree::vars() const {
  if (is_leaf) return VarMask{1} << var;
  VarMask m = 0;
  for (const auto& c : children) m |= c.vars();
  return m;
}

bool GlueTree::lca_label(VarIndex u, VarIndex v) const {
  const VarMask mu = VarMask{1} << u;
  const VarMask mv = VarMask{1} << v;
  const GlueTree* cur = this;
  while (!cur->is_leaf) {
    const GlueTree* next = nullptr;
    for (const auto& c : cur->children) {
      VarMask m = c.vars();
      if ((m & mu) && (m & mv)) {
        next = &c;
        break;
      }
    }
    if (!next) return cur->label;
    cur = next;
  }
  throw Error("lca_label: variables not separated in tree");
}

std::string GlueTree::to_string() const {
  if (is_leaf) return "x" + std::to_string(var + 1);
  std::string out = label ? "1(" : "0(";
  for (std::size_t k = 0; k < children.size(); ++k) {
    if (k) out += ",";
    out += children[k].to_string();
  }
  return out + ")";
}

bool is_valid_cotree(const GlueTree& t) {
  VarMask seen = 0;
  return valid(t, seen, nullptr);
}

// ---------------------------------------------------------------------------
// Cograph

Cograph::Cograph(std::vector<VarIndex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw Error("graph vertices must be distinct");
  }
  if (vertices_.size() > 64) throw ArityError("graphs are limited to 64 vertices");
  adjacency_.assign(vertices_.size(), 0);
}

std::size_t Cograph::position(VarIndex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) throw Error("vertex x" + std::to_string(v + 1) + " not in graph");
  return static_cast<std::size_t>(it - vertices_.begin());
}

void Cograph::add_edge(VarIndex u, VarIndex v) {
  if (u == v) throw Error("self loops are not allowed");
  auto pu = position(u);
  auto pv = position(v);
  adjacency_[pu] |= std::uint64_t{1} << pv;
  adjacency_[pv] |= std::uint64_t{1} << pu;
}

bool Cograph::has_edge(VarIndex u, VarIndex v) const {
  if (u == v) return false;
  return (adjacency_[position(u)] >> position(v)) & 1u;
}

std::size_t Cograph::edge_count() const {
  std::size_t c = 0;
  for (auto row : adjacency_) c += static_cast<std::size_t>(std::popcount(row));
  return c / 2;
}

Cograph Cograph::induced(const std::vector<std::size_t>& positions) const {
  std::vector<VarIndex> vs;
  vs.reserve(positions.size());
  for (auto p : positions) vs.push_back(vertices_[p]);
  Cograph g(vs);
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      if ((adjacency_[positions[a]] >> positions[b]) & 1u) g.add_edge(vertices_[positions[a]], vertices_[positions[b]]);
    }
  }
  return g;
}

Cograph Cograph::complement() const {
  Cograph g(vertices_);
  const std::size_t n = vertices_.size();
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (std::size_t p = 0; p < n; ++p) {
    g.adjacency_[p] = all & ~adjacency_[p] & ~(std::uint64_t{1} << p);
  }
  return g;
}

std::vector<std::vector<std::size_t>> Cograph::components() const {
  const std::size_t n = vertices_.size();
  std::vector<std::vector<std::size_t>> out;
  std::uint64_t unvisited = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  while (unvisited) {
    std::uint64_t frontier = unvisited & (~unvisited + 1);
    std::uint64_t comp = 0;
    while (frontier) {
      comp |= frontier;
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adjacency_[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~comp;
    }
    unvisited &= ~comp;
    std::vector<std::size_t> members;
    for (std::uint64_t c = comp; c; c &= c - 1) members.push_back(static_cast<std::size_t>(std::countr_zero(c)));
    out.push_back(std::move(members));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bijection

namespace {

void collect_edges(const GlueTree& t, Cograph& g) {
  if (t.is_leaf) return;
  for (std::size_t a = 0; a < t.children.size(); ++a) {
    collect_edges(t.children[a], g);
    if (!t.label) continue;
    for (std::size_t b = a + 1; b < t.children.size(); ++b) {
      for (auto u : mask_members(t.children[a].vars())) {
        for (auto v : mask_members(t.children[b].vars())) g.add_edge(u, v);
      }
    }
  }
}

GlueTree build(const Cograph& g) {
  if (g.vertices().size() == 1) return GlueTree::leaf(g.vertices().front());
  auto parts = g.components();
  bool label = false;
  const Cograph* source = &g;
  Cograph comp;
  if (parts.size() == 1) {
    comp = g.complement();
    parts = comp.components();
    if (parts.size() == 1) {
      throw NotACograph("not a cograph: vertices {" + [&] {
        std::string s;
        for (auto v : g.vertices()) s += (s.empty() ? "x" : ",x") + std::to_string(v + 1);
        return s;
      }() + "} and their complement are both connected");
    }
    label = true;
    source = &comp;
  }
  std::vector<GlueTree> kids;
  for (const auto& part : parts) {
    Cograph sub = source->induced(part);
    // Children of a 1-vertex are built from the original graph's pieces.
    kids.push_back(build(label ? sub.complement() : sub));
  }
  return GlueTree::node(label, std::move(kids));
}

}  // namespace

Cograph cotree_to_cograph(const GlueTree& t) {
  Cograph g(mask_members(t.vars()));
  collect_edges(t, g);
  return g;
}

GlueTree cograph_to_cotree(const Cograph& g) {
  if (g.vertices().empty()) throw Error("empty graph has no cotree");
  return build(g);
}

bool cograph_reduce(const Cograph& g) {
  // Each connected piece with more than one vertex is complemented; a piece
  // whose complement is connected again can never shrink.
  std::vector<Cograph> work{g};
  while (!work.empty()) {
    Cograph cur = std::move(work.back());
    work.pop_back();
    for (const auto& part : cur.components()) {
      if (part.size() == 1) continue;
      Cograph flipped = cur.induced(part).complement();
      if (flipped.components().size() == 1) return false;
      work.push_back(std::move(flipped));
    }
  }
  return true;
}

}  // namespace roql
