#include "roql/learner.hpp"

#include <bit>
#include <deque>
#include <optional>

#include "roql/errors.hpp"

namespace roql {

namespace {

VarMask full(unsigned n) { return n == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << n) - 1); }

std::uint32_t deposit(std::uint32_t pattern, VarMask mask) {
  std::uint32_t out = 0;
  for (VarMask m = mask; m; m &= m - 1) {
    if (pattern & 1u) out |= m & (~m + 1);
    pattern >>= 1;
  }
  return out;
}

VarMask bit(VarIndex i) { return VarMask{1} << i; }

using Label = CanonicalTree::Label;

/// Relabels a cotree: 1-vertices become `one`, 0-vertices `zero`, and leaf v
/// becomes leaf_tree(v).
template <class LeafFn>
CanonicalTree from_cotree(const GlueTree& t, Label one, Label zero, LeafFn&& leaf_tree) {
  if (t.is_leaf) return leaf_tree(t.var);
  std::vector<CanonicalTree> kids;
  for (const auto& c : t.children) kids.push_back(from_cotree(c, one, zero, leaf_tree));
  return CanonicalTree::node(t.label ? one : zero, std::move(kids));
}

}  // namespace

bool MembershipMemo::operator()(const TotalAssignment& x) {
  auto [it, fresh] = cache_.try_emplace(x.index(), false);
  if (fresh) it->second = session_.membership(x);
  return it->second;
}

// ---------------------------------------------------------------------------
// Essentiality squares

EssentialitySquare find_square(MembershipMemo& m, VarIndex i, VarIndex j) {
  const unsigned n = m.arity();
  if (i == j || i >= n || j >= n) throw ArityError("square needs two distinct variables below the arity");
  if (i > j) std::swap(i, j);
  const VarMask others = full(n) & ~(bit(i) | bit(j));
  const std::uint32_t bases = std::uint32_t{1} << std::popcount(others);
  for (std::uint32_t pattern = 0; pattern < bases; ++pattern) {
    const std::uint32_t at = deposit(pattern, others);
    EssentialitySquare sq{i, j, PartialAssignment(n, others, at), {}};
    for (std::uint32_t ab = 0; ab < 4; ++ab) {
      sq.values[ab] = m(at | ((ab & 1u) << i) | ((ab >> 1) << j));
    }
    const auto& v = sq.values;
    const bool i_essential = v[0] != v[1] || v[2] != v[3];
    const bool j_essential = v[0] != v[2] || v[1] != v[3];
    if (i_essential && j_essential) return sq;
  }
  throw PromiseViolation("no essentiality square for x" + std::to_string(i + 1) + ", x" + std::to_string(j + 1));
}

SquareSet build_square_set(MembershipMemo& m) {
  SquareSet out;
  const unsigned n = m.arity();
  for (VarIndex i = 0; i < n; ++i) {
    for (VarIndex j = i + 1; j < n; ++j) out.emplace(std::pair{i, j}, find_square(m, i, j));
  }
  return out;
}

GlueTree reconstruct_glueing(const SquareSet& squares, unsigned n) {
  std::vector<VarIndex> vertices;
  for (VarIndex v = 0; v < n; ++v) vertices.push_back(v);
  Cograph g(vertices);
  for (const auto& [key, sq] : squares) {
    if (sq.nonlinear()) g.add_edge(key.first, key.second);
  }
  try {
    return cograph_to_cotree(g);
  } catch (const NotACograph&) {
    throw PromiseViolation("target not read-once over B2: square graph is not a cograph");
  }
}

// ---------------------------------------------------------------------------
// Reconstruction over B2

namespace {

class Reconstructor {
 public:
  Reconstructor(MembershipMemo& m, const SquareSet& squares) : memo_(m), squares_(squares) {}

  CanonicalTree run(const GlueTree& glue) {
    CanonicalTree t = resolve(glue, true).tree;
    // One stored value separates the two candidate orientations of the root.
    const EssentialitySquare& sq = squares_.begin()->second;
    const std::uint32_t x = sq.base.zero_extension().index();
    if (t.eval(x) != memo_(x)) t = negate(t);
    return t;
  }

 private:
  struct Resolved {
    CanonicalTree tree;
    VarIndex rep;
  };

  Resolved resolve(const GlueTree& v, bool is_root) {
    if (v.is_leaf) return {CanonicalTree::literal(v.var), v.var};
    std::vector<Resolved> kids;
    for (const auto& c : v.children) kids.push_back(resolve(c, false));
    VarIndex rep = kids.front().rep;
    for (const auto& k : kids) rep = std::min(rep, k.rep);
    if (!v.label) {
      // Tentatively XOR; the parent fragment or the root check fixes the parity.
      std::vector<CanonicalTree> trees;
      for (auto& k : kids) trees.push_back(std::move(k.tree));
      return {CanonicalTree::node(Label::Xor, std::move(trees)), rep};
    }
    CanonicalTree fragment = resolve_fragment(kids);
    if (!is_root && fragment.label == Label::And) fragment = negate(fragment);
    return {std::move(fragment), rep};
  }

  /// The odd point of the square of two fragment children, in the coordinates
  /// of the children's own functions.
  std::pair<bool, bool> odd_point(const Resolved& a, const Resolved& b) const {
    const bool a_first = a.rep < b.rep;
    const auto& sq = squares_.at(a_first ? std::pair{a.rep, b.rep} : std::pair{b.rep, a.rep});
    const std::uint32_t at = sq.base.values();
    const bool ka = a.tree.eval(at);
    const bool kb = b.tree.eval(at);
    std::array<bool, 4> val{};
    unsigned ones = 0;
    for (std::uint32_t ca = 0; ca < 2; ++ca) {
      for (std::uint32_t cb = 0; cb < 2; ++cb) {
        const std::uint32_t ra = ca ^ ka, rb = cb ^ kb;
        val[ca | cb << 1] = sq.values[a_first ? (ra | rb << 1) : (rb | ra << 1)];
        ones += val[ca | cb << 1];
      }
    }
    if (ones % 2 == 0) throw PromiseViolation("inconsistent square data: expected a non-linear projection");
    for (std::uint32_t p = 0; p < 4; ++p) {
      if (val[p] == (ones == 1)) return {(p & 1u) != 0, (p & 2u) != 0};
    }
    throw PromiseViolation("inconsistent square data");
  }

  CanonicalTree resolve_fragment(const std::vector<Resolved>& kids) {
    const std::size_t m = kids.size();
    std::vector<std::vector<std::pair<bool, bool>>> delta(m, std::vector<std::pair<bool, bool>>(m));
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        delta[a][b] = odd_point(kids[a], kids[b]);
        delta[b][a] = {delta[a][b].second, delta[a][b].first};
      }
    }
    // Signs are fixed up to a global flip; pin the first child to positive.
    std::vector<bool> sign(m, true);
    for (std::size_t b = 1; b < m; ++b) sign[b] = sign[0] ^ delta[0][b].first ^ delta[0][b].second;
    std::vector<VarIndex> ids;
    for (std::size_t a = 0; a < m; ++a) ids.push_back(static_cast<VarIndex>(a));
    Cograph g(ids);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const auto [da, db] = delta[a][b];
        if ((sign[a] == sign[b]) != (da == db)) throw PromiseViolation("inconsistent square data: literal signs");
        if (da == sign[a] && db == sign[b]) g.add_edge(static_cast<VarIndex>(a), static_cast<VarIndex>(b));
      }
    }
    GlueTree shape;
    try {
      shape = cograph_to_cotree(g);
    } catch (const NotACograph&) {
      throw PromiseViolation("target not read-once over B2: fragment labels do not form a cotree");
    }
    return from_cotree(shape, Label::And, Label::Or, [&](VarIndex a) {
      return sign[a] ? kids[a].tree : negate(kids[a].tree);
    });
  }

  MembershipMemo& memo_;
  const SquareSet& squares_;
};

}  // namespace

CanonicalTree reconstruct_b2(OracleSession& s, SquareSet& squares_out) {
  MembershipMemo memo(s);
  const unsigned n = s.arity();
  if (n == 0) return CanonicalTree::constant(memo(0u));
  if (n == 1) return CanonicalTree::literal(0, !memo(0u));
  squares_out = build_square_set(memo);
  const GlueTree glue = reconstruct_glueing(squares_out, n);
  return Reconstructor(memo, squares_out).run(glue);
}

CanonicalTree reconstruct_b2(OracleSession& s) {
  SquareSet squares;
  return reconstruct_b2(s, squares);
}

// ---------------------------------------------------------------------------
// Monotone targets through SI queries

bool simulate_membership_monotone(OracleSession& s, const TotalAssignment& a) {
  return s.subcube_identity(PartialAssignment(a.arity(), a.index(), a.index()));
}

namespace {

class MonotoneLearner {
 public:
  explicit MonotoneLearner(OracleSession& s) : s_(s), n_(s.arity()) {}

  MonotoneResult run() {
    if (f(0)) throw PromiseViolation("target is constant");
    const VarMask all = full(n_);
    const VarMask m0 = drop(all, std::nullopt);

    std::vector<std::optional<VarMask>> sensitive(n_);
    std::vector<VarMask> minterm(n_, 0), maxterm(n_, 0);
    std::deque<VarIndex> queue;
    auto reach = [&](VarIndex j, VarMask point) {
      if (sensitive[j]) return;
      sensitive[j] = point;
      queue.push_back(j);
    };
    for (VarIndex j : mask_members(m0)) reach(j, m0);
    while (!queue.empty()) {
      const VarIndex k = queue.front();
      queue.pop_front();
      const VarMask z = *sensitive[k];
      minterm[k] = drop(z, k);
      const VarMask false_point = add(z & ~bit(k), k);
      maxterm[k] = all & ~false_point;
      for (VarIndex j : mask_members(minterm[k])) reach(j, minterm[k]);
      for (VarIndex j : mask_members(maxterm[k])) reach(j, false_point | bit(j));
    }

    VarMask essential = 0;
    for (VarIndex j = 0; j < n_; ++j) {
      if (sensitive[j]) essential |= bit(j);
    }
    const auto vars = mask_members(essential);
    Cograph g(vars);
    for (std::size_t a = 0; a < vars.size(); ++a) {
      for (std::size_t b = a + 1; b < vars.size(); ++b) {
        if (conjunctive(vars[a], vars[b], minterm, maxterm)) g.add_edge(vars[a], vars[b]);
      }
    }
    GlueTree shape;
    try {
      shape = cograph_to_cotree(g);
    } catch (const NotACograph&) {
      throw PromiseViolation("target not read-once over {AND, OR}");
    }
    auto tree = from_cotree(shape, Label::And, Label::Or, [](VarIndex v) { return CanonicalTree::literal(v); });
    return {std::move(tree), all & ~essential};
  }

 private:
  bool f(VarMask x) {
    auto [it, fresh] = memo_.try_emplace(x, false);
    if (fresh) it->second = simulate_membership_monotone(s_, TotalAssignment(n_, x));
    return it->second;
  }

  /// Removes variables while the point stays true; `keep` is never removed.
  VarMask drop(VarMask x, std::optional<VarIndex> keep) {
    for (VarIndex i : mask_members(x)) {
      if (keep == i) continue;
      if (f(x & ~bit(i))) x &= ~bit(i);
    }
    return x;
  }

  /// Adds variables while the point stays false; `skip` is never added.
  VarMask add(VarMask x, VarIndex skip) {
    for (VarIndex i = 0; i < n_; ++i) {
      if (i == skip || (x & bit(i))) continue;
      if (!f(x | bit(i))) x |= bit(i);
    }
    return x;
  }

  bool conjunctive(VarIndex i, VarIndex j, const std::vector<VarMask>& minterm, const std::vector<VarMask>& maxterm) {
    if ((minterm[i] & bit(j)) || (minterm[j] & bit(i))) return true;
    if ((maxterm[i] & bit(j)) || (maxterm[j] & bit(i))) return false;
    // Under an OR the joint context of both minterms is false and either variable completes it.
    const VarMask ctx = (minterm[i] | minterm[j]) & ~(bit(i) | bit(j));
    const bool disjunctive = !f(ctx) && f(ctx | bit(i)) && f(ctx | bit(j));
    return !disjunctive;
  }

  OracleSession& s_;
  unsigned n_;
  std::unordered_map<VarMask, bool> memo_;
};

}  // namespace

MonotoneResult learn_monotone_si(OracleSession& s) { return MonotoneLearner(s).run(); }

// ---------------------------------------------------------------------------
// Candidate elimination

EquivalenceLearnResult learn_via_equivalence(OracleSession& s, const Basis& basis, bool simulate) {
  const CandidateSet& pool = candidates(basis, s.arity());
  const TestBuilder builder = hypercube_test_builder(basis.max_fanin());
  std::vector<std::size_t> alive(pool.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  unsigned rounds = 0;
  for (;;) {
    if (alive.empty()) throw PromiseViolation("no read-once function over " + basis.name() + " fits the answers");
    const Candidate& hyp = pool[alive.front()];
    ++rounds;
    auto ce = simulate ? equivalence_from_m_si(s, hyp.formula, builder) : s.equivalence(hyp.formula);
    if (!ce) return {hyp.formula, rounds};
    const std::uint32_t y = ce->index();
    const bool target_value = !hyp.table[y];
    std::erase_if(alive, [&](std::size_t i) { return pool[i].table[y] != target_value; });
  }
}

}  // namespace roql
