#include "roql/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_set>

#include "roql/errors.hpp"

namespace roql {

CandidateSet::CandidateSet(std::string basis_name, unsigned n, std::vector<Candidate> items)
    : basis_name_(std::move(basis_name)), n_(n), items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(items_[i].table, i);
}

std::optional<std::size_t> CandidateSet::find(const TruthTable& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Tables are handled as raw 64-bit masks here; n <= 6 keeps each in one word.

std::uint64_t full_mask(unsigned n) { return n == 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << n)) - 1; }

std::uint64_t var_mask(unsigned n, VarIndex i) {
  std::uint64_t m = 0;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    if ((v >> i) & 1u) m |= std::uint64_t{1} << v;
  }
  return m;
}

struct Entry {
  std::uint64_t table;
  FormulaPtr formula;
};

class Enumerator {
 public:
  Enumerator(const Basis& basis, unsigned n) : basis_(basis), n_(n), all_(full_mask(n)) {
    for (VarIndex i = 0; i < n; ++i) vars_.push_back(var_mask(n, i));
    for (const auto& g : basis.generators()) {
      if (g.arity() > 6) throw ArityError("gate fan-in above 6 is not enumerable");
      if (g.arity() >= 1) gates_.push_back(&g);
    }
  }

  std::vector<Candidate> run() {
    build_constants();
    by_set_.resize(std::size_t{1} << n_);
    std::vector<VarMask> order;
    for (VarMask s = 1; s < (VarMask{1} << n_); ++s) order.push_back(s);
    std::stable_sort(order.begin(), order.end(),
                     [](VarMask a, VarMask b) { return std::popcount(a) < std::popcount(b); });
    for (VarMask s : order) fill(s);

    std::vector<Candidate> out;
    for (const auto& e : constants_) out.push_back(to_candidate(e));
    for (VarMask s : order) {
      for (const auto& e : by_set_[s]) out.push_back(to_candidate(e));
    }
    return out;
  }

 private:
  Candidate to_candidate(const Entry& e) const {
    return {TruthTable::from_u64(n_, e.table), ReadOnceFormula(n_, e.formula)};
  }

  VarMask essential(std::uint64_t t) const {
    VarMask m = 0;
    for (VarIndex i = 0; i < n_; ++i) {
      const unsigned shift = 1u << i;
      const std::uint64_t hi = vars_[i];
      if (((t & hi) >> shift) != (t & ~hi & all_)) m |= VarMask{1} << i;
    }
    return m;
  }

  std::uint64_t compose(const BasisFunction& g, const std::vector<const Entry*>& args) const {
    const unsigned k = g.arity();
    std::uint64_t result = 0;
    for (std::uint32_t u = 0; u < (1u << k); ++u) {
      if (!g.table[u]) continue;
      std::uint64_t term = all_;
      for (unsigned j = 0; j < k; ++j) term &= ((u >> j) & 1u) ? args[j]->table : ~args[j]->table;
      result |= term;
    }
    return result & all_;
  }

  FormulaPtr make_node(const BasisFunction& g, const std::vector<const Entry*>& args) const {
    auto node = std::make_shared<FormulaNode>();
    node->kind = FormulaNode::Kind::Gate;
    node->gate = g;
    for (const auto* a : args) node->children.push_back(a->formula);
    return node;
  }

  void build_constants() {
    for (const auto& g : basis_.generators()) {
      if (g.arity() != 0) continue;
      add_constant(g.table[0] ? all_ : 0, [&] {
        auto node = std::make_shared<FormulaNode>();
        node->kind = FormulaNode::Kind::Constant;
        node->value = g.table[0];
        return FormulaPtr(node);
      }());
    }
    // Gates fed only constants may yield the missing constant.
    for (bool grew = true; grew && constants_.size() < 2;) {
      grew = false;
      for (const auto* g : gates_) {
        std::vector<const Entry*> args(g->arity());
        if (for_each_constant_tuple(args, 0, [&] {
              std::uint64_t t = compose(*g, args);
              if (add_constant(t, make_node(*g, args))) {
                grew = true;
                return true;
              }
              return false;
            })) {
          break;
        }
      }
    }
  }

  bool add_constant(std::uint64_t t, FormulaPtr f) {
    for (const auto& e : constants_) {
      if (e.table == t) return false;
    }
    constants_.push_back({t, std::move(f)});
    return true;
  }

  /// Calls fn for every filling of args[from..] with constants; stops early when fn returns true.
  template <class Fn>
  bool for_each_constant_tuple(std::vector<const Entry*>& args, std::size_t from, Fn&& fn) {
    if (from == args.size()) return fn();
    for (const auto& c : constants_) {
      args[from] = &c;
      if (for_each_constant_tuple(args, from + 1, fn)) return true;
    }
    return false;
  }

  void insert(VarMask s, std::uint64_t t, const BasisFunction& g, const std::vector<const Entry*>& args) {
    if (essential(t) != s) return;
    if (!seen_.insert(t).second) return;
    by_set_[s].push_back({t, make_node(g, args)});
  }

  void fill(VarMask s) {
    if (std::popcount(s) == 1) {
      VarIndex i = static_cast<VarIndex>(std::countr_zero(s));
      auto node = std::make_shared<FormulaNode>();
      node->kind = FormulaNode::Kind::Variable;
      node->var = i;
      seen_.insert(vars_[i]);
      by_set_[s].push_back({vars_[i], node});
    } else {
      for (const auto* g : gates_) {
        if (g->arity() < 2) continue;
        std::vector<VarMask> blocks(g->arity(), 0);
        split(s, *g, blocks, 0, s);
      }
    }
    close_unary(s);
  }

  /// Distributes `rest` over slots [slot..); each slot gets a possibly empty block.
  void split(VarMask s, const BasisFunction& g, std::vector<VarMask>& blocks, std::size_t slot, VarMask rest) {
    if (slot + 1 == blocks.size()) {
      blocks[slot] = rest;
      std::size_t nonempty = 0;
      for (auto b : blocks) nonempty += b != 0;
      if (nonempty < 2) return;
      if (constants_.empty() && nonempty < blocks.size()) return;
      std::vector<const Entry*> args(blocks.size());
      choose(s, g, blocks, args, 0);
      return;
    }
    // Iterate over all submasks of rest, the empty one included.
    for (VarMask sub = rest;; sub = (sub - 1) & rest) {
      blocks[slot] = sub;
      split(s, g, blocks, slot + 1, rest & ~sub);
      if (sub == 0) break;
    }
  }

  void choose(VarMask s, const BasisFunction& g, const std::vector<VarMask>& blocks,
              std::vector<const Entry*>& args, std::size_t slot) {
    if (slot == blocks.size()) {
      insert(s, compose(g, args), g, args);
      return;
    }
    const auto& pool = blocks[slot] ? by_set_[blocks[slot]] : constants_;
    for (const auto& e : pool) {
      args[slot] = &e;
      choose(s, g, blocks, args, slot + 1);
    }
  }

  /// Gates with exactly one non-constant input map functions on s to functions on s.
  void close_unary(VarMask s) {
    for (std::size_t next = 0; next < by_set_[s].size(); ++next) {
      for (const auto* g : gates_) {
        std::vector<const Entry*> args(g->arity());
        for (std::size_t slot = 0; slot < args.size(); ++slot) {
          if (args.size() > 1 && constants_.empty()) break;
          fill_around(s, *g, args, slot, next, 0);
        }
      }
    }
  }

  void fill_around(VarMask s, const BasisFunction& g, std::vector<const Entry*>& args, std::size_t slot,
                   std::size_t source, std::size_t k) {
    if (k == args.size()) {
      // Copy the entry: insert may reallocate the vector it lives in.
      Entry held = by_set_[s][source];
      args[slot] = &held;
      insert(s, compose(g, args), g, args);
      return;
    }
    if (k == slot) {
      fill_around(s, g, args, slot, source, k + 1);
      return;
    }
    for (const auto& c : constants_) {
      args[k] = &c;
      fill_around(s, g, args, slot, source, k + 1);
    }
  }

  const Basis& basis_;
  unsigned n_;
  std::uint64_t all_;
  std::vector<std::uint64_t> vars_;
  std::vector<const BasisFunction*> gates_;
  std::vector<Entry> constants_;
  std::vector<std::vector<Entry>> by_set_;
  std::unordered_set<std::uint64_t> seen_;
};

}  // namespace

CandidateSet enumerate_read_once(const Basis& basis, unsigned n) {
  if (n > 6) throw ArityError("candidate enumeration is limited to n <= 6");
  return CandidateSet(basis.name(), n, Enumerator(basis, n).run());
}

const CandidateSet& candidates(const Basis& basis, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::string, unsigned>, std::unique_ptr<CandidateSet>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{basis.name(), n}];
  if (!slot) slot = std::make_unique<CandidateSet>(enumerate_read_once(basis, n));
  return *slot;
}

namespace {

ReadOnceFormula random_tree(unsigned n, const std::vector<VarIndex>& leaves, std::size_t lo, std::size_t hi,
                            const std::vector<BasisFunction>& binary, std::mt19937_64& rng) {
  if (hi - lo == 1) {
    auto leaf = ReadOnceFormula::variable(n, leaves[lo]);
    if (std::bernoulli_distribution(0.5)(rng)) return ReadOnceFormula::apply(gates::negation(), {leaf});
    return leaf;
  }
  std::uniform_int_distribution<std::size_t> cut(lo + 1, hi - 1);
  std::uniform_int_distribution<std::size_t> pick(0, binary.size() - 1);
  const std::size_t mid = cut(rng);
  const BasisFunction& g = binary[pick(rng)];
  return ReadOnceFormula::apply(g, {random_tree(n, leaves, lo, mid, binary, rng),
                                    random_tree(n, leaves, mid, hi, binary, rng)});
}

}  // namespace

ReadOnceFormula random_read_once_b2(unsigned n, VarMask leaves, std::mt19937_64& rng) {
  std::vector<VarIndex> order = mask_members(leaves);
  if (order.empty()) return ReadOnceFormula::constant(n, std::bernoulli_distribution(0.5)(rng));
  std::shuffle(order.begin(), order.end(), rng);
  const Basis b2 = Basis::b2();
  std::vector<BasisFunction> binary;
  for (const auto& g : b2.generators()) {
    if (g.arity() == 2) binary.push_back(g);
  }
  return random_tree(n, order, 0, order.size(), binary, rng);
}

std::vector<const Candidate*> fully_essential(const CandidateSet& set) {
  const VarMask all = set.arity() == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << set.arity()) - 1);
  std::vector<const Candidate*> out;
  for (const auto& c : set) {
    if (essential_mask(c.table) == all) out.push_back(&c);
  }
  return out;
}

}  // namespace roql
