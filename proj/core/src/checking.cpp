#include "roql/checking.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "roql/enumerate.hpp"
#include "roql/errors.hpp"

namespace roql {

namespace {

VarMask full(unsigned n) { return n == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << n) - 1); }

/// Spreads the low bits of `pattern` over the set bits of `mask`, lowest first.
std::uint32_t deposit(std::uint32_t pattern, VarMask mask) {
  std::uint32_t out = 0;
  for (VarMask m = mask; m; m &= m - 1) {
    if (pattern & 1u) out |= m & (~m + 1);
    pattern >>= 1;
  }
  return out;
}

void require_all_essential(const TruthTable& f) {
  if (essential_mask(f) != full(f.arity())) throw PromiseViolation("function has a fictitious variable");
}

/// l-subsets of {0..n-1} in ascending mask order.
std::vector<VarMask> subsets_of_size(unsigned n, unsigned l) {
  std::vector<VarMask> out;
  for (VarMask m = 0; m <= full(n); ++m) {
    if (static_cast<unsigned>(std::popcount(m)) == l) out.push_back(m);
    if (m == full(n)) break;
  }
  return out;
}

HypercubeSet build(const TruthTable& f, unsigned l, std::mt19937_64* rng) {
  require_all_essential(f);
  const unsigned n = f.arity();
  HypercubeSet set{n, l, {}};
  if (l > n) return set;
  for (VarMask cube_vars : subsets_of_size(n, l)) {
    const VarMask others = full(n) & ~cube_vars;
    std::vector<std::uint32_t> order(std::size_t{1} << std::popcount(others));
    std::iota(order.begin(), order.end(), 0u);
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    for (std::uint32_t pattern : order) {
      PartialAssignment base(n, others, deposit(pattern, others));
      if (essential_mask(project(f, base)) == full(l)) {
        set.cubes.emplace(cube_vars, Hypercube{cube_vars, base});
        break;
      }
    }
  }
  return set;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// CheckingTest

void CheckingTest::add(const TotalAssignment& x, bool value) {
  if (x.arity() != n_) throw ArityError("test input arity does not match test arity");
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), x.index(),
                             [](const auto& p, std::uint32_t idx) { return p.first.index() < idx; });
  if (it != pairs_.end() && it->first.index() == x.index()) {
    if (it->second != value) throw Error("conflicting values for input " + x.to_string());
    return;
  }
  pairs_.insert(it, {x, value});
}

bool CheckingTest::consistent_with(const TruthTable& f) const {
  if (f.arity() != n_) return false;
  return std::all_of(pairs_.begin(), pairs_.end(), [&](const auto& p) { return f[p.first.index()] == p.second; });
}

std::string CheckingTest::to_text(std::string_view basis_name) const {
  std::string out = "n=" + std::to_string(n_) + " basis=" + std::string(basis_name) + "\n";
  for (const auto& [x, v] : pairs_) out += x.to_string() + " " + (v ? "1" : "0") + "\n";
  return out;
}

std::pair<CheckingTest, std::string> CheckingTest::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header_n, header_basis;
  if (!(in >> header_n >> header_basis) || header_n.rfind("n=", 0) != 0 || header_basis.rfind("basis=", 0) != 0) {
    throw ParseError("checking test must start with 'n=<k> basis=<name>'");
  }
  unsigned n = 0;
  try {
    n = static_cast<unsigned>(std::stoul(header_n.substr(2)));
  } catch (const std::exception&) {
    throw ParseError("bad arity in checking test header");
  }
  CheckingTest test(n);
  std::string input, value;
  while (in >> input) {
    if (!(in >> value) || (value != "0" && value != "1")) throw ParseError("expected value bit after " + input);
    TotalAssignment x = TotalAssignment::parse(input);
    if (x.arity() != n) throw ArityError("test line " + input + " does not have arity " + std::to_string(n));
    test.add(x, value == "1");
  }
  return {std::move(test), header_basis.substr(6)};
}

// ---------------------------------------------------------------------------
// Hypercubes

HypercubeSet build_hypercube_set(const TruthTable& f, unsigned l) { return build(f, l, nullptr); }

HypercubeSet build_hypercube_set(const TruthTable& f, unsigned l, std::mt19937_64& rng) { return build(f, l, &rng); }

bool is_l_satisfiable(const TruthTable& f, unsigned l) {
  return build_hypercube_set(f, l).cubes.size() == binomial(f.arity(), l);
}

CheckingTest test_from_hypercubes(const TruthTable& f, const HypercubeSet& set) {
  CheckingTest test(f.arity());
  for (const auto& [vars, cube] : set.cubes) {
    for (const auto& x : cube.extensions()) test.add(x, f(x));
  }
  return test;
}

CheckingTest hypercube_test(const TruthTable& f, unsigned l) {
  const unsigned n = f.arity();
  if (n <= l) {
    CheckingTest test(n);
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << n); ++v) test.add(TotalAssignment(n, v), f[v]);
    return test;
  }
  HypercubeSet set = build_hypercube_set(f, l);
  if (set.cubes.size() != binomial(n, l)) {
    throw Error("no checking test: function is not " + std::to_string(l) + "-satisfiable");
  }
  return test_from_hypercubes(f, set);
}

std::size_t consistent_count(const CheckingTest& test, const Basis& basis, unsigned n) {
  if (test.arity() != n) throw ArityError("test arity does not match n");
  const CandidateSet& all = candidates(basis, n);
  std::size_t count = 0;
  for (const auto& c : all) count += test.consistent_with(c.table);
  return count;
}

bool verify_checking_test(const CheckingTest& test, const Basis& basis, unsigned n, const TruthTable& f_ref) {
  if (!test.consistent_with(f_ref)) throw Error("reference function is inconsistent with the test");
  if (!candidates(basis, n).find(f_ref)) return false;
  return consistent_count(test, basis, n) == 1;
}

std::optional<VarMask> is_discriminatory(const TruthTable& f) {
  require_all_essential(f);
  const unsigned n = f.arity();
  for (unsigned size = 1; size < n; ++size) {
    for (VarMask chosen : subsets_of_size(n, size)) {
      bool every_leaves_fictitious = true;
      for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << size); ++pattern) {
        PartialAssignment p(n, chosen, deposit(pattern, chosen));
        if (essential_mask(project(f, p)) == full(n - size)) {
          every_leaves_fictitious = false;
          break;
        }
      }
      if (every_leaves_fictitious) return chosen;
    }
  }
  return std::nullopt;
}

}  // namespace roql
