#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roql/formula.hpp"
#include "roql/truth_table.hpp"

namespace roql {

/// A set of input/value pairs, sorted by input and free of duplicates.
class CheckingTest {
 public:
  CheckingTest() = default;
  explicit CheckingTest(unsigned n) : n_(n) {}

  unsigned arity() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<TotalAssignment, bool>>& pairs() const { return pairs_; }

  /// Adds a pair; a repeated input must repeat its value.
  void add(const TotalAssignment& x, bool value);
  bool consistent_with(const TruthTable& f) const;

  /// File format: header "n=<k> basis=<name>", then "<01-vector> <bit>" per line.
  std::string to_text(std::string_view basis_name) const;
  /// Parses the file format; returns the test and the basis name.
  static std::pair<CheckingTest, std::string> parse(std::string_view text);

 private:
  unsigned n_ = 0;
  std::vector<std::pair<TotalAssignment, bool>> pairs_;
};

/// Subcube whose projection depends on every variable in `vars`.
struct Hypercube {
  VarMask vars = 0;
  PartialAssignment base;

  std::vector<TotalAssignment> extensions() const { return total_extensions(base); }
};

struct HypercubeSet {
  unsigned n = 0;
  unsigned l = 0;
  /// Keyed by the variable subset.
  std::map<VarMask, Hypercube> cubes;
};

/// One hypercube per l-subset that admits one, bases searched in ascending
/// order. Throws PromiseViolation when f has a fictitious variable.
HypercubeSet build_hypercube_set(const TruthTable& f, unsigned l);
/// As above, with bases searched in an order shuffled by `rng`.
HypercubeSet build_hypercube_set(const TruthTable& f, unsigned l, std::mt19937_64& rng);

bool is_l_satisfiable(const TruthTable& f, unsigned l);

/// Values of f on every vertex of every hypercube in the set.
CheckingTest test_from_hypercubes(const TruthTable& f, const HypercubeSet& set);

/// Test for a function of arity n' used by the equivalence simulation: the
/// l-hypercube test when n' > l, the whole cube otherwise. Throws
/// Error("no checking test") when f is not l-satisfiable.
CheckingTest hypercube_test(const TruthTable& f, unsigned l);

/// True iff f_ref is the only read-once function over `basis` of arity n
/// consistent with the test. Throws Error when f_ref itself is inconsistent.
bool verify_checking_test(const CheckingTest& test, const Basis& basis, unsigned n, const TruthTable& f_ref);

/// Number of read-once functions over `basis` consistent with the test.
std::size_t consistent_count(const CheckingTest& test, const Basis& basis, unsigned n);

/// A nonempty proper subset X' such that every assignment to X' leaves some
/// other variable fictitious, searched by size and then ascending mask.
/// Throws PromiseViolation when f has a fictitious variable.
std::optional<VarMask> is_discriminatory(const TruthTable& f);

}  // namespace roql
