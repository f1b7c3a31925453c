#pragma once

#include <array>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roql/canonical.hpp"
#include "roql/cotree.hpp"
#include "roql/enumerate.hpp"
#include "roql/oracle.hpp"

namespace roql {

/// Membership answers cached per input, so repeated points cost one query.
class MembershipMemo {
 public:
  explicit MembershipMemo(OracleSession& s) : session_(s) {}

  unsigned arity() const { return session_.arity(); }
  bool operator()(const TotalAssignment& x);
  bool operator()(std::uint32_t index) { return (*this)(TotalAssignment(arity(), index)); }

 private:
  OracleSession& session_;
  std::unordered_map<std::uint32_t, bool> cache_;
};

/// Four inputs differing only in x_i and x_j on which both are essential.
struct EssentialitySquare {
  VarIndex i = 0;
  VarIndex j = 0;
  /// Stars exactly at i and j.
  PartialAssignment base;
  /// values[a | b << 1] is f at x_i = a, x_j = b.
  std::array<bool, 4> values{};

  /// The 2-variable projection is AND/OR-like (odd number of ones).
  bool nonlinear() const { return (values[0] + values[1] + values[2] + values[3]) % 2 == 1; }
};

using SquareSet = std::map<std::pair<VarIndex, VarIndex>, EssentialitySquare>;

/// First base, in ascending order of the other variables' bits, whose square
/// has both x_i and x_j essential. Throws PromiseViolation when none exists.
EssentialitySquare find_square(MembershipMemo& m, VarIndex i, VarIndex j);
SquareSet build_square_set(MembershipMemo& m);

/// Cotree of the graph joining i and j when their square is non-linear.
/// Throws PromiseViolation when that graph is not a cograph.
GlueTree reconstruct_glueing(const SquareSet& squares, unsigned n);

/// Canonical tree of a target read-once over B2 with every variable essential,
/// using membership queries only.
CanonicalTree reconstruct_b2(OracleSession& s);
/// As above, also returning the square set the reconstruction used.
CanonicalTree reconstruct_b2(OracleSession& s, SquareSet& squares_out);

/// f(a) for a non-constant monotone target through a single SI query on the
/// subcube above a.
bool simulate_membership_monotone(OracleSession& s, const TotalAssignment& a);

struct MonotoneResult {
  CanonicalTree tree;
  VarMask fictitious = 0;
};

/// Identifies a non-constant read-once function over {AND, OR} with SI
/// queries only. Throws PromiseViolation for constant targets.
MonotoneResult learn_monotone_si(OracleSession& s);

struct EquivalenceLearnResult {
  ReadOnceFormula formula;
  /// Equivalence rounds, answered directly or by simulation.
  unsigned rounds = 0;
};

/// Candidate elimination driven by equivalence queries on the first
/// surviving candidate. With `simulate` each round goes through
/// equivalence_from_m_si with the basis fan-in as hypercube size.
EquivalenceLearnResult learn_via_equivalence(OracleSession& s, const Basis& basis, bool simulate);

}  // namespace roql
