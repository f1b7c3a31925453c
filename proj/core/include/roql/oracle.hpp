#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "roql/checking.hpp"
#include "roql/formula.hpp"
#include "roql/truth_table.hpp"

namespace roql {

enum class QueryKind { Membership, SubcubeIdentity, Necessity, Possibility, SubcubeParity, Equivalence };

inline constexpr std::size_t kQueryKindCount = 6;

/// Short name used in logs and reports: membership, si, necessity,
/// possibility, parity, equivalence.
const char* kind_name(QueryKind k);

struct MembershipQuery {
  TotalAssignment x;
};
struct SubcubeIdentityQuery {
  PartialAssignment p;
};
struct NecessityQuery {
  PartialAssignment p;
};
struct PossibilityQuery {
  PartialAssignment p;
};
struct SubcubeParityQuery {
  PartialAssignment p;
};
struct EquivalenceQuery {
  ReadOnceFormula g;
};

using Query = std::variant<MembershipQuery, SubcubeIdentityQuery, NecessityQuery, PossibilityQuery,
                           SubcubeParityQuery, EquivalenceQuery>;

QueryKind kind_of(const Query& q);

struct Answer {
  enum class Kind { Bit, YesNo, EquivalenceYes, Counterexample };

  Kind kind = Kind::Bit;
  bool value = false;
  TotalAssignment counterexample;

  static Answer bit(bool b) { return {Kind::Bit, b, {}}; }
  static Answer yes_no(bool b) { return {Kind::YesNo, b, {}}; }
  static Answer equivalent() { return {Kind::EquivalenceYes, true, {}}; }
  static Answer counter(const TotalAssignment& y) { return {Kind::Counterexample, false, y}; }

  std::string to_string() const;
};

/// Per-kind query tallies.
struct QueryCounts {
  std::array<std::uint64_t, kQueryKindCount> by_kind{};

  std::uint64_t operator[](QueryKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  std::uint64_t& operator[](QueryKind k) { return by_kind[static_cast<std::size_t>(k)]; }
  std::uint64_t total() const;

  friend QueryCounts operator-(const QueryCounts& a, const QueryCounts& b);
  friend bool operator==(const QueryCounts&, const QueryCounts&) = default;

  /// {"membership": k1, "si": k2, ...}
  std::string to_json() const;
};

struct OracleOptions {
  /// Answer SI on a total assignment with f(p) instead of a constant yes.
  bool generalized_si = false;
  /// Equivalence hypotheses must be read-once over this basis when set.
  std::optional<Basis> basis;
  /// Record one log line per answered query.
  bool log = false;
};

/// Answers queries about a hidden target and counts them. Single owner; may
/// be moved between threads but not shared.
class OracleSession {
 public:
  OracleSession(TruthTable target, std::initializer_list<QueryKind> allowed, OracleOptions options = {});
  OracleSession(TruthTable target, std::vector<QueryKind> allowed, OracleOptions options = {});

  static std::vector<QueryKind> all_kinds();

  unsigned arity() const { return target_.arity(); }
  bool allows(QueryKind k) const { return allowed_[static_cast<std::size_t>(k)]; }
  const OracleOptions& options() const { return options_; }
  const QueryCounts& counts() const { return counts_; }
  const std::vector<std::string>& log() const { return log_; }

  /// Rejects disallowed kinds (QueryRejected, not counted) and arity mismatches (ArityError).
  Answer answer(const Query& q);

  bool membership(const TotalAssignment& x);
  bool subcube_identity(const PartialAssignment& p);
  bool necessity(const PartialAssignment& p);
  bool possibility(const PartialAssignment& p);
  bool subcube_parity(const PartialAssignment& p);
  /// nullopt when g computes the target; otherwise the lowest disagreeing input.
  std::optional<TotalAssignment> equivalence(const ReadOnceFormula& g);

 private:
  Answer evaluate(const Query& q) const;

  TruthTable target_;
  std::array<bool, kQueryKindCount> allowed_{};
  OracleOptions options_;
  QueryCounts counts_;
  std::vector<std::string> log_;
};

/// Payload rendering used in the query log.
std::string payload_string(const Query& q);

// ---------------------------------------------------------------------------
// Modeling adapters

/// SI through one necessity and at most one possibility query.
bool si_from_np(OracleSession& s, const PartialAssignment& p);

/// Necessity / possibility through at most one SI and one membership query.
bool necessity_from_si_m(OracleSession& s, const PartialAssignment& p);
bool possibility_from_si_m(OracleSession& s, const PartialAssignment& p);

/// Walks to a total extension x of p with f(x) != c, splitting on the lowest
/// starred variable. Confirms SI(p) = no first (PromiseViolation otherwise),
/// then spends at most 2k - 2 more SI queries and one membership query for k stars.
TotalAssignment bisect(OracleSession& s, const PartialAssignment& p, bool c);

/// Supplies a checking test for a hypothesis with its fictitious variables removed.
using TestBuilder = std::function<CheckingTest(const TruthTable&)>;

/// hypercube_test with fan-in l.
TestBuilder hypercube_test_builder(unsigned l);

/// Equivalence query answered with membership and SI queries only.
/// nullopt means g computes the target; otherwise a counterexample.
std::optional<TotalAssignment> equivalence_from_m_si(OracleSession& s, const ReadOnceFormula& g,
                                                     const TestBuilder& builder);

}  // namespace roql
