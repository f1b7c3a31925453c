#include "roql/oracle.hpp"

#include <bit>

#include <json.hpp>

#include "roql/errors.hpp"

namespace roql {

const char* kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Membership: return "membership";
    case QueryKind::SubcubeIdentity: return "si";
    case QueryKind::Necessity: return "necessity";
    case QueryKind::Possibility: return "possibility";
    case QueryKind::SubcubeParity: return "parity";
    case QueryKind::Equivalence: return "equivalence";
  }
  return "?";
}

QueryKind kind_of(const Query& q) { return static_cast<QueryKind>(q.index()); }

std::string Answer::to_string() const {
  switch (kind) {
    case Kind::Bit: return value ? "1" : "0";
    case Kind::YesNo: return value ? "yes" : "no";
    case Kind::EquivalenceYes: return "yes";
    case Kind::Counterexample: return counterexample.to_string();
  }
  return "?";
}

std::uint64_t QueryCounts::total() const {
  std::uint64_t t = 0;
  for (auto c : by_kind) t += c;
  return t;
}

QueryCounts operator-(const QueryCounts& a, const QueryCounts& b) {
  QueryCounts d;
  for (std::size_t k = 0; k < kQueryKindCount; ++k) d.by_kind[k] = a.by_kind[k] - b.by_kind[k];
  return d;
}

std::string QueryCounts::to_json() const {
  nlohmann::ordered_json j;
  for (std::size_t k = 0; k < kQueryKindCount; ++k) j[kind_name(static_cast<QueryKind>(k))] = by_kind[k];
  return j.dump();
}

std::string payload_string(const Query& q) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MembershipQuery>) return v.x.to_string();
        else if constexpr (std::is_same_v<T, EquivalenceQuery>) return v.g.to_string();
        else return v.p.to_string();
      },
      q);
}

// ---------------------------------------------------------------------------
// OracleSession

OracleSession::OracleSession(TruthTable target, std::initializer_list<QueryKind> allowed, OracleOptions options)
    : OracleSession(std::move(target), std::vector<QueryKind>(allowed), std::move(options)) {}

OracleSession::OracleSession(TruthTable target, std::vector<QueryKind> allowed, OracleOptions options)
    : target_(std::move(target)), options_(std::move(options)) {
  for (auto k : allowed) allowed_[static_cast<std::size_t>(k)] = true;
}

std::vector<QueryKind> OracleSession::all_kinds() {
  return {QueryKind::Membership, QueryKind::SubcubeIdentity, QueryKind::Necessity,
          QueryKind::Possibility, QueryKind::SubcubeParity,   QueryKind::Equivalence};
}

Answer OracleSession::evaluate(const Query& q) const {
  const unsigned n = target_.arity();
  auto check_arity = [n](unsigned m) {
    if (m != n) {
      throw ArityError("query arity " + std::to_string(m) + " does not match target arity " + std::to_string(n));
    }
  };
  return std::visit(
      [&](const auto& v) -> Answer {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MembershipQuery>) {
          check_arity(v.x.arity());
          return Answer::bit(target_[v.x.index()]);
        } else if constexpr (std::is_same_v<T, EquivalenceQuery>) {
          check_arity(v.g.arity());
          if (options_.basis && !v.g.over_basis(*options_.basis)) {
            throw QueryRejected("hypothesis is not read-once over basis " + options_.basis->name());
          }
          TruthTable diff = target_ ^ v.g.truth_table();
          for (std::uint64_t w = 0; w < diff.words().size(); ++w) {
            if (std::uint64_t word = diff.words()[w]) {
              auto idx = static_cast<std::uint32_t>(w * 64 + static_cast<unsigned>(std::countr_zero(word)));
              return Answer::counter(TotalAssignment(n, idx));
            }
          }
          return Answer::equivalent();
        } else {
          check_arity(v.p.arity());
          if constexpr (std::is_same_v<T, SubcubeParityQuery>) {
            return Answer::bit(project(target_, v.p).parity());
          } else {
            if constexpr (std::is_same_v<T, SubcubeIdentityQuery>) {
              if (v.p.is_total()) {
                return Answer::yes_no(options_.generalized_si ? target_[v.p.zero_extension().index()] : true);
              }
            }
            auto c = is_constant(project(target_, v.p));
            if constexpr (std::is_same_v<T, SubcubeIdentityQuery>) return Answer::yes_no(c.has_value());
            else if constexpr (std::is_same_v<T, NecessityQuery>) return Answer::yes_no(c == true);
            else return Answer::yes_no(c != false);
          }
        }
      },
      q);
}

Answer OracleSession::answer(const Query& q) {
  const QueryKind k = kind_of(q);
  if (!allows(k)) throw QueryRejected(std::string(kind_name(k)) + " queries are not allowed in this session");
  Answer a = evaluate(q);
  ++counts_[k];
  if (options_.log) log_.push_back(std::string(kind_name(k)) + " " + payload_string(q) + " -> " + a.to_string());
  return a;
}

bool OracleSession::membership(const TotalAssignment& x) { return answer(MembershipQuery{x}).value; }
bool OracleSession::subcube_identity(const PartialAssignment& p) { return answer(SubcubeIdentityQuery{p}).value; }
bool OracleSession::necessity(const PartialAssignment& p) { return answer(NecessityQuery{p}).value; }
bool OracleSession::possibility(const PartialAssignment& p) { return answer(PossibilityQuery{p}).value; }
bool OracleSession::subcube_parity(const PartialAssignment& p) { return answer(SubcubeParityQuery{p}).value; }

std::optional<TotalAssignment> OracleSession::equivalence(const ReadOnceFormula& g) {
  Answer a = answer(EquivalenceQuery{g});
  if (a.kind == Answer::Kind::EquivalenceYes) return std::nullopt;
  return a.counterexample;
}

// ---------------------------------------------------------------------------
// Adapters

bool si_from_np(OracleSession& s, const PartialAssignment& p) {
  if (s.necessity(p)) return true;
  return !s.possibility(p);
}

bool necessity_from_si_m(OracleSession& s, const PartialAssignment& p) {
  if (!p.is_total() && !s.subcube_identity(p)) return false;
  return s.membership(p.zero_extension());
}

bool possibility_from_si_m(OracleSession& s, const PartialAssignment& p) {
  if (!p.is_total() && !s.subcube_identity(p)) return true;
  return s.membership(p.zero_extension());
}

TotalAssignment bisect(OracleSession& s, const PartialAssignment& p, bool c) {
  if (p.is_total()) throw PromiseViolation("bisect needs a subcube with at least one star");
  if (s.subcube_identity(p)) throw PromiseViolation("bisect: target is constant on subcube " + p.to_string());
  // From here on q is never constant, so its two constant halves differ.
  PartialAssignment q = p;
  for (;;) {
    const VarIndex i = static_cast<VarIndex>(std::countr_zero(q.stars()));
    const PartialAssignment lo = q.with(i, false);
    const PartialAssignment hi = q.with(i, true);
    if (q.star_count() > 1) {
      if (!s.subcube_identity(lo)) {
        q = lo;
        continue;
      }
      if (!s.subcube_identity(hi)) {
        q = hi;
        continue;
      }
    }
    const TotalAssignment x = lo.zero_extension();
    return s.membership(x) != c ? x : hi.zero_extension();
  }
}

TestBuilder hypercube_test_builder(unsigned l) {
  return [l](const TruthTable& f) { return hypercube_test(f, l); };
}

std::optional<TotalAssignment> equivalence_from_m_si(OracleSession& s, const ReadOnceFormula& g,
                                                     const TestBuilder& builder) {
  const unsigned n = s.arity();
  if (g.arity() != n) throw ArityError("hypothesis arity does not match target arity");
  if (s.options().basis && !g.over_basis(*s.options().basis)) {
    throw QueryRejected("hypothesis is not read-once over basis " + s.options().basis->name());
  }
  const TruthTable table = g.truth_table();
  const VarMask essential = essential_mask(table);
  const VarMask all = n == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << n) - 1);
  const VarMask fictitious = all & ~essential;
  const std::vector<VarIndex> kept = mask_members(essential);
  const CheckingTest test = builder(project(table, PartialAssignment(n, fictitious, 0)));

  auto lift = [&](const TotalAssignment& xr) {
    std::uint32_t bits = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (xr.value(static_cast<VarIndex>(k))) bits |= std::uint32_t{1} << kept[k];
    }
    return TotalAssignment(n, bits);
  };

  for (const auto& [xr, v] : test.pairs()) {
    TotalAssignment x = lift(xr);
    if (s.membership(x) != v) return x;
  }
  if (fictitious == 0) return std::nullopt;
  for (const auto& [xr, v] : test.pairs()) {
    PartialAssignment p(n, essential, lift(xr).index());
    if (!s.subcube_identity(p)) return bisect(s, p, v);
  }
  return std::nullopt;
}

}  // namespace roql
