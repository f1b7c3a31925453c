#include "roql/lowerbound.hpp"

#include <algorithm>
#include <bit>
#include <memory>

#include "roql/errors.hpp"

namespace roql {

bool ThresholdFunction::eval(std::uint32_t input) const {
  Rational sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if ((input >> i) & 1u) sum += weights[i];
  }
  return sum >= threshold;
}

TruthTable ThresholdFunction::truth_table() const {
  return TruthTable::tabulate(arity(), [this](std::uint32_t v) { return eval(v); });
}

ReadOnceFormula ThresholdFunction::formula() const {
  const unsigned n = arity();
  TruthTable t = truth_table();
  BasisFunction gate{"g{" + gates::to_hex(t) + "," + std::to_string(n) + "}", t};
  std::vector<ReadOnceFormula> args;
  for (VarIndex i = 0; i < n; ++i) args.push_back(ReadOnceFormula::variable(n, i));
  return ReadOnceFormula::apply(gate, args);
}

std::string ThresholdFunction::to_string() const {
  auto r = [](const Rational& q) {
    return q.denominator() == 1 ? std::to_string(q.numerator())
                                : std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
  };
  std::string out = "[";
  for (std::size_t i = 0; i < weights.size(); ++i) out += (i ? "," : "") + r(weights[i]);
  return out + "] >= " + r(threshold);
}

ThresholdFunction random_threshold(unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(0, 20), den(1, 8), frac_den(1, 12);
  ThresholdFunction t;
  Rational sum = 0;
  for (unsigned i = 0; i < n; ++i) {
    t.weights.emplace_back(num(rng), den(rng));
    sum += t.weights.back();
  }
  if (sum.numerator() == 0) {
    t.threshold = 1;
    return t;
  }
  const long long b = frac_den(rng);
  std::uniform_int_distribution<long long> a(1, b);
  t.threshold = sum * Rational(a(rng), b);
  return t;
}

KnFamily kn_family(unsigned n) {
  if (n < 2) throw Error("the K_n family needs n >= 2");
  KnFamily fam;
  fam.n = n;
  fam.k = n / 2;
  const long long k = fam.k;
  fam.base.weights.assign(n, Rational(1));
  fam.base.threshold = Rational(k + 1);
  fam.tables.push_back(fam.base.truth_table());
  for (VarMask s = 0; s < (VarMask{1} << n); ++s) {
    if (static_cast<unsigned>(std::popcount(s)) != fam.k) continue;
    ThresholdFunction v;
    for (VarIndex i = 0; i < n; ++i) v.weights.push_back(((s >> i) & 1u) ? Rational(1) + Rational(1, 2 * k) : Rational(1));
    v.threshold = Rational(k) + Rational(1, 2);
    fam.subsets.push_back(s);
    fam.tables.push_back(v.truth_table());
    fam.variants.push_back(std::move(v));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Adversary

namespace {

bool answer_for(const TruthTable& t, const Query& q) {
  if (const auto* m = std::get_if<MembershipQuery>(&q)) return t[m->x.index()];
  if (const auto* si = std::get_if<SubcubeIdentityQuery>(&q)) {
    return si->p.is_total() || is_constant(project(t, si->p)).has_value();
  }
  throw QueryRejected("the adversary answers membership and SI queries only");
}

}  // namespace

bool agrees_with_base(const KnFamily& family, std::size_t member, const Query& q) {
  return answer_for(family.tables[member], q) == answer_for(family.tables[0], q);
}

Adversary::Adversary(const KnFamily& family) : family_(family), alive_(family.size(), true) {}

std::size_t Adversary::alive_count() const { return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true)); }

Answer Adversary::answer(const Query& q) {
  const bool value = answer_for(family_.tables[0], q);
  std::size_t removed = 0;
  for (std::size_t m = 1; m < alive_.size(); ++m) {
    if (alive_[m] && answer_for(family_.tables[m], q) != value) {
      alive_[m] = false;
      ++removed;
    }
  }
  if (removed > 1) throw Error("a single answer removed " + std::to_string(removed) + " family members");
  ++counts_[kind_of(q)];
  transcript_.push_back({q, value});
  return kind_of(q) == QueryKind::Membership ? Answer::bit(value) : Answer::yes_no(value);
}

// ---------------------------------------------------------------------------
// Strategies

Strategy exhaustive_k_weight_strategy(const KnFamily& family) {
  std::vector<std::uint32_t> points;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << family.n); ++x) {
    if (static_cast<unsigned>(std::popcount(x)) == family.k) points.push_back(x);
  }
  const unsigned n = family.n;
  return [points, n](const std::vector<TranscriptEntry>& transcript) -> Query {
    return MembershipQuery{TotalAssignment(n, points[transcript.size() % points.size()])};
  };
}

Strategy random_strategy(const KnFamily& family, std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  const unsigned n = family.n;
  return [rng, n](const std::vector<TranscriptEntry>&) -> Query {
    std::uniform_int_distribution<int> coin(0, 1), trit(0, 2);
    std::uniform_int_distribution<std::uint32_t> point(0, (std::uint32_t{1} << n) - 1);
    if (coin(*rng) == 0) return MembershipQuery{TotalAssignment(n, point(*rng))};
    VarMask fixed = 0;
    std::uint32_t values = 0;
    for (VarIndex i = 0; i < n; ++i) {
      int t = trit(*rng);
      if (t < 2) fixed |= VarMask{1} << i;
      if (t == 1) values |= std::uint32_t{1} << i;
    }
    return SubcubeIdentityQuery{PartialAssignment(n, fixed, values)};
  };
}

Strategy greedy_strategy(const KnFamily& family) {
  return [&family](const std::vector<TranscriptEntry>& transcript) -> Query {
    std::vector<std::size_t> consistent;
    for (std::size_t m = 0; m < family.size(); ++m) {
      bool ok = std::all_of(transcript.begin(), transcript.end(), [&](const TranscriptEntry& e) {
        return answer_for(family.tables[m], e.query) == e.answer;
      });
      if (ok) consistent.push_back(m);
    }
    std::uint32_t best = 0;
    std::size_t best_score = 0;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << family.n); ++x) {
      std::size_t ones = 0;
      for (auto m : consistent) ones += family.tables[m][x];
      const std::size_t score = std::min(ones, consistent.size() - ones);
      if (score > best_score) {
        best_score = score;
        best = x;
      }
    }
    return MembershipQuery{TotalAssignment(family.n, best)};
  };
}

ExperimentResult run_adversary_experiment(const Strategy& strategy, const std::string& name, unsigned n,
                                          unsigned budget) {
  const KnFamily family = kn_family(n);
  Adversary adversary(family);
  for (unsigned q = 0; q < budget; ++q) adversary.answer(strategy(adversary.transcript()));
  ExperimentResult r;
  r.n = n;
  r.k = family.k;
  r.family_variants = family.variants.size();
  r.strategy = name;
  r.budget = budget;
  r.survivors = adversary.alive_count();
  r.counts = adversary.counts();
  return r;
}

KnIdentification eq_identifies_kn(const KnFamily& family, std::size_t target) {
  OracleSession s(family.tables.at(target), {QueryKind::Equivalence});
  auto ce = s.equivalence(family.base.formula());
  KnIdentification out;
  out.queries = static_cast<unsigned>(s.counts()[QueryKind::Equivalence]);
  if (!ce) return out;
  auto it = std::find(family.subsets.begin(), family.subsets.end(), ce->index());
  if (it == family.subsets.end()) throw Error("counterexample does not match any variant");
  out.identified = 1 + static_cast<std::size_t>(it - family.subsets.begin());
  return out;
}

}  // namespace roql
