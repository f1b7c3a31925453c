#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "roql/enumerate.hpp"
#include "roql/errors.hpp"
#include "roql/oracle.hpp"

using namespace roql;

namespace {

TruthTable and3() { return parse_formula("AND(x1, x2, x3)", 3).truth_table(); }
TruthTable or2() { return parse_formula("(x1 | x2)", 2).truth_table(); }

std::vector<PartialAssignment> all_partials(unsigned n) {
  std::vector<PartialAssignment> out;
  std::uint32_t total = 1;
  for (unsigned i = 0; i < n; ++i) total *= 3;
  for (std::uint32_t code = 0; code < total; ++code) {
    VarMask fixed = 0;
    std::uint32_t values = 0, c = code;
    for (VarIndex i = 0; i < n; ++i, c /= 3) {
      if (c % 3 < 2) fixed |= VarMask{1} << i;
      if (c % 3 == 1) values |= 1u << i;
    }
    out.emplace_back(n, fixed, values);
  }
  return out;
}

TruthTable random_table(unsigned n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  return TruthTable::tabulate(n, [&](std::uint32_t) { return coin(rng); });
}

}  // namespace

TEST(Oracle, MembershipExample) {
  OracleSession s(and3(), {QueryKind::Membership});
  EXPECT_TRUE(s.membership(TotalAssignment::parse("111")));
  EXPECT_FALSE(s.membership(TotalAssignment::parse("110")));
  EXPECT_EQ(s.counts()[QueryKind::Membership], 2u);
}

TEST(Oracle, SubcubeQueriesOnConjunction) {
  OracleSession s(and3(), OracleSession::all_kinds());
  EXPECT_TRUE(s.subcube_identity(PartialAssignment::parse("0**")));
  EXPECT_FALSE(s.subcube_identity(PartialAssignment::parse("1**")));
  EXPECT_FALSE(s.necessity(PartialAssignment::parse("1**")));
  EXPECT_TRUE(s.possibility(PartialAssignment::parse("1**")));
  EXPECT_FALSE(s.possibility(PartialAssignment::parse("0**")));
  EXPECT_TRUE(s.necessity(PartialAssignment::parse("111")));
  EXPECT_TRUE(s.subcube_parity(PartialAssignment::parse("1**")));
  EXPECT_FALSE(s.subcube_parity(PartialAssignment::parse("0**")));
}

TEST(Oracle, PureSubcubeIdentityOnTotalAssignmentIsYes) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity});
  EXPECT_TRUE(s.subcube_identity(PartialAssignment::parse("000")));
  OracleSession g(and3(), {QueryKind::SubcubeIdentity}, {.generalized_si = true});
  EXPECT_FALSE(g.subcube_identity(PartialAssignment::parse("000")));
  EXPECT_TRUE(g.subcube_identity(PartialAssignment::parse("111")));
}

TEST(Oracle, EquivalenceReturnsLowestCounterexample) {
  OracleSession s(or2(), {QueryKind::Equivalence});
  auto y = s.equivalence(parse_formula("(x1 & x2)", 2));
  ASSERT_TRUE(y.has_value());
  // OR and AND differ on 10 (index 1) and 01 (index 2); the lowest index wins.
  EXPECT_EQ(y->index(), 1u);
  EXPECT_FALSE(s.equivalence(parse_formula("(x2 | x1)", 2)).has_value());
}

TEST(Oracle, DisallowedKindIsRejectedAndNotCounted) {
  OracleSession s(and3(), {QueryKind::Membership});
  EXPECT_THROW(s.subcube_identity(PartialAssignment(3)), QueryRejected);
  EXPECT_EQ(s.counts().total(), 0u);
}

TEST(Oracle, ArityMismatchThrows) {
  OracleSession s(and3(), OracleSession::all_kinds());
  EXPECT_THROW(s.membership(TotalAssignment::parse("11")), ArityError);
  EXPECT_THROW(s.subcube_identity(PartialAssignment(4)), ArityError);
  EXPECT_THROW(s.equivalence(parse_formula("x1", 2)), ArityError);
}

TEST(Oracle, BasisRestrictsHypotheses) {
  OracleOptions opts;
  opts.basis = Basis::and_or();
  OracleSession s(or2(), {QueryKind::Equivalence}, opts);
  EXPECT_THROW(s.equivalence(parse_formula("(x1 ^ x2)", 2)), QueryRejected);
  EXPECT_EQ(s.counts().total(), 0u);
}

TEST(Oracle, LogLines) {
  OracleSession s(and3(), {QueryKind::Membership, QueryKind::SubcubeIdentity}, {.log = true});
  s.membership(TotalAssignment::parse("111"));
  s.subcube_identity(PartialAssignment::parse("0**"));
  ASSERT_EQ(s.log().size(), 2u);
  EXPECT_EQ(s.log()[0], "membership 111 -> 1");
  EXPECT_EQ(s.log()[1], "si 0** -> yes");
}

TEST(Oracle, CountsJson) {
  QueryCounts c;
  c[QueryKind::Membership] = 3;
  c[QueryKind::SubcubeIdentity] = 1;
  EXPECT_EQ(c.to_json(),
            R"({"membership":3,"si":1,"necessity":0,"possibility":0,"parity":0,"equivalence":0})");
  EXPECT_EQ(c.total(), 4u);
  QueryCounts d = c - c;
  EXPECT_EQ(d.total(), 0u);
}

TEST(Adapters, SiFromNecessityAndPossibility) {
  OracleSession s(and3(), {QueryKind::Necessity, QueryKind::Possibility});
  EXPECT_TRUE(si_from_np(s, PartialAssignment::parse("0**")));
  EXPECT_FALSE(si_from_np(s, PartialAssignment::parse("1**")));
  EXPECT_EQ(s.counts()[QueryKind::Necessity], 2u);
  EXPECT_EQ(s.counts()[QueryKind::Possibility], 2u);
}

TEST(Adapters, NecessityAndPossibilityFromSiAndMembership) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  EXPECT_FALSE(necessity_from_si_m(s, PartialAssignment::parse("1**")));
  EXPECT_TRUE(possibility_from_si_m(s, PartialAssignment::parse("1**")));
  EXPECT_FALSE(possibility_from_si_m(s, PartialAssignment::parse("0**")));
  EXPECT_TRUE(necessity_from_si_m(s, PartialAssignment::parse("111")));
}

TEST(Adapters, AgreeWithDirectQueriesExhaustively) {
  for (unsigned n = 0; n <= 3; ++n) {
    for (std::uint32_t code = 0; code < (1u << (1u << n)); ++code) {
      TruthTable f = TruthTable::from_u64(n, code);
      OracleSession direct(f, OracleSession::all_kinds());
      OracleSession np(f, {QueryKind::Necessity, QueryKind::Possibility});
      OracleSession sim(f, {QueryKind::SubcubeIdentity, QueryKind::Membership});
      for (const auto& p : all_partials(n)) {
        if (p.is_total()) {
          // Pure SI is trivially yes here; necessity and possibility reduce to membership.
          EXPECT_EQ(necessity_from_si_m(sim, p), direct.necessity(p));
          EXPECT_EQ(possibility_from_si_m(sim, p), direct.possibility(p));
          continue;
        }
        const bool si = direct.subcube_identity(p);
        EXPECT_EQ(si_from_np(np, p), si) << f.to_bits() << " " << p.to_string();
        EXPECT_EQ(necessity_from_si_m(sim, p), direct.necessity(p)) << f.to_bits() << " " << p.to_string();
        EXPECT_EQ(possibility_from_si_m(sim, p), direct.possibility(p)) << f.to_bits() << " " << p.to_string();
      }
    }
  }
}

TEST(Bisect, FindsDisagreeingPoint) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  TotalAssignment x = bisect(s, PartialAssignment(3), false);
  EXPECT_EQ(x.to_string(), "111");
}

TEST(Bisect, Examples) {
  OracleSession x2(parse_formula("x2", 2).truth_table(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  EXPECT_EQ(bisect(x2, PartialAssignment::parse("0*"), false).to_string(), "01");
  OracleSession parity(parse_formula("(x1 ^ x2)", 2).truth_table(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  TotalAssignment y = bisect(parity, PartialAssignment(2), false);
  EXPECT_EQ(std::popcount(y.index()) % 2, 1);
  // One star: both halves are points, so a single membership query decides.
  OracleSession x1(parse_formula("x1", 1).truth_table(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  EXPECT_EQ(bisect(x1, PartialAssignment(1), true).to_string(), "0");
  EXPECT_EQ(x1.counts()[QueryKind::Membership], 1u);
}

TEST(Bisect, ConstantSubcubeIsAPromiseViolation) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  EXPECT_THROW(bisect(s, PartialAssignment::parse("0**"), false), PromiseViolation);
}

TEST(Bisect, QueryBoundProperty) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned n = 2 + static_cast<unsigned>(trial % 7);
    TruthTable f = random_table(n, rng);
    if (is_constant(f)) continue;
    OracleSession s(f, {QueryKind::SubcubeIdentity, QueryKind::Membership});
    const bool c = f[0];
    TotalAssignment x = bisect(s, PartialAssignment(n), c);
    EXPECT_NE(f[x.index()], c);
    EXPECT_LE(s.counts()[QueryKind::SubcubeIdentity], 2u * n - 1);
    EXPECT_EQ(s.counts()[QueryKind::Membership], 1u);
  }
}

TEST(EquivalenceFromMembershipAndSi, AcceptsTheTarget) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  EXPECT_FALSE(equivalence_from_m_si(s, parse_formula("AND(x1, x2, x3)", 3), hypercube_test_builder(2)));
  EXPECT_EQ(s.counts()[QueryKind::SubcubeIdentity], 0u);
}

TEST(EquivalenceFromMembershipAndSi, CounterexampleOnFictitiousVariable) {
  // Target agrees with the hypothesis whenever x3 = 0, so only the SI phase sees x3.
  TruthTable target = parse_formula("((x1 & x2) | x3)", 3).truth_table();
  ReadOnceFormula g = parse_formula("(x1 & x2)", 3);
  OracleSession s(target, {QueryKind::SubcubeIdentity, QueryKind::Membership});
  auto y = equivalence_from_m_si(s, g, hypercube_test_builder(2));
  ASSERT_TRUE(y.has_value());
  EXPECT_NE(target[y->index()], g.truth_table()[y->index()]);
  EXPECT_GT(s.counts()[QueryKind::SubcubeIdentity], 0u);
}

TEST(EquivalenceFromMembershipAndSi, ParityAgainstSingleVariable) {
  OracleSession s(parse_formula("(x1 ^ x2)", 2).truth_table(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  auto y = equivalence_from_m_si(s, parse_formula("x1", 2), hypercube_test_builder(2));
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(y->to_string(), "01");
}

TEST(EquivalenceFromMembershipAndSi, MembershipPhaseCatchesLiftedPoints) {
  OracleSession s(and3(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
  auto y = equivalence_from_m_si(s, parse_formula("(x1 & x2)", 3), hypercube_test_builder(2));
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(y->to_string(), "110");
  EXPECT_EQ(s.counts()[QueryKind::SubcubeIdentity], 0u);
}

TEST(EquivalenceFromMembershipAndSi, SoundOnRandomB2Pairs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(trial % 6);
    std::uniform_int_distribution<VarMask> leaves(0, (VarMask{1} << n) - 1);
    ReadOnceFormula target = random_read_once_b2(n, leaves(rng), rng);
    ReadOnceFormula g = trial % 4 == 0 ? target : random_read_once_b2(n, leaves(rng), rng);
    OracleSession s(target.truth_table(), {QueryKind::SubcubeIdentity, QueryKind::Membership});
    auto y = equivalence_from_m_si(s, g, hypercube_test_builder(2));
    if (target.truth_table() == g.truth_table()) {
      EXPECT_FALSE(y.has_value());
    } else {
      ASSERT_TRUE(y.has_value()) << target.to_string() << " vs " << g.to_string();
      EXPECT_NE(target.truth_table()[y->index()], g.truth_table()[y->index()]);
    }
  }
}
