#include <gtest/gtest.h>

#include <random>

#include "roql/errors.hpp"
#include "roql/learner.hpp"

using namespace roql;

namespace {

TruthTable tt(const char* formula, unsigned n) { return parse_formula(formula, n).truth_table(); }

OracleSession membership_session(const TruthTable& f, bool log = false) {
  return OracleSession(f, {QueryKind::Membership}, {.log = log});
}

OracleSession si_session(const TruthTable& f) { return OracleSession(f, {QueryKind::SubcubeIdentity}); }

CanonicalTree reconstruct(const TruthTable& f) {
  OracleSession s = membership_session(f);
  return reconstruct_b2(s);
}

}  // namespace

TEST(FindSquare, ConjunctionOfThree) {
  OracleSession s = membership_session(tt("AND(x1, x2, x3)", 3));
  MembershipMemo m(s);
  EssentialitySquare sq = find_square(m, 0, 1);
  EXPECT_EQ(sq.base.to_string(), "**1");
  EXPECT_EQ(sq.values, (std::array<bool, 4>{false, false, false, true}));
  EXPECT_TRUE(sq.nonlinear());
}

TEST(FindSquare, XorIsTheWholeCube) {
  OracleSession s = membership_session(tt("(x1 ^ x2)", 2));
  MembershipMemo m(s);
  EssentialitySquare sq = find_square(m, 0, 1);
  EXPECT_EQ(sq.base.to_string(), "**");
  EXPECT_EQ(sq.values, (std::array<bool, 4>{false, true, true, false}));
  EXPECT_FALSE(sq.nonlinear());
}

TEST(FindSquare, FictitiousVariableIsAPromiseViolation) {
  OracleSession s = membership_session(tt("x1", 2));
  MembershipMemo m(s);
  EXPECT_THROW(find_square(m, 0, 1), PromiseViolation);
}

TEST(MembershipMemo, RepeatedPointsCostOneQuery) {
  OracleSession s = membership_session(tt("(x1 & x2)", 2));
  MembershipMemo m(s);
  m(3u);
  m(TotalAssignment::parse("11"));
  EXPECT_EQ(s.counts()[QueryKind::Membership], 1u);
}

TEST(ReconstructGlueing, Examples) {
  auto glue_of = [](const char* formula, unsigned n) {
    OracleSession s = membership_session(tt(formula, n));
    MembershipMemo m(s);
    return reconstruct_glueing(build_square_set(m), n).to_string();
  };
  EXPECT_EQ(glue_of("AND(x1, x2, x3)", 3), "1(x1,x2,x3)");
  EXPECT_EQ(glue_of("XOR(x1, x2, x3)", 3), "0(x1,x2,x3)");
  EXPECT_EQ(glue_of("((x1 & x2) ^ x3)", 3), "0(1(x1,x2),x3)");
}

TEST(ReconstructB2, Examples) {
  EXPECT_EQ(reconstruct(tt("(x1 & x2)", 2)).to_string(), "AND(x1,x2)");
  EXPECT_EQ(reconstruct(tt("(~x1 & ~x2)", 2)).to_string(), "AND(~x1,~x2)");
  EXPECT_EQ(reconstruct(tt("~(x1 ^ x2)", 2)).to_string(), "NXOR(x1,x2)");
  CanonicalTree t = reconstruct(tt("((x1 | x2) ^ x3)", 3));
  EXPECT_EQ(t.to_string(), "XOR(OR(x1,x2),x3)");
  // A disjunction under a linear vertex stays an OR.
  EXPECT_EQ(reconstruct(tt("((~x1 & ~x2) ^ x3)", 3)).to_string(), "NXOR(OR(x1,x2),x3)");
}

TEST(ReconstructB2, SmallArities) {
  EXPECT_EQ(reconstruct(TruthTable::constant(0, true)).to_string(), "1");
  EXPECT_EQ(reconstruct(tt("~x1", 1)).to_string(), "~x1");
  EXPECT_EQ(reconstruct(tt("x1", 1)).to_string(), "x1");
}

TEST(ReconstructB2, MatchesCanonicalizationOnAllTargets) {
  for (unsigned n = 2; n <= 4; ++n) {
    for (const Candidate* c : fully_essential(candidates(Basis::b2(), n))) {
      CanonicalTree t = reconstruct(c->table);
      ASSERT_EQ(t.truth_table(n), c->table) << c->formula.to_string();
      EXPECT_TRUE(is_canonical(t)) << t.to_string();
      EXPECT_EQ(t, canonicalize_b2(c->formula));
    }
  }
}

TEST(ReconstructB2, GlueingAgreement) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned n = 2 + static_cast<unsigned>(trial % 5);
    TruthTable f = random_read_once_b2(n, (VarMask{1} << n) - 1, rng).truth_table();
    OracleSession s = membership_session(f);
    SquareSet squares;
    CanonicalTree t = reconstruct_b2(s, squares);
    ASSERT_EQ(t.truth_table(n), f);
    EXPECT_EQ(glueing(t), reconstruct_glueing(squares, n));
  }
}

TEST(ReconstructB2, MissingSquareIsAPromiseViolation) {
  // Every variable is essential, yet no base makes both x2 and x3 essential.
  TruthTable f = TruthTable::from_bits("1101100000000000");
  ASSERT_EQ(essential_mask(f), 0b1111u);
  EXPECT_THROW(reconstruct(f), PromiseViolation);
}

TEST(ReconstructB2, DeterministicQueryLog) {
  TruthTable f = tt("((x1 & ~x3) | (x2 ^ x4))", 4);
  OracleSession a = membership_session(f, true), b = membership_session(f, true);
  reconstruct_b2(a);
  reconstruct_b2(b);
  EXPECT_EQ(a.log(), b.log());
  EXPECT_FALSE(a.log().empty());
}

TEST(SimulateMembershipMonotone, Examples) {
  OracleSession conj = si_session(tt("(x1 & x2)", 2));
  EXPECT_TRUE(simulate_membership_monotone(conj, TotalAssignment::parse("11")));
  EXPECT_FALSE(simulate_membership_monotone(conj, TotalAssignment::parse("10")));
  OracleSession disj = si_session(tt("(x1 | x2)", 2));
  EXPECT_TRUE(simulate_membership_monotone(disj, TotalAssignment::parse("01")));
}

TEST(LearnMonotone, Examples) {
  OracleSession s = si_session(tt("(x1 & (x2 | x3))", 3));
  MonotoneResult r = learn_monotone_si(s);
  EXPECT_EQ(r.tree.to_string(), "AND(x1,OR(x2,x3))");
  EXPECT_EQ(r.fictitious, 0u);

  OracleSession single = si_session(tt("x1", 3));
  MonotoneResult leaf = learn_monotone_si(single);
  EXPECT_EQ(leaf.tree.to_string(), "x1");
  EXPECT_EQ(leaf.fictitious, 0b110u);
}

TEST(LearnMonotone, ConstantTargetIsAPromiseViolation) {
  OracleSession s = si_session(TruthTable::constant(2, false));
  EXPECT_THROW(learn_monotone_si(s), PromiseViolation);
}

TEST(LearnMonotone, AllTargetsUpToFourVariables) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (const Candidate& c : candidates(Basis::and_or(), n)) {
      if (is_constant(c.table)) continue;
      OracleSession s = si_session(c.table);
      MonotoneResult r = learn_monotone_si(s);
      EXPECT_EQ(r.tree.truth_table(n), c.table) << c.formula.to_string();
      EXPECT_EQ(r.fictitious, ((VarMask{1} << n) - 1) & ~essential_mask(c.table));
      EXPECT_EQ(s.counts().total(), s.counts()[QueryKind::SubcubeIdentity]);
      EXPECT_LE(s.counts().total(), 4u * n * n * n + 4u * n);
    }
  }
}

TEST(LearnViaEquivalence, SimulatedRunUsesNoRealEquivalence) {
  TruthTable f = tt("(x1 ^ (x2 & x3))", 3);
  OracleSession s(f, {QueryKind::Membership, QueryKind::SubcubeIdentity});
  EquivalenceLearnResult r = learn_via_equivalence(s, Basis::b2(), true);
  EXPECT_EQ(r.formula.truth_table(), f);
  EXPECT_EQ(s.counts()[QueryKind::Equivalence], 0u);
  EXPECT_GE(r.rounds, 1u);
}

TEST(LearnViaEquivalence, ConstantTarget) {
  OracleSession s(TruthTable::constant(2, true), {QueryKind::Equivalence});
  EXPECT_EQ(learn_via_equivalence(s, Basis::b2(), false).formula.truth_table(), TruthTable::constant(2, true));
}

TEST(LearnViaEquivalence, TargetOutsideTheBasis) {
  Basis and_only("and", {gates::conjunction()});
  OracleSession s(tt("(x1 | x2)", 2), {QueryKind::Equivalence});
  EXPECT_THROW(learn_via_equivalence(s, and_only, false), PromiseViolation);
}

TEST(LearnViaEquivalence, SimulationAgreesWithDirectQueries) {
  for (unsigned n = 1; n <= 3; ++n) {
    for (const Candidate& c : candidates(Basis::b2(), n)) {
      OracleSession direct(c.table, {QueryKind::Equivalence});
      OracleSession sim(c.table, {QueryKind::Membership, QueryKind::SubcubeIdentity});
      EquivalenceLearnResult a = learn_via_equivalence(direct, Basis::b2(), false);
      EquivalenceLearnResult b = learn_via_equivalence(sim, Basis::b2(), true);
      EXPECT_EQ(a.formula.truth_table(), c.table);
      EXPECT_EQ(b.formula.truth_table(), c.table) << c.formula.to_string();
    }
  }
}
