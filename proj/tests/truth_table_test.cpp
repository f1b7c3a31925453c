#include <gtest/gtest.h>

#include <random>

#include "roql/errors.hpp"
#include "roql/truth_table.hpp"

using namespace roql;

namespace {

TruthTable and2() { return TruthTable::from_bits("0001"); }

TruthTable random_table(unsigned n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  return TruthTable::tabulate(n, [&](std::uint32_t) { return coin(rng); });
}

PartialAssignment random_partial(unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> trit(0, 2);
  VarMask fixed = 0;
  std::uint32_t values = 0;
  for (VarIndex i = 0; i < n; ++i) {
    int t = trit(rng);
    if (t < 2) fixed |= VarMask{1} << i;
    if (t == 1) values |= 1u << i;
  }
  return PartialAssignment(n, fixed, values);
}

}  // namespace

TEST(TruthTable, IndexOrderPutsFirstVariableInLowBit) {
  TruthTable x1 = TruthTable::variable(2, 0);
  EXPECT_EQ(x1.to_bits(), "0101");
  EXPECT_EQ(TruthTable::variable(2, 1).to_bits(), "0011");
}

TEST(TruthTable, TextFormatRoundTrips) {
  TruthTable f = TruthTable::parse("n=3\n01101001");
  EXPECT_EQ(f.arity(), 3u);
  EXPECT_EQ(TruthTable::parse(f.to_text()), f);
  EXPECT_THROW(TruthTable::parse("n=2\n011"), ParseError);
}

TEST(TruthTable, ArityCapIsEnforced) {
  const unsigned old = arity_cap();
  set_arity_cap(4);
  EXPECT_THROW(TruthTable(5), ArityError);
  set_arity_cap(old);
  EXPECT_NO_THROW(TruthTable(5));
}

TEST(TruthTable, WordwiseOperatorsMatchPointwise) {
  std::mt19937_64 rng(7);
  for (unsigned n : {0u, 3u, 6u, 8u}) {
    TruthTable a = random_table(n, rng), b = random_table(n, rng);
    TruthTable conj = a & b, disj = a | b, x = a ^ b, na = ~a;
    for (std::uint64_t v = 0; v < a.size(); ++v) {
      EXPECT_EQ(conj[v], a[v] && b[v]);
      EXPECT_EQ(disj[v], a[v] || b[v]);
      EXPECT_EQ(x[v], a[v] != b[v]);
      EXPECT_EQ(na[v], !a[v]);
    }
  }
}

TEST(Project, HardwiringAConjunct) {
  EXPECT_EQ(project(and2(), PartialAssignment::parse("*1")), TruthTable::variable(1, 0));
}

TEST(Project, FullyFixedGivesArityZeroConstant) {
  TruthTable p = project(and2(), PartialAssignment::parse("10"));
  EXPECT_EQ(p.arity(), 0u);
  EXPECT_EQ(is_constant(p), false);
}

TEST(Project, AllStarsIsIdentity) {
  std::mt19937_64 rng(1);
  TruthTable f = random_table(5, rng);
  EXPECT_EQ(project(f, PartialAssignment(5)), f);
}

TEST(Project, ArityMismatchThrows) { EXPECT_THROW(project(and2(), PartialAssignment(3)), ArityError); }

TEST(Project, StarsAreRenumberedAscending) {
  // f = x1 & ~x3 over three variables; fixing x2 leaves (x1, x3) as new (x1, x2).
  TruthTable f = TruthTable::tabulate(3, [](std::uint32_t v) { return (v & 1u) && !(v & 4u); });
  EXPECT_EQ(project(f, PartialAssignment::parse("*0*")).to_bits(), "0100");
}

TEST(Project, CompositionProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<unsigned> pick_n(1, 8);
    const unsigned n = pick_n(rng);
    TruthTable f = random_table(n, rng);
    PartialAssignment p = random_partial(n, rng);
    const auto stars = mask_members(p.stars());
    PartialAssignment q = random_partial(static_cast<unsigned>(stars.size()), rng);
    // Re-map q's indices back onto p's stars.
    VarMask fixed = p.fixed();
    std::uint32_t values = p.values();
    for (std::size_t k = 0; k < stars.size(); ++k) {
      if (!q.is_star(static_cast<VarIndex>(k))) {
        fixed |= VarMask{1} << stars[k];
        if (q.value(static_cast<VarIndex>(k))) values |= 1u << stars[k];
      }
    }
    EXPECT_EQ(project(project(f, p), q), project(f, PartialAssignment(n, fixed, values)));
  }
}

TEST(TotalExtensions, OneStar) {
  auto ext = total_extensions(PartialAssignment::parse("1*"));
  ASSERT_EQ(ext.size(), 2u);
  EXPECT_EQ(ext[0].to_string(), "10");
  EXPECT_EQ(ext[1].to_string(), "11");
}

TEST(TotalExtensions, TotalAssignmentExtendsToItself) {
  auto ext = total_extensions(PartialAssignment::parse("101"));
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(ext[0].to_string(), "101");
}

TEST(TotalExtensions, AllStarsGivesWholeCube) { EXPECT_EQ(total_extensions(PartialAssignment(3)).size(), 8u); }

TEST(TotalExtensions, LengthAndAgreementProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    PartialAssignment p = random_partial(6, rng);
    auto ext = total_extensions(p);
    EXPECT_EQ(ext.size(), std::size_t{1} << p.star_count());
    for (const auto& a : ext) EXPECT_TRUE(p.extended_by(a));
  }
}

TEST(Essential, Examples) {
  EXPECT_EQ(essential_vars(and2()), (std::vector<VarIndex>{0, 1}));
  EXPECT_TRUE(essential_vars(TruthTable::constant(3, true)).empty());
  EXPECT_EQ(essential_vars(TruthTable::variable(2, 0)), (std::vector<VarIndex>{0}));
}

TEST(Essential, ProjectionOnlyKeepsStars) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    TruthTable f = random_table(6, rng);
    PartialAssignment p = random_partial(6, rng);
    const VarMask all_stars = p.star_count() == 0 ? 0 : (VarMask{1} << p.star_count()) - 1;
    EXPECT_EQ(essential_mask(project(f, p)) & ~all_stars, 0u);
  }
}

TEST(Essential, FictitiousVariableProjectionsAgree) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<unsigned> pick_n(1, 6);
    const unsigned n = pick_n(rng);
    // Sparse tables so that fictitious variables actually occur.
    TruthTable f = random_table(n, rng);
    if (trial % 2) f = f & TruthTable::variable(n, 0);
    if (trial % 3 == 0) f = TruthTable::variable(n, n - 1);
    for (VarIndex i = 0; i < n; ++i) {
      if (depends_on(f, i)) continue;
      EXPECT_EQ(project(f, PartialAssignment(n, VarMask{1} << i, 0)),
                project(f, PartialAssignment(n, VarMask{1} << i, 1u << i)));
    }
  }
}

TEST(IsConstant, Examples) {
  EXPECT_EQ(is_constant(TruthTable::constant(2, false)), false);
  EXPECT_EQ(is_constant(TruthTable::constant(2, true)), true);
  EXPECT_EQ(is_constant(TruthTable::variable(1, 0)), std::nullopt);
}

TEST(PartialAssignment, ParseAndRender) {
  PartialAssignment p = PartialAssignment::parse("1*0");
  EXPECT_EQ(p.star_count(), 1u);
  EXPECT_TRUE(p.is_star(1));
  EXPECT_EQ(p.to_string(), "1*0");
  EXPECT_EQ(p.zero_extension().to_string(), "100");
  EXPECT_THROW(PartialAssignment::parse("1x0"), ParseError);
}
