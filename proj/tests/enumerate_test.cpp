#include <gtest/gtest.h>

#include <random>
#include <set>

#include "roql/enumerate.hpp"
#include "roql/errors.hpp"

using namespace roql;

namespace {

/// Number of read-once functions over {AND, OR} with all n variables
/// essential: alternating AND/OR trees on n labelled leaves (OEIS A006351).
std::size_t monotone_read_once_full(unsigned n) {
  static const std::size_t known[] = {0, 1, 2, 8, 52, 472, 5504};
  return known[n];
}

}  // namespace

TEST(Enumerate, AndOrThreeVariables) {
  const CandidateSet& k = candidates(Basis::and_or(), 3);
  // Fully essential: AND3, OR3 and three of each of x & (y | z), x | (y & z).
  EXPECT_EQ(fully_essential(k).size(), 8u);
  // Plus the functions on fewer variables: 3 singletons and 3 * 2 pairs.
  EXPECT_EQ(k.size(), 17u);
}

TEST(Enumerate, AndOrMatchesKnownCounts) {
  for (unsigned n = 1; n <= 5; ++n) {
    EXPECT_EQ(fully_essential(candidates(Basis::and_or(), n)).size(), monotone_read_once_full(n)) << n;
  }
}

TEST(Enumerate, B2SmallCounts) {
  EXPECT_EQ(candidates(Basis::b2(), 0).size(), 2u);
  EXPECT_EQ(fully_essential(candidates(Basis::b2(), 2)).size(), 10u);
  EXPECT_EQ(fully_essential(candidates(Basis::b2(), 3)).size(), 114u);
  EXPECT_EQ(fully_essential(candidates(Basis::b2(), 4)).size(), 2154u);
}

TEST(Enumerate, EveryB2FunctionOfTwoVariablesIsReadOnce) {
  EXPECT_EQ(candidates(Basis::b2(), 2).size(), 16u);
}

TEST(Enumerate, FormulasMatchTablesAndBasis) {
  for (const char* name : {"b2", "and-or", "threshold3"}) {
    Basis b = Basis::from_name(name);
    const CandidateSet& k = candidates(b, 4);
    std::set<std::string> seen;
    for (const auto& c : k) {
      EXPECT_EQ(c.formula.truth_table(), c.table) << name;
      EXPECT_TRUE(c.formula.over_basis(b)) << c.formula.to_string();
      EXPECT_TRUE(seen.insert(c.table.to_bits()).second);
    }
  }
}

TEST(Enumerate, RandomB2FormulasAreCandidates) {
  std::mt19937_64 rng(4);
  const CandidateSet& k = candidates(Basis::b2(), 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<VarMask> leaves(0, 31);
    ReadOnceFormula f = random_read_once_b2(5, leaves(rng), rng);
    EXPECT_TRUE(k.find(f.truth_table()).has_value()) << f.to_string();
  }
}

TEST(Enumerate, ArityLimit) { EXPECT_THROW(enumerate_read_once(Basis::b2(), 7), ArityError); }
