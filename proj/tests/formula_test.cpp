#include <gtest/gtest.h>

#include "roql/errors.hpp"
#include "roql/formula.hpp"

using namespace roql;

TEST(ParseFormula, ThreeLeafTree) {
  ReadOnceFormula f = parse_formula("(x1 & (x2 | ~x3))", 3);
  EXPECT_EQ(f.leaves(), 0b111u);
  EXPECT_EQ(f.truth_table(), TruthTable::tabulate(3, [](std::uint32_t v) {
              return (v & 1u) && ((v & 2u) || !(v & 4u));
            }));
}

TEST(ParseFormula, SingleLeafLeavesOthersFictitious) {
  ReadOnceFormula f = parse_formula("x1", 2);
  EXPECT_EQ(f.leaves(), 0b01u);
  EXPECT_EQ(f.truth_table().to_bits(), "0101");
}

TEST(ParseFormula, RepeatedVariableRejected) {
  EXPECT_THROW(parse_formula("(x1 & x1)", 2), RepeatedVariableError);
}

TEST(ParseFormula, VariableBeyondArityRejected) { EXPECT_THROW(parse_formula("(x1 & x3)", 2), ArityError); }

TEST(ParseFormula, SyntaxErrors) {
  EXPECT_THROW(parse_formula("(x1 & x2 | x3)", 3), ParseError);
  EXPECT_THROW(parse_formula("(x1 &", 2), ParseError);
  EXPECT_THROW(parse_formula("FOO(x1, x2)", 2), ParseError);
}

TEST(ParseFormula, CustomGateByHexTable) {
  // Majority of three: ones at inputs 3, 5, 6, 7 -> 0xe8.
  ReadOnceFormula f = parse_formula("g{e8,3}(x1, x2, x3)", 3);
  EXPECT_EQ(f.truth_table().to_bits(), "00010111");
  EXPECT_EQ(f.max_gate_arity(), 3u);
}

TEST(ParseFormula, NamedGates) {
  EXPECT_EQ(parse_formula("AND(x1, x2, x3)", 3).truth_table(), parse_formula("(x1 & (x2 & x3))", 3).truth_table());
  EXPECT_EQ(parse_formula("NXOR(x1, x2)", 2).truth_table().to_bits(), "1001");
  EXPECT_EQ(parse_formula("NOT(x1)", 1).truth_table().to_bits(), "10");
}

TEST(ParseFormula, BasisMembershipIsChecked) {
  Basis ao = Basis::and_or();
  EXPECT_NO_THROW(parse_formula("(x1 & (x2 | x3))", 3, ao));
  EXPECT_THROW(parse_formula("(x1 ^ x2)", 2, ao), ParseError);
  EXPECT_THROW(parse_formula("~x1", 1, ao), ParseError);
}

TEST(ParseFormula, RenderingParsesBack) {
  for (const char* text : {"(x1 & (x2 | ~x3))", "~(x1 ^ x2)", "g{e8,3}(x1, ~x2, x3)", "(0 | x2)", "((x1 <=> x3) & x2)"}) {
    ReadOnceFormula f = parse_formula(text, 3);
    EXPECT_EQ(parse_formula(f.to_string(), 3).truth_table(), f.truth_table()) << text;
  }
}

TEST(Eval, Examples) {
  EXPECT_TRUE(parse_formula("(x1 & x2)", 2).eval(TotalAssignment::parse("11")));
  EXPECT_FALSE(parse_formula("(x1 ^ x2)", 2).eval(TotalAssignment::parse("11")));
  EXPECT_THROW(parse_formula("x1", 2).eval(TotalAssignment::parse("1")), ArityError);
}

TEST(Basis, BuiltinNames) {
  EXPECT_EQ(Basis::from_name("b2").max_fanin(), 2u);
  EXPECT_EQ(Basis::from_name("b3").max_fanin(), 3u);
  EXPECT_EQ(Basis::from_name("and-or").generators().size(), 2u);
  EXPECT_EQ(Basis::from_name("threshold3").max_fanin(), 3u);
  EXPECT_THROW(Basis::from_name("nand"), ParseError);
}

TEST(Basis, B2HasTenBinaryGates) {
  const Basis b2 = Basis::b2();
  std::size_t binary = 0;
  for (const auto& g : b2.generators()) binary += g.arity() == 2;
  EXPECT_EQ(binary, 10u);
}

TEST(Basis, ContainsIgnoresFictitiousInputs) {
  Basis ao = Basis::and_or();
  // AND with a dangling third input is still AND.
  TruthTable and_with_dummy = TruthTable::tabulate(3, [](std::uint32_t v) { return (v & 3u) == 3u; });
  EXPECT_TRUE(ao.contains(and_with_dummy));
  EXPECT_TRUE(ao.contains(gates::identity().table));
  EXPECT_FALSE(ao.contains(gates::exclusive_or().table));
  EXPECT_FALSE(ao.contains(TruthTable::constant(0, true)));
}

TEST(Basis, ThresholdGeneratorsAreMonotone) {
  const Basis threshold = Basis::monotone_threshold(3);
  for (const auto& g : threshold.generators()) {
    for (std::uint32_t v = 0; v < g.table.size(); ++v) {
      for (VarIndex i = 0; i < g.arity(); ++i) {
        if (!((v >> i) & 1u)) EXPECT_LE(g.table[v], g.table[v | (1u << i)]) << g.name;
      }
    }
  }
}

TEST(Gates, HexRoundTrip) {
  const Basis b3 = Basis::all_of_fanin(3);
  for (const auto& g : b3.generators()) {
    EXPECT_EQ(gates::from_hex(gates::to_hex(g.table), g.arity()).table, g.table);
  }
}
