#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "roql/cotree.hpp"
#include "roql/formula.hpp"
#include "roql/truth_table.hpp"

namespace roql {

/// Normalized read-once tree over {AND, OR, XOR, NXOR, NOT, 0, 1}. Negation
/// only appears on literals. Children are sorted by their smallest variable.
struct CanonicalTree {
  enum class Label { Zero, One, Literal, And, Or, Xor, Nxor };

  Label label = Label::Zero;
  VarIndex var = 0;
  bool positive = true;
  std::vector<CanonicalTree> children;

  static CanonicalTree constant(bool b);
  static CanonicalTree literal(VarIndex v, bool positive = true);
  /// Inner vertex; children are sorted but otherwise taken as given.
  static CanonicalTree node(Label label, std::vector<CanonicalTree> children);

  bool is_constant() const { return label == Label::Zero || label == Label::One; }
  bool is_literal() const { return label == Label::Literal; }
  bool is_linear() const { return label == Label::Xor || label == Label::Nxor; }
  bool is_nonlinear() const { return label == Label::And || label == Label::Or; }

  VarIndex min_var() const;
  VarMask vars() const;

  bool eval(std::uint32_t input) const;
  TruthTable truth_table(unsigned n) const;
  /// Equivalent formula with binary AND/OR/XOR/NXOR gates and NOT on literals.
  ReadOnceFormula to_formula(unsigned n) const;

  /// Nested prefix term, e.g. AND(x1,OR(x2,~x3)).
  std::string to_string() const;

  friend bool operator==(const CanonicalTree&, const CanonicalTree&) = default;
};

/// Parses the prefix-term rendering produced by CanonicalTree::to_string.
/// The result is not checked for canonicality.
CanonicalTree parse_canonical(std::string_view text);

/// Canonical tree of a formula whose gates have fan-in at most two. Throws
/// ArityError for wider gates.
CanonicalTree canonicalize_b2(const ReadOnceFormula& f);

/// Complement of a canonical tree, again canonical.
CanonicalTree negate(const CanonicalTree& t);
CanonicalTree make_and(const CanonicalTree& a, const CanonicalTree& b);
CanonicalTree make_or(const CanonicalTree& a, const CanonicalTree& b);
CanonicalTree make_xor(const CanonicalTree& a, const CanonicalTree& b);

/// Names of the canonicality rules `t` breaks; empty when canonical.
std::vector<std::string> canonical_violations(const CanonicalTree& t);
inline bool is_canonical(const CanonicalTree& t) { return canonical_violations(t).empty(); }

/// Linear labels become 0, non-linear labels 1, adjacent 1-vertices merge and
/// literals lose their sign. Throws Error("no glueing") for trees without an
/// inner vertex.
GlueTree glueing(const CanonicalTree& t);

}  // namespace roql
