#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "roql/truth_table.hpp"

namespace roql {

/// A gate: a Boolean function of `arity` inputs. Input j of the gate is bit j
/// of the table index.
struct BasisFunction {
  std::string name;
  TruthTable table;

  unsigned arity() const { return table.arity(); }
  bool operator()(std::uint32_t inputs) const { return table[inputs]; }

  friend bool operator==(const BasisFunction& a, const BasisFunction& b) {
    return a.table == b.table;
  }
};

namespace gates {
BasisFunction constant(bool b);
BasisFunction identity();
BasisFunction negation();
BasisFunction conjunction();
BasisFunction disjunction();
BasisFunction exclusive_or();
BasisFunction equivalence();
/// Gate from the hex rendering of its table (most significant digit first).
BasisFunction from_hex(std::string_view hex, unsigned arity);
std::string to_hex(const TruthTable& table);
}  // namespace gates

/// A set of gates with a fan-in bound. `complete` bases are B_l: every
/// function of arity at most l is a member; the generator list then holds
/// one representative per non-degenerate function and is what enumeration
/// composes.
class Basis {
 public:
  Basis(std::string name, std::vector<BasisFunction> generators, bool complete = false);

  /// B_l, all functions of fan-in at most l.
  static Basis all_of_fanin(unsigned l);
  static Basis b2() { return all_of_fanin(2); }
  /// {AND, OR}.
  static Basis and_or();
  /// Monotone threshold functions of fan-in at most l (constants included).
  static Basis monotone_threshold(unsigned l);
  /// Built-in names: b<l>, and-or, threshold, threshold<l>. `default_fanin`
  /// sizes bases whose name omits it.
  static Basis from_name(std::string_view name, unsigned default_fanin = 4);

  const std::string& name() const { return name_; }
  unsigned max_fanin() const { return max_fanin_; }
  bool complete() const { return complete_; }
  const std::vector<BasisFunction>& generators() const { return generators_; }
  bool has_constant(bool b) const;
  bool has_negation() const;

  /// Whether `gate` may label a node of a formula over this basis. Inputs the
  /// gate ignores are dropped before the comparison; identity is always a wire.
  bool contains(const TruthTable& gate) const;

 private:
  std::string name_;
  std::vector<BasisFunction> generators_;
  bool complete_ = false;
  unsigned max_fanin_ = 0;
  std::unordered_map<unsigned, std::vector<TruthTable>> by_arity_;
};

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  enum class Kind { Variable, Constant, Gate };

  Kind kind = Kind::Constant;
  VarIndex var = 0;
  bool value = false;
  BasisFunction gate;
  std::vector<FormulaPtr> children;
};

/// Tree whose leaves carry distinct variables and whose inner nodes are gates
/// with fan-in equal to their child count. Variables of the ambient arity that
/// no leaf mentions are fictitious.
class ReadOnceFormula {
 public:
  /// Validates read-once-ness and leaf indices against n.
  ReadOnceFormula(unsigned n, FormulaPtr root);

  static ReadOnceFormula variable(unsigned n, VarIndex i);
  static ReadOnceFormula constant(unsigned n, bool b);
  /// Applies `gate` to subformulas over disjoint variable sets.
  static ReadOnceFormula apply(const BasisFunction& gate, const std::vector<ReadOnceFormula>& args);

  unsigned arity() const { return n_; }
  const FormulaNode& root() const { return *root_; }
  const FormulaPtr& root_ptr() const { return root_; }
  /// Variables that occur as leaves.
  VarMask leaves() const { return leaves_; }

  bool eval(const TotalAssignment& a) const;
  TruthTable truth_table() const;

  /// Every gate is a member of `basis`.
  bool over_basis(const Basis& basis) const;
  unsigned max_gate_arity() const;

  /// Renders in the formula grammar accepted by parse_formula.
  std::string to_string() const;

 private:
  unsigned n_ = 0;
  FormulaPtr root_;
  VarMask leaves_ = 0;
};

/// Parses the formula grammar: variables x<k> (1-based), constants 0 and 1,
/// unary ~, parenthesised binary (a & b), (a | b), (a ^ b), (a <=> b),
/// custom gates g{<hex>,<arity>}(args...) and named gates NAME(args...)
/// (AND, OR, XOR, NXOR with two or more arguments, NOT, and the generator
/// names of `basis`). When a basis is given, every gate must belong to it.
ReadOnceFormula parse_formula(std::string_view text, unsigned n, const Basis* basis = nullptr);
inline ReadOnceFormula parse_formula(std::string_view text, unsigned n, const Basis& basis) {
  return parse_formula(text, n, &basis);
}

}  // namespace roql
