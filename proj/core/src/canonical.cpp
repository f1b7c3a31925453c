#include "roql/canonical.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "roql/errors.hpp"

namespace roql {

using Label = CanonicalTree::Label;

namespace {

const char* label_name(Label l) {
  switch (l) {
    case Label::And: return "AND";
    case Label::Or: return "OR";
    case Label::Xor: return "XOR";
    case Label::Nxor: return "NXOR";
    default: return "";
  }
}

void sort_children(std::vector<CanonicalTree>& kids) {
  std::sort(kids.begin(), kids.end(),
            [](const CanonicalTree& a, const CanonicalTree& b) { return a.min_var() < b.min_var(); });
}

}  // namespace

CanonicalTree CanonicalTree::constant(bool b) {
  CanonicalTree t;
  t.label = b ? Label::One : Label::Zero;
  return t;
}

CanonicalTree CanonicalTree::literal(VarIndex v, bool positive) {
  CanonicalTree t;
  t.label = Label::Literal;
  t.var = v;
  t.positive = positive;
  return t;
}

CanonicalTree CanonicalTree::node(Label label, std::vector<CanonicalTree> children) {
  CanonicalTree t;
  t.label = label;
  t.children = std::move(children);
  sort_children(t.children);
  return t;
}

VarIndex CanonicalTree::min_var() const {
  if (is_literal()) return var;
  VarIndex m = std::numeric_limits<VarIndex>::max();
  for (const auto& c : children) m = std::min(m, c.min_var());
  return m;
}

VarMask CanonicalTree::vars() const {
  if (is_literal()) return VarMask{1} << var;
  VarMask m = 0;
  for (const auto& c : children) m |= c.vars();
  return m;
}

bool CanonicalTree::eval(std::uint32_t input) const {
  switch (label) {
    case Label::Zero: return false;
    case Label::One: return true;
    case Label::Literal: return (((input >> var) & 1u) != 0) == positive;
    case Label::And:
      return std::all_of(children.begin(), children.end(), [&](const auto& c) { return c.eval(input); });
    case Label::Or:
      return std::any_of(children.begin(), children.end(), [&](const auto& c) { return c.eval(input); });
    case Label::Xor:
    case Label::Nxor: {
      bool acc = label == Label::Nxor;
      for (const auto& c : children) acc ^= c.eval(input);
      return acc;
    }
  }
  return false;
}

TruthTable CanonicalTree::truth_table(unsigned n) const {
  if (n < 32 && (vars() >> n) != 0) throw ArityError("tree mentions a variable beyond arity " + std::to_string(n));
  return TruthTable::tabulate(n, [this](std::uint32_t v) { return eval(v); });
}

ReadOnceFormula CanonicalTree::to_formula(unsigned n) const {
  switch (label) {
    case Label::Zero: return ReadOnceFormula::constant(n, false);
    case Label::One: return ReadOnceFormula::constant(n, true);
    case Label::Literal: {
      auto leaf = ReadOnceFormula::variable(n, var);
      return positive ? leaf : ReadOnceFormula::apply(gates::negation(), {leaf});
    }
    default: break;
  }
  BasisFunction gate = label == Label::And  ? gates::conjunction()
                       : label == Label::Or ? gates::disjunction()
                                            : gates::exclusive_or();
  ReadOnceFormula acc = children.front().to_formula(n);
  for (std::size_t k = 1; k < children.size(); ++k) {
    bool last = k + 1 == children.size();
    const BasisFunction& g = (last && label == Label::Nxor) ? gates::equivalence() : gate;
    acc = ReadOnceFormula::apply(g, {acc, children[k].to_formula(n)});
  }
  return acc;
}

std::string CanonicalTree::to_string() const {
  switch (label) {
    case Label::Zero: return "0";
    case Label::One: return "1";
    case Label::Literal: return (positive ? "x" : "~x") + std::to_string(var + 1);
    default: break;
  }
  std::string out = label_name(label);
  out += "(";
  for (std::size_t k = 0; k < children.size(); ++k) {
    if (k) out += ",";
    out += children[k].to_string();
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  CanonicalTree parse() {
    CanonicalTree t = term();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  CanonicalTree term() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '0' || c == '1') {
      ++pos_;
      return CanonicalTree::constant(c == '1');
    }
    bool positive = true;
    if (c == '~') {
      positive = false;
      ++pos_;
      skip_space();
    }
    if (pos_ < text_.size() && text_[pos_] == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      unsigned long k = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (k == 0 || k > 32) fail("variable index out of range");
      return CanonicalTree::literal(static_cast<VarIndex>(k - 1), positive);
    }
    if (!positive) fail("negation applies to literals only");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    Label label;
    if (name == "AND") label = Label::And;
    else if (name == "OR") label = Label::Or;
    else if (name == "XOR") label = Label::Xor;
    else if (name == "NXOR") label = Label::Nxor;
    else fail("unknown label '" + name + "'");
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
    ++pos_;
    std::vector<CanonicalTree> kids;
    for (;;) {
      kids.push_back(term());
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
    return CanonicalTree::node(label, std::move(kids));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CanonicalTree parse_canonical(std::string_view text) { return TermParser(text).parse(); }

// ---------------------------------------------------------------------------
// Smart constructors. Each takes canonical arguments over disjoint variables
// and returns the canonical tree of the combined function.

CanonicalTree negate(const CanonicalTree& t) {
  switch (t.label) {
    case Label::Zero: return CanonicalTree::constant(true);
    case Label::One: return CanonicalTree::constant(false);
    case Label::Literal: return CanonicalTree::literal(t.var, !t.positive);
    case Label::Xor:
    case Label::Nxor: {
      CanonicalTree r = t;
      r.label = t.label == Label::Xor ? Label::Nxor : Label::Xor;
      return r;
    }
    case Label::And:
    case Label::Or: {
      std::vector<CanonicalTree> kids;
      kids.reserve(t.children.size());
      for (const auto& c : t.children) kids.push_back(negate(c));
      return CanonicalTree::node(t.label == Label::And ? Label::Or : Label::And, std::move(kids));
    }
  }
  return t;
}

namespace {

CanonicalTree make_nonlinear(Label label, const CanonicalTree& a, const CanonicalTree& b) {
  const bool absorbing = label == Label::Or;  // OR absorbs 1, AND absorbs 0
  for (const auto* x : {&a, &b}) {
    if (x->is_constant()) {
      bool v = x->label == Label::One;
      if (v == absorbing) return CanonicalTree::constant(v);
      return x == &a ? b : a;
    }
  }
  std::vector<CanonicalTree> kids;
  for (const auto* x : {&a, &b}) {
    if (x->label == label) kids.insert(kids.end(), x->children.begin(), x->children.end());
    else kids.push_back(*x);
  }
  return CanonicalTree::node(label, std::move(kids));
}

}  // namespace

CanonicalTree make_and(const CanonicalTree& a, const CanonicalTree& b) { return make_nonlinear(Label::And, a, b); }
CanonicalTree make_or(const CanonicalTree& a, const CanonicalTree& b) { return make_nonlinear(Label::Or, a, b); }

CanonicalTree make_xor(const CanonicalTree& a, const CanonicalTree& b) {
  if (a.is_constant()) return a.label == Label::One ? negate(b) : b;
  if (b.is_constant()) return b.label == Label::One ? negate(a) : a;
  bool parity = false;
  std::vector<CanonicalTree> kids;
  for (const auto* x : {&a, &b}) {
    if (x->is_linear()) {
      kids.insert(kids.end(), x->children.begin(), x->children.end());
      parity ^= x->label == Label::Nxor;
    } else if ((x->is_literal() && !x->positive) || x->label == Label::And) {
      kids.push_back(negate(*x));
      parity ^= true;
    } else {
      kids.push_back(*x);
    }
  }
  return CanonicalTree::node(parity ? Label::Nxor : Label::Xor, std::move(kids));
}

namespace {

/// Applies a gate of fan-in at most two, given as its truth table, to canonical children.
CanonicalTree apply_gate(const TruthTable& gate, std::vector<CanonicalTree> kids) {
  if (gate.arity() == 0) return CanonicalTree::constant(gate[0]);
  if (gate.arity() == 1) {
    bool v0 = gate[0], v1 = gate[1];
    if (v0 == v1) return CanonicalTree::constant(v0);
    return v1 ? kids[0] : negate(kids[0]);
  }
  // Fold constant children into the gate.
  for (unsigned k = 0; k < 2; ++k) {
    if (!kids[k].is_constant()) continue;
    bool v = kids[k].label == Label::One;
    PartialAssignment p(2, VarMask{1} << k, v ? (1u << k) : 0u);
    kids.erase(kids.begin() + k);
    return apply_gate(project(gate, p), std::move(kids));
  }
  const bool dep0 = depends_on(gate, 0), dep1 = depends_on(gate, 1);
  if (!dep0 || !dep1) {
    if (!dep0 && !dep1) return CanonicalTree::constant(gate[0]);
    unsigned keep = dep0 ? 0 : 1;
    PartialAssignment p(2, VarMask{1} << (1 - keep), 0);
    return apply_gate(project(gate, p), {kids[keep]});
  }
  if (gate.count_ones() % 2 == 0) {
    CanonicalTree x = make_xor(kids[0], kids[1]);
    return gate[0] ? negate(x) : x;
  }
  // Exactly one input has the odd value out: the gate is (a^s AND b^t) or its complement.
  std::uint32_t delta = 0;
  unsigned ones = static_cast<unsigned>(gate.count_ones());
  for (std::uint32_t v = 0; v < 4; ++v) {
    if (gate[v] == (ones == 1)) delta = v;
  }
  CanonicalTree a = (delta & 1u) ? kids[0] : negate(kids[0]);
  CanonicalTree b = (delta & 2u) ? kids[1] : negate(kids[1]);
  CanonicalTree conj = make_and(a, b);
  return ones == 1 ? conj : negate(conj);
}

CanonicalTree canonical_of(const FormulaNode& node) {
  switch (node.kind) {
    case FormulaNode::Kind::Variable: return CanonicalTree::literal(node.var);
    case FormulaNode::Kind::Constant: return CanonicalTree::constant(node.value);
    case FormulaNode::Kind::Gate: break;
  }
  if (node.gate.arity() > 2) {
    throw ArityError("gate '" + node.gate.name + "' has fan-in " + std::to_string(node.gate.arity()) +
                     "; canonical trees need fan-in at most 2");
  }
  std::vector<CanonicalTree> kids;
  for (const auto& c : node.children) kids.push_back(canonical_of(*c));
  return apply_gate(node.gate.table, std::move(kids));
}

void check(const CanonicalTree& t, const CanonicalTree* parent, VarMask& seen, std::vector<std::string>& out) {
  auto note = [&](const std::string& rule) {
    if (std::find(out.begin(), out.end(), rule) == out.end()) out.push_back(rule);
  };
  if (t.is_constant()) {
    if (parent) note("constant-not-alone");
    if (!t.children.empty()) note("leaf-with-children");
    return;
  }
  if (t.is_literal()) {
    if (!t.children.empty()) note("leaf-with-children");
    if (seen & (VarMask{1} << t.var)) note("repeated-variable");
    seen |= VarMask{1} << t.var;
    if (parent && parent->is_linear() && !t.positive) note("negation-under-linear");
    return;
  }
  if (t.children.size() < 2) note("unary-inner-vertex");
  if (parent) {
    if (parent->label == t.label) note("adjacent-identical-labels");
    if (parent->is_linear() && t.is_linear()) note("adjacent-linear-labels");
    if (parent->is_linear() && t.label == Label::And) note("and-under-linear");
  }
  for (std::size_t k = 0; k + 1 < t.children.size(); ++k) {
    if (t.children[k].min_var() >= t.children[k + 1].min_var()) note("unsorted-children");
  }
  for (const auto& c : t.children) check(c, &t, seen, out);
}

void glue_into(const CanonicalTree& t, std::vector<GlueTree>& siblings, bool parent_label, bool has_parent) {
  if (t.is_literal()) {
    siblings.push_back(GlueTree::leaf(t.var));
    return;
  }
  const bool label = t.is_nonlinear();
  if (has_parent && label && parent_label) {
    for (const auto& c : t.children) glue_into(c, siblings, label, true);
    return;
  }
  std::vector<GlueTree> kids;
  for (const auto& c : t.children) glue_into(c, kids, label, true);
  siblings.push_back(GlueTree::node(label, std::move(kids)));
}

}  // namespace

CanonicalTree canonicalize_b2(const ReadOnceFormula& f) { return canonical_of(f.root()); }

std::vector<std::string> canonical_violations(const CanonicalTree& t) {
  std::vector<std::string> out;
  VarMask seen = 0;
  check(t, nullptr, seen, out);
  return out;
}

GlueTree glueing(const CanonicalTree& t) {
  if (t.is_constant() || t.is_literal()) throw Error("no glueing: tree has no inner vertex");
  std::vector<GlueTree> root;
  glue_into(t, root, false, false);
  return std::move(root.front());
}

}  // namespace roql
