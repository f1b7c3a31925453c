#include "roql/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>

#include "roql/errors.hpp"

namespace roql {

// ---------------------------------------------------------------------------
// Gates

namespace gates {

BasisFunction constant(bool b) { return {b ? "1" : "0", TruthTable::constant(0, b)}; }
BasisFunction identity() { return {"ID", TruthTable::from_bits("01")}; }
BasisFunction negation() { return {"NOT", TruthTable::from_bits("10")}; }
BasisFunction conjunction() { return {"AND", TruthTable::from_bits("0001")}; }
BasisFunction disjunction() { return {"OR", TruthTable::from_bits("0111")}; }
BasisFunction exclusive_or() { return {"XOR", TruthTable::from_bits("0110")}; }
BasisFunction equivalence() { return {"NXOR", TruthTable::from_bits("1001")}; }

BasisFunction from_hex(std::string_view hex, unsigned arity) {
  if (arity > 16) throw ArityError("gate arity too large");
  const std::uint64_t size = std::uint64_t{1} << arity;
  const std::uint64_t digits = std::max<std::uint64_t>(1, size / 4);
  if (hex.size() != digits) {
    throw ArityError("gate of arity " + std::to_string(arity) + " needs " + std::to_string(digits) +
                     " hex digits, got '" + std::string(hex) + "'");
  }
  TruthTable t(arity);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[k])));
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw ParseError("bad hex digit in gate table '" + std::string(hex) + "'");
    }
    const std::uint64_t base = (hex.size() - 1 - k) * 4;
    for (unsigned b = 0; b < 4; ++b) {
      if ((nibble >> b) & 1u) {
        if (base + b >= size) throw ParseError("gate table has bits beyond its arity");
        t.set(base + b, true);
      }
    }
  }
  return {"g{" + std::string(hex) + "," + std::to_string(arity) + "}", t};
}

std::string to_hex(const TruthTable& table) {
  const std::uint64_t digits = std::max<std::uint64_t>(1, table.size() / 4);
  std::string out;
  for (std::uint64_t k = digits; k-- > 0;) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      std::uint64_t idx = k * 4 + b;
      if (idx < table.size() && table[idx]) nibble |= 1u << b;
    }
    out.push_back("0123456789abcdef"[nibble]);
  }
  return out;
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Basis

namespace {

TruthTable drop_fictitious(const TruthTable& t) {
  const VarMask essential = essential_mask(t);
  const VarMask all = t.arity() == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << t.arity()) - 1);
  return project(t, PartialAssignment(t.arity(), all & ~essential, 0));
}

std::vector<BasisFunction> nondegenerate_functions(unsigned arity) {
  std::vector<BasisFunction> out;
  const std::uint64_t size = std::uint64_t{1} << arity;
  const std::uint64_t count = std::uint64_t{1} << size;
  for (std::uint64_t m = 0; m < count; ++m) {
    TruthTable t = TruthTable::from_u64(arity, m);
    if (std::popcount(essential_mask(t)) == static_cast<int>(arity)) {
      out.push_back({"g{" + gates::to_hex(t) + "," + std::to_string(arity) + "}", t});
    }
  }
  return out;
}

std::vector<BasisFunction> threshold_functions(unsigned arity) {
  std::set<std::uint64_t> seen;
  std::vector<BasisFunction> out;
  const unsigned max_weight = arity + 1;
  std::vector<unsigned> w(arity, 0);
  while (true) {
    unsigned total = 0;
    for (auto x : w) total += x;
    for (unsigned theta = 1; theta <= total; ++theta) {
      std::uint64_t m = 0;
      for (std::uint32_t v = 0; v < (1u << arity); ++v) {
        unsigned s = 0;
        for (unsigned i = 0; i < arity; ++i) {
          if ((v >> i) & 1u) s += w[i];
        }
        if (s >= theta) m |= std::uint64_t{1} << v;
      }
      TruthTable t = TruthTable::from_u64(arity, m);
      if (std::popcount(essential_mask(t)) == static_cast<int>(arity) && seen.insert(m).second) {
        out.push_back({"g{" + gates::to_hex(t) + "," + std::to_string(arity) + "}", t});
      }
    }
    unsigned k = 0;
    while (k < arity && w[k] == max_weight) w[k++] = 0;
    if (k == arity) break;
    ++w[k];
  }
  return out;
}

}  // namespace

Basis::Basis(std::string name, std::vector<BasisFunction> generators, bool complete)
    : name_(std::move(name)), generators_(std::move(generators)), complete_(complete) {
  for (const auto& g : generators_) {
    max_fanin_ = std::max(max_fanin_, g.arity());
    by_arity_[g.arity()].push_back(g.table);
  }
}

Basis Basis::all_of_fanin(unsigned l) {
  if (l > 4) throw ArityError("B_l is only materialised for l <= 4");
  std::vector<BasisFunction> gens{gates::constant(false), gates::constant(true), gates::negation()};
  for (unsigned k = 2; k <= l; ++k) {
    auto more = nondegenerate_functions(k);
    gens.insert(gens.end(), more.begin(), more.end());
  }
  Basis b("b" + std::to_string(l), std::move(gens), true);
  b.max_fanin_ = l;
  return b;
}

Basis Basis::and_or() { return Basis("and-or", {gates::conjunction(), gates::disjunction()}); }

Basis Basis::monotone_threshold(unsigned l) {
  if (l > 5) throw ArityError("threshold basis is only materialised for fan-in <= 5");
  std::vector<BasisFunction> gens{gates::constant(false), gates::constant(true)};
  for (unsigned k = 2; k <= l; ++k) {
    auto more = threshold_functions(k);
    gens.insert(gens.end(), more.begin(), more.end());
  }
  Basis b("threshold" + std::to_string(l), std::move(gens));
  b.max_fanin_ = std::max(b.max_fanin_, l);
  return b;
}

Basis Basis::from_name(std::string_view name, unsigned default_fanin) {
  auto numeric_suffix = [&](std::string_view prefix) -> std::optional<unsigned> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto rest = name.substr(prefix.size());
    if (rest.empty()) return default_fanin;
    unsigned v = 0;
    for (char c : rest) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
    }
    return v;
  };
  if (name == "and-or") return and_or();
  if (name.size() >= 2 && name[0] == 'b') {
    if (auto l = numeric_suffix("b"); l && name.size() > 1) return all_of_fanin(*l);
  }
  if (auto l = numeric_suffix("threshold")) return monotone_threshold(std::max(2u, *l));
  throw ParseError("unknown basis '" + std::string(name) + "'");
}

bool Basis::has_constant(bool b) const {
  if (complete_) return true;
  auto it = by_arity_.find(0);
  if (it == by_arity_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), TruthTable::constant(0, b)) != it->second.end();
}

bool Basis::has_negation() const {
  if (complete_) return true;
  auto it = by_arity_.find(1);
  if (it == by_arity_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), gates::negation().table) != it->second.end();
}

bool Basis::contains(const TruthTable& gate) const {
  TruthTable reduced = drop_fictitious(gate);
  if (complete_) return reduced.arity() <= max_fanin_;
  if (reduced.arity() > max_fanin_ && reduced.arity() > 1) return false;
  if (reduced.arity() == 0) return has_constant(reduced[0]);
  if (reduced == gates::identity().table) return true;
  auto it = by_arity_.find(reduced.arity());
  if (it == by_arity_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), reduced) != it->second.end();
}

// ---------------------------------------------------------------------------
// ReadOnceFormula

namespace {

VarMask collect_leaves(const FormulaNode& node, unsigned n) {
  switch (node.kind) {
    case FormulaNode::Kind::Variable:
      if (node.var >= n) {
        throw ArityError("variable x" + std::to_string(node.var + 1) + " exceeds arity " +
                         std::to_string(n));
      }
      return VarMask{1} << node.var;
    case FormulaNode::Kind::Constant:
      return 0;
    case FormulaNode::Kind::Gate: {
      if (node.children.size() != node.gate.arity()) {
        throw ArityError("gate " + node.gate.name + " of arity " + std::to_string(node.gate.arity()) +
                         " applied to " + std::to_string(node.children.size()) + " arguments");
      }
      VarMask acc = 0;
      for (const auto& c : node.children) {
        VarMask m = collect_leaves(*c, n);
        if (acc & m) {
          throw RepeatedVariableError("variable x" + std::to_string(std::countr_zero(acc & m) + 1) +
                                      " occurs more than once");
        }
        acc |= m;
      }
      return acc;
    }
  }
  return 0;
}

bool eval_node(const FormulaNode& node, std::uint32_t input) {
  switch (node.kind) {
    case FormulaNode::Kind::Variable:
      return (input >> node.var) & 1u;
    case FormulaNode::Kind::Constant:
      return node.value;
    case FormulaNode::Kind::Gate: {
      std::uint32_t idx = 0;
      for (std::size_t j = 0; j < node.children.size(); ++j) {
        if (eval_node(*node.children[j], input)) idx |= std::uint32_t{1} << j;
      }
      return node.gate.table[idx];
    }
  }
  return false;
}

TruthTable table_of(const FormulaNode& node, unsigned n) {
  switch (node.kind) {
    case FormulaNode::Kind::Variable:
      return TruthTable::variable(n, node.var);
    case FormulaNode::Kind::Constant:
      return TruthTable::constant(n, node.value);
    case FormulaNode::Kind::Gate: {
      std::vector<TruthTable> kids;
      kids.reserve(node.children.size());
      for (const auto& c : node.children) kids.push_back(table_of(*c, n));
      TruthTable out(n);
      for (std::uint64_t v = 0; v < out.size(); ++v) {
        std::uint32_t idx = 0;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (kids[j][v]) idx |= std::uint32_t{1} << j;
        }
        if (node.gate.table[idx]) out.set(v, true);
      }
      return out;
    }
  }
  return TruthTable(n);
}

const char* infix_symbol(const BasisFunction& g) {
  if (g.table == gates::conjunction().table) return "&";
  if (g.table == gates::disjunction().table) return "|";
  if (g.table == gates::exclusive_or().table) return "^";
  if (g.table == gates::equivalence().table) return "<=>";
  return nullptr;
}

void render(const FormulaNode& node, std::string& out) {
  switch (node.kind) {
    case FormulaNode::Kind::Variable:
      out += "x" + std::to_string(node.var + 1);
      return;
    case FormulaNode::Kind::Constant:
      out += node.value ? "1" : "0";
      return;
    case FormulaNode::Kind::Gate:
      break;
  }
  if (node.gate.table == gates::negation().table) {
    out += "~";
    render(*node.children[0], out);
    return;
  }
  if (const char* sym = infix_symbol(node.gate)) {
    out += "(";
    render(*node.children[0], out);
    out += std::string(" ") + sym + " ";
    render(*node.children[1], out);
    out += ")";
    return;
  }
  out += "g{" + gates::to_hex(node.gate.table) + "," + std::to_string(node.gate.arity()) + "}(";
  for (std::size_t j = 0; j < node.children.size(); ++j) {
    if (j) out += ",";
    render(*node.children[j], out);
  }
  out += ")";
}

bool gates_in(const FormulaNode& node, const Basis& basis) {
  if (node.kind != FormulaNode::Kind::Gate) {
    if (node.kind == FormulaNode::Kind::Constant) return basis.has_constant(node.value);
    return true;
  }
  if (!basis.contains(node.gate.table)) return false;
  return std::all_of(node.children.begin(), node.children.end(),
                     [&](const FormulaPtr& c) { return gates_in(*c, basis); });
}

unsigned max_arity(const FormulaNode& node) {
  unsigned m = node.kind == FormulaNode::Kind::Gate ? node.gate.arity() : 0;
  for (const auto& c : node.children) m = std::max(m, max_arity(*c));
  return m;
}

}  // namespace

ReadOnceFormula::ReadOnceFormula(unsigned n, FormulaPtr root) : n_(n), root_(std::move(root)) {
  if (!root_) throw Error("formula without a root");
  leaves_ = collect_leaves(*root_, n_);
}

ReadOnceFormula ReadOnceFormula::variable(unsigned n, VarIndex i) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaNode::Kind::Variable;
  node->var = i;
  return ReadOnceFormula(n, node);
}

ReadOnceFormula ReadOnceFormula::constant(unsigned n, bool b) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaNode::Kind::Constant;
  node->value = b;
  return ReadOnceFormula(n, node);
}

ReadOnceFormula ReadOnceFormula::apply(const BasisFunction& gate, const std::vector<ReadOnceFormula>& args) {
  if (gate.arity() == 0) {
    return constant(args.empty() ? 0 : args.front().arity(), gate.table[0]);
  }
  if (args.empty()) throw ArityError("gate applied to no arguments");
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaNode::Kind::Gate;
  node->gate = gate;
  for (const auto& a : args) {
    if (a.arity() != args.front().arity()) throw ArityError("subformulas disagree on arity");
    node->children.push_back(a.root_ptr());
  }
  return ReadOnceFormula(args.front().arity(), node);
}

bool ReadOnceFormula::eval(const TotalAssignment& a) const {
  if (a.arity() != n_) throw ArityError("assignment arity does not match formula");
  return eval_node(*root_, a.index());
}

TruthTable ReadOnceFormula::truth_table() const { return table_of(*root_, n_); }

bool ReadOnceFormula::over_basis(const Basis& basis) const { return gates_in(*root_, basis); }

unsigned ReadOnceFormula::max_gate_arity() const { return max_arity(*root_); }

std::string ReadOnceFormula::to_string() const {
  std::string out;
  render(*root_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, unsigned n, const Basis* basis)
      : text_(text), n_(n), basis_(basis) {}

  ReadOnceFormula parse() {
    FormulaPtr root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return ReadOnceFormula(n_, root);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }

  unsigned number() {
    skip_ws();
    std::size_t start = pos_;
    unsigned v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(text_[pos_++] - '0');
    }
    if (pos_ == start) fail("expected a number");
    return v;
  }

  FormulaPtr gate_node(const BasisFunction& gate, std::vector<FormulaPtr> kids) {
    if (basis_ && !basis_->contains(gate.table)) fail("gate " + gate.name + " is not in basis " + basis_->name());
    if (kids.size() != gate.arity()) {
      throw ArityError("gate " + gate.name + " of arity " + std::to_string(gate.arity()) + " applied to " +
                       std::to_string(kids.size()) + " arguments");
    }
    auto node = std::make_shared<FormulaNode>();
    node->kind = FormulaNode::Kind::Gate;
    node->gate = gate;
    node->children = std::move(kids);
    return node;
  }

  FormulaPtr constant_node(bool b) {
    if (basis_ && !basis_->has_constant(b)) fail(std::string("constant ") + (b ? "1" : "0") + " is not in basis");
    auto node = std::make_shared<FormulaNode>();
    node->kind = FormulaNode::Kind::Constant;
    node->value = b;
    return node;
  }

  std::vector<FormulaPtr> arguments() {
    expect("(");
    std::vector<FormulaPtr> kids{expr()};
    while (consume(",")) kids.push_back(expr());
    expect(")");
    return kids;
  }

  FormulaPtr fold(const BasisFunction& gate, std::vector<FormulaPtr> kids) {
    if (kids.size() < 2) fail(gate.name + " needs at least two arguments");
    FormulaPtr acc = gate_node(gate, {kids[0], kids[1]});
    for (std::size_t j = 2; j < kids.size(); ++j) acc = gate_node(gate, {acc, kids[j]});
    return acc;
  }

  FormulaPtr named(const std::string& name) {
    std::string upper = name;
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "AND") return fold(gates::conjunction(), arguments());
    if (upper == "OR") return fold(gates::disjunction(), arguments());
    if (upper == "XOR") return fold(gates::exclusive_or(), arguments());
    if (upper == "NXOR") {
      // NXOR(a, b, c...) is the complement of the parity of its arguments.
      auto kids = arguments();
      if (kids.size() == 2) return gate_node(gates::equivalence(), kids);
      FormulaPtr acc = fold(gates::exclusive_or(), std::vector<FormulaPtr>(kids.begin(), kids.end() - 1));
      return gate_node(gates::equivalence(), {acc, kids.back()});
    }
    if (upper == "NOT") return gate_node(gates::negation(), arguments());
    if (basis_) {
      for (const auto& g : basis_->generators()) {
        if (g.name == name) return gate_node(g, arguments());
      }
    }
    fail("unknown gate '" + name + "'");
  }

  FormulaPtr expr() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return gate_node(gates::negation(), {expr()});
    }
    if (c == '(') {
      ++pos_;
      FormulaPtr lhs = expr();
      if (consume(")")) return lhs;
      const BasisFunction* op = nullptr;
      static const BasisFunction kNxor = gates::equivalence();
      static const BasisFunction kAnd = gates::conjunction();
      static const BasisFunction kOr = gates::disjunction();
      static const BasisFunction kXor = gates::exclusive_or();
      if (consume("<=>")) {
        op = &kNxor;
      } else if (consume("&")) {
        op = &kAnd;
      } else if (consume("|")) {
        op = &kOr;
      } else if (consume("^")) {
        op = &kXor;
      } else {
        fail("expected a binary operator");
      }
      FormulaPtr rhs = expr();
      if (!consume(")")) fail("binary operators need explicit parentheses");
      return gate_node(*op, {lhs, rhs});
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return constant_node(c == '1');
    }
    if (c == 'x' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      unsigned k = number();
      if (k == 0) fail("variables are numbered from x1");
      if (k > n_) throw ArityError("variable x" + std::to_string(k) + " exceeds arity " + std::to_string(n_));
      auto node = std::make_shared<FormulaNode>();
      node->kind = FormulaNode::Kind::Variable;
      node->var = k - 1;
      return node;
    }
    if (c == 'g' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '{') {
      pos_ += 2;
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view hex = text_.substr(start, pos_ - start);
      expect(",");
      unsigned arity = number();
      expect("}");
      return gate_node(gates::from_hex(hex, arity), arguments());
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-')) {
        ++pos_;
      }
      return named(std::string(text_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  unsigned n_;
  const Basis* basis_;
};

}  // namespace

ReadOnceFormula parse_formula(std::string_view text, unsigned n, const Basis* basis) {
  return FormulaParser(text, n, basis).parse();
}

}  // namespace roql
