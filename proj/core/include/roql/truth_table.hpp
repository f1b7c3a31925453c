#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roql {

/// Zero-based variable index: VarIndex i denotes x_{i+1}.
using VarIndex = unsigned;

/// Bit i set means x_{i+1} belongs to the set.
using VarMask = std::uint32_t;

/// Largest arity accepted by TruthTable. Defaults to 16; the environment
/// variable ROQL_ARITY_CAP overrides it (clamped to [1, 26]).
unsigned arity_cap();

/// Replaces the arity cap for the rest of the process (tests and CLI).
void set_arity_cap(unsigned cap);

class TotalAssignment {
 public:
  TotalAssignment() = default;
  TotalAssignment(unsigned n, std::uint32_t bits);

  /// Parses a string over {0,1}; position i is the value of x_{i+1}.
  static TotalAssignment parse(std::string_view text);

  unsigned arity() const { return n_; }
  /// Integer value of the input, x_{i+1} at bit i. This is the truth table index.
  std::uint32_t index() const { return bits_; }
  bool value(VarIndex i) const { return (bits_ >> i) & 1u; }
  TotalAssignment with(VarIndex i, bool b) const;

  std::string to_string() const;

  friend bool operator==(const TotalAssignment&, const TotalAssignment&) = default;

 private:
  unsigned n_ = 0;
  std::uint32_t bits_ = 0;
};

/// Mapping X -> {0, 1, *}. Variables outside `fixed` are stars.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  /// All-star assignment of arity n.
  explicit PartialAssignment(unsigned n);
  PartialAssignment(unsigned n, VarMask fixed, std::uint32_t values);
  explicit PartialAssignment(const TotalAssignment& a);

  /// Parses a string over {0,1,*}; position i is x_{i+1}.
  static PartialAssignment parse(std::string_view text);

  unsigned arity() const { return n_; }
  VarMask fixed() const { return fixed_; }
  VarMask stars() const;
  /// Values of the fixed variables; star positions are always zero.
  std::uint32_t values() const { return values_; }
  unsigned star_count() const;
  bool is_total() const { return stars() == 0; }
  bool is_star(VarIndex i) const { return !((fixed_ >> i) & 1u); }
  bool value(VarIndex i) const { return (values_ >> i) & 1u; }

  PartialAssignment with(VarIndex i, bool b) const;
  PartialAssignment with_star(VarIndex i) const;

  /// Extension filling every star with zero.
  TotalAssignment zero_extension() const;
  bool extended_by(const TotalAssignment& a) const;

  std::string to_string() const;

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  unsigned n_ = 0;
  VarMask fixed_ = 0;
  std::uint32_t values_ = 0;
};

/// Complete value vector of a Boolean function of n variables, stored as a
/// packed bit vector. Bit v holds f(v) where v is read as an input with
/// x_{i+1} at bit i.
class TruthTable {
 public:
  /// The constant 0 of arity 0.
  TruthTable();
  /// All-zero table of arity n.
  explicit TruthTable(unsigned n);

  static TruthTable constant(unsigned n, bool b);
  static TruthTable variable(unsigned n, VarIndex i);
  /// Table from the low 2^n bits of `mask`; requires n <= 6.
  static TruthTable from_u64(unsigned n, std::uint64_t mask);
  /// Table from a string of 2^n characters '0'/'1' in index order.
  static TruthTable from_bits(std::string_view bits);
  /// Tabulates `fn` over all inputs.
  static TruthTable tabulate(unsigned n, const std::function<bool(std::uint32_t)>& fn);

  /// Parses the text format: "n=<k>" followed by 2^k characters.
  static TruthTable parse(std::string_view text);
  /// Renders the text format (one header line, one bits line).
  std::string to_text() const;
  std::string to_bits() const;

  unsigned arity() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

  bool operator[](std::uint64_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  bool operator()(const TotalAssignment& a) const;
  void set(std::uint64_t index, bool b);

  /// Low 2^n bits; requires n <= 6.
  std::uint64_t to_u64() const;
  std::span<const std::uint64_t> words() const { return words_; }

  std::uint64_t count_ones() const;
  /// XOR of all values.
  bool parity() const;

  TruthTable operator~() const;
  TruthTable operator&(const TruthTable& other) const;
  TruthTable operator|(const TruthTable& other) const;
  TruthTable operator^(const TruthTable& other) const;

  friend bool operator==(const TruthTable& a, const TruthTable& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const TruthTable& a, const TruthTable& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

  std::size_t hash() const;

 private:
  void mask_tail();

  unsigned n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct TruthTableHash {
  std::size_t operator()(const TruthTable& t) const { return t.hash(); }
};

/// Projection f_p: star variables renumbered in ascending original index.
TruthTable project(const TruthTable& f, const PartialAssignment& p);

/// All total extensions of p, ordered by the integer formed from the star
/// values (lowest star is the lowest bit).
std::vector<TotalAssignment> total_extensions(const PartialAssignment& p);

/// Index of the extension of p whose star values are the bits of `pattern`.
std::uint32_t extension_index(const PartialAssignment& p, std::uint32_t pattern);

bool depends_on(const TruthTable& f, VarIndex i);
/// Essential variables of f in ascending order.
std::vector<VarIndex> essential_vars(const TruthTable& f);
VarMask essential_mask(const TruthTable& f);

/// The constant value of f, or nullopt when f is not constant.
std::optional<bool> is_constant(const TruthTable& f);

/// Indices of the set bits of a mask, ascending.
std::vector<VarIndex> mask_members(VarMask mask);

}  // namespace roql
