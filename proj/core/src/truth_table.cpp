#include "roql/truth_table.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "roql/errors.hpp"

namespace roql {

namespace {

constexpr unsigned kDefaultCap = 16;
constexpr unsigned kHardCap = 26;

unsigned initial_cap() {
  if (const char* env = std::getenv("ROQL_ARITY_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      return static_cast<unsigned>(std::min<long>(v, kHardCap));
    }
  }
  return kDefaultCap;
}

std::atomic<unsigned>& cap_storage() {
  static std::atomic<unsigned> cap{initial_cap()};
  return cap;
}

void check_arity(unsigned n) {
  if (n > arity_cap()) {
    throw ArityError("arity " + std::to_string(n) + " exceeds cap " +
                     std::to_string(arity_cap()));
  }
}

std::size_t word_count(unsigned n) { return n <= 6 ? 1 : (std::size_t{1} << (n - 6)); }

// Scatters the low bits of `pattern` onto the set bits of `mask`.
std::uint32_t deposit(std::uint32_t pattern, VarMask mask) {
  std::uint32_t out = 0;
  for (std::uint32_t bit = 1; mask != 0; bit <<= 1) {
    VarMask lowest = mask & (~mask + 1);
    if (pattern & bit) out |= lowest;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

unsigned arity_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_arity_cap(unsigned cap) {
  cap_storage().store(std::clamp(cap, 1u, kHardCap), std::memory_order_relaxed);
}

std::vector<VarIndex> mask_members(VarMask mask) {
  std::vector<VarIndex> out;
  while (mask != 0) {
    out.push_back(static_cast<VarIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// TotalAssignment

TotalAssignment::TotalAssignment(unsigned n, std::uint32_t bits) : n_(n), bits_(bits) {
  check_arity(n);
  if (n < 32) bits_ &= (std::uint32_t{1} << n) - 1;
}

TotalAssignment TotalAssignment::parse(std::string_view text) {
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint32_t{1} << i;
    } else if (text[i] != '0') {
      throw ParseError("total assignment must be over {0,1}: '" + std::string(text) + "'");
    }
  }
  return TotalAssignment(static_cast<unsigned>(text.size()), bits);
}

TotalAssignment TotalAssignment::with(VarIndex i, bool b) const {
  TotalAssignment out = *this;
  if (b) {
    out.bits_ |= std::uint32_t{1} << i;
  } else {
    out.bits_ &= ~(std::uint32_t{1} << i);
  }
  return out;
}

std::string TotalAssignment::to_string() const {
  std::string s(n_, '0');
  for (unsigned i = 0; i < n_; ++i) {
    if (value(i)) s[i] = '1';
  }
  return s;
}

// ---------------------------------------------------------------------------
// PartialAssignment

PartialAssignment::PartialAssignment(unsigned n) : n_(n) { check_arity(n); }

PartialAssignment::PartialAssignment(unsigned n, VarMask fixed, std::uint32_t values)
    : n_(n), fixed_(fixed), values_(values & fixed) {
  check_arity(n);
  if (n < 32 && (fixed >> n) != 0) {
    throw ArityError("partial assignment fixes a variable beyond its arity");
  }
}

PartialAssignment::PartialAssignment(const TotalAssignment& a)
    : n_(a.arity()),
      fixed_(a.arity() == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << a.arity()) - 1)),
      values_(a.index()) {}

PartialAssignment PartialAssignment::parse(std::string_view text) {
  VarMask fixed = 0;
  std::uint32_t values = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '0':
        fixed |= VarMask{1} << i;
        break;
      case '1':
        fixed |= VarMask{1} << i;
        values |= std::uint32_t{1} << i;
        break;
      case '*':
        break;
      default:
        throw ParseError("partial assignment must be over {0,1,*}: '" + std::string(text) + "'");
    }
  }
  return PartialAssignment(static_cast<unsigned>(text.size()), fixed, values);
}

VarMask PartialAssignment::stars() const {
  VarMask all = n_ == 0 ? 0 : static_cast<VarMask>((std::uint64_t{1} << n_) - 1);
  return all & ~fixed_;
}

unsigned PartialAssignment::star_count() const {
  return static_cast<unsigned>(std::popcount(stars()));
}

PartialAssignment PartialAssignment::with(VarIndex i, bool b) const {
  PartialAssignment out = *this;
  out.fixed_ |= VarMask{1} << i;
  if (b) {
    out.values_ |= std::uint32_t{1} << i;
  } else {
    out.values_ &= ~(std::uint32_t{1} << i);
  }
  return out;
}

PartialAssignment PartialAssignment::with_star(VarIndex i) const {
  PartialAssignment out = *this;
  out.fixed_ &= ~(VarMask{1} << i);
  out.values_ &= ~(std::uint32_t{1} << i);
  return out;
}

TotalAssignment PartialAssignment::zero_extension() const { return TotalAssignment(n_, values_); }

bool PartialAssignment::extended_by(const TotalAssignment& a) const {
  return a.arity() == n_ && (a.index() & fixed_) == values_;
}

std::string PartialAssignment::to_string() const {
  std::string s(n_, '*');
  for (unsigned i = 0; i < n_; ++i) {
    if (!is_star(i)) s[i] = value(i) ? '1' : '0';
  }
  return s;
}

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable() : words_(1, 0) {}

TruthTable::TruthTable(unsigned n) : n_(n) {
  check_arity(n);
  words_.assign(word_count(n), 0);
}

TruthTable TruthTable::constant(unsigned n, bool b) {
  TruthTable t(n);
  if (b) {
    std::fill(t.words_.begin(), t.words_.end(), ~std::uint64_t{0});
    t.mask_tail();
  }
  return t;
}

TruthTable TruthTable::variable(unsigned n, VarIndex i) {
  if (i >= n) throw ArityError("variable index out of range");
  TruthTable t(n);
  for (std::uint64_t v = 0; v < t.size(); ++v) {
    if ((v >> i) & 1u) t.set(v, true);
  }
  return t;
}

TruthTable TruthTable::from_u64(unsigned n, std::uint64_t mask) {
  if (n > 6) throw ArityError("from_u64 requires arity <= 6");
  TruthTable t(n);
  t.words_[0] = mask;
  t.mask_tail();
  return t;
}

TruthTable TruthTable::from_bits(std::string_view bits) {
  if (bits.empty() || !std::has_single_bit(bits.size())) {
    throw ParseError("truth table length must be a power of two");
  }
  TruthTable t(static_cast<unsigned>(std::countr_zero(bits.size())));
  for (std::size_t v = 0; v < bits.size(); ++v) {
    if (bits[v] == '1') {
      t.set(v, true);
    } else if (bits[v] != '0') {
      throw ParseError("truth table characters must be '0' or '1'");
    }
  }
  return t;
}

TruthTable TruthTable::tabulate(unsigned n, const std::function<bool(std::uint32_t)>& fn) {
  TruthTable t(n);
  for (std::uint64_t v = 0; v < t.size(); ++v) {
    if (fn(static_cast<std::uint32_t>(v))) t.set(v, true);
  }
  return t;
}

TruthTable TruthTable::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  std::string bits;
  in >> header >> bits;
  if (header.rfind("n=", 0) != 0) throw ParseError("truth table must start with 'n=<k>'");
  unsigned n = 0;
  try {
    n = static_cast<unsigned>(std::stoul(header.substr(2)));
  } catch (const std::exception&) {
    throw ParseError("bad arity in truth table header '" + header + "'");
  }
  check_arity(n);
  if (bits.size() != (std::size_t{1} << n)) {
    throw ParseError("truth table of arity " + std::to_string(n) + " needs " +
                     std::to_string(std::size_t{1} << n) + " values");
  }
  return from_bits(bits);
}

std::string TruthTable::to_bits() const {
  std::string s(size(), '0');
  for (std::uint64_t v = 0; v < size(); ++v) {
    if ((*this)[v]) s[v] = '1';
  }
  return s;
}

std::string TruthTable::to_text() const { return "n=" + std::to_string(n_) + "\n" + to_bits(); }

bool TruthTable::operator()(const TotalAssignment& a) const {
  if (a.arity() != n_) throw ArityError("assignment arity does not match truth table");
  return (*this)[a.index()];
}

void TruthTable::set(std::uint64_t index, bool b) {
  std::uint64_t bit = std::uint64_t{1} << (index & 63);
  if (b) {
    words_[index >> 6] |= bit;
  } else {
    words_[index >> 6] &= ~bit;
  }
}

std::uint64_t TruthTable::to_u64() const {
  if (n_ > 6) throw ArityError("to_u64 requires arity <= 6");
  return words_[0];
}

std::uint64_t TruthTable::count_ones() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool TruthTable::parity() const { return count_ones() & 1u; }

void TruthTable::mask_tail() {
  if (n_ < 6) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n_)) - 1;
}

TruthTable TruthTable::operator~() const {
  TruthTable t = *this;
  for (auto& w : t.words_) w = ~w;
  t.mask_tail();
  return t;
}

TruthTable TruthTable::operator&(const TruthTable& o) const {
  if (n_ != o.n_) throw ArityError("truth table arity mismatch");
  TruthTable t = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) t.words_[k] &= o.words_[k];
  return t;
}

TruthTable TruthTable::operator|(const TruthTable& o) const {
  if (n_ != o.n_) throw ArityError("truth table arity mismatch");
  TruthTable t = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) t.words_[k] |= o.words_[k];
  return t;
}

TruthTable TruthTable::operator^(const TruthTable& o) const {
  if (n_ != o.n_) throw ArityError("truth table arity mismatch");
  TruthTable t = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) t.words_[k] ^= o.words_[k];
  return t;
}

std::size_t TruthTable::hash() const {
  std::size_t h = std::hash<unsigned>{}(n_);
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// ---------------------------------------------------------------------------
// Operations

std::uint32_t extension_index(const PartialAssignment& p, std::uint32_t pattern) {
  return p.values() | deposit(pattern, p.stars());
}

TruthTable project(const TruthTable& f, const PartialAssignment& p) {
  if (f.arity() != p.arity()) {
    throw ArityError("project: table arity " + std::to_string(f.arity()) +
                     " vs assignment arity " + std::to_string(p.arity()));
  }
  TruthTable out(p.star_count());
  for (std::uint64_t y = 0; y < out.size(); ++y) {
    if (f[extension_index(p, static_cast<std::uint32_t>(y))]) out.set(y, true);
  }
  return out;
}

std::vector<TotalAssignment> total_extensions(const PartialAssignment& p) {
  std::vector<TotalAssignment> out;
  const std::uint64_t count = std::uint64_t{1} << p.star_count();
  out.reserve(count);
  for (std::uint64_t y = 0; y < count; ++y) {
    out.emplace_back(p.arity(), extension_index(p, static_cast<std::uint32_t>(y)));
  }
  return out;
}

bool depends_on(const TruthTable& f, VarIndex i) {
  if (i >= f.arity()) return false;
  const std::uint64_t bit = std::uint64_t{1} << i;
  for (std::uint64_t v = 0; v < f.size(); ++v) {
    if (!(v & bit) && f[v] != f[v | bit]) return true;
  }
  return false;
}

VarMask essential_mask(const TruthTable& f) {
  VarMask m = 0;
  for (VarIndex i = 0; i < f.arity(); ++i) {
    if (depends_on(f, i)) m |= VarMask{1} << i;
  }
  return m;
}

std::vector<VarIndex> essential_vars(const TruthTable& f) { return mask_members(essential_mask(f)); }

std::optional<bool> is_constant(const TruthTable& f) {
  const auto ones = f.count_ones();
  if (ones == 0) return false;
  if (ones == f.size()) return true;
  return std::nullopt;
}

}  // namespace roql
