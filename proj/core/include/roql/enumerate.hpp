#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "roql/formula.hpp"
#include "roql/truth_table.hpp"

namespace roql {

struct Candidate {
  TruthTable table;
  ReadOnceFormula formula;
};

/// Every function of arity n computed by some read-once formula over a basis,
/// one representative formula per truth table. Order is deterministic: by
/// leaf count, then by leaf set, then by discovery.
class CandidateSet {
 public:
  CandidateSet(std::string basis_name, unsigned n, std::vector<Candidate> items);

  const std::string& basis_name() const { return basis_name_; }
  unsigned arity() const { return n_; }
  std::size_t size() const { return items_.size(); }
  const Candidate& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// Position of the candidate with this table, if any.
  std::optional<std::size_t> find(const TruthTable& t) const;

 private:
  std::string basis_name_;
  unsigned n_ = 0;
  std::vector<Candidate> items_;
  std::unordered_map<TruthTable, std::size_t, TruthTableHash> index_;
};

/// Builds the candidate set from scratch. Intended for n <= 6.
CandidateSet enumerate_read_once(const Basis& basis, unsigned n);

/// Memoized enumerate_read_once keyed by (basis name, n). Thread-safe; the
/// returned reference stays valid for the life of the process.
const CandidateSet& candidates(const Basis& basis, unsigned n);

/// Random read-once formula over B2 whose leaves are exactly `leaves`: a
/// random binary tree over a shuffled leaf order, each inner node a random
/// binary gate depending on both inputs, each leaf negated with probability 1/2.
ReadOnceFormula random_read_once_b2(unsigned n, VarMask leaves, std::mt19937_64& rng);

/// Members of `set` whose every variable is essential.
std::vector<const Candidate*> fully_essential(const CandidateSet& set);

}  // namespace roql
