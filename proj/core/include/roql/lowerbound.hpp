#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "roql/formula.hpp"
#include "roql/oracle.hpp"
#include "roql/truth_table.hpp"

namespace roql {

using Rational = boost::rational<long long>;

/// f(x) = 1 iff sum of weights[i] * x_{i+1} >= threshold, compared exactly.
struct ThresholdFunction {
  std::vector<Rational> weights;
  Rational threshold;

  unsigned arity() const { return static_cast<unsigned>(weights.size()); }
  bool eval(std::uint32_t input) const;
  TruthTable truth_table() const;
  /// Single-gate formula computing this function.
  ReadOnceFormula formula() const;
  std::string to_string() const;
};

/// Monotone threshold function with random non-negative rational weights and
/// a positive threshold not exceeding the weight sum.
ThresholdFunction random_threshold(unsigned n, std::mt19937_64& rng);

/// The base function (unit weights, threshold k + 1, k = n / 2) and one
/// variant per k-subset S, which differs from the base only on the indicator of S.
struct KnFamily {
  unsigned n = 0;
  unsigned k = 0;
  ThresholdFunction base;
  std::vector<VarMask> subsets;
  std::vector<ThresholdFunction> variants;
  /// tables[0] is the base, tables[1 + s] the variant of subsets[s].
  std::vector<TruthTable> tables;

  std::size_t size() const { return tables.size(); }
};

KnFamily kn_family(unsigned n);

struct TranscriptEntry {
  Query query;
  bool answer = false;
};

/// Answers membership and SI queries as the base function and tracks which
/// family members remain consistent with the answers.
class Adversary {
 public:
  explicit Adversary(const KnFamily& family);

  /// Throws QueryRejected for other kinds, and Error if an answer removes
  /// more than one member.
  Answer answer(const Query& q);

  const KnFamily& family() const { return family_; }
  const std::vector<bool>& alive() const { return alive_; }
  std::size_t alive_count() const;
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  const QueryCounts& counts() const { return counts_; }

 private:
  const KnFamily& family_;
  std::vector<bool> alive_;
  std::vector<TranscriptEntry> transcript_;
  QueryCounts counts_;
};

/// Whether member m of the family gives the same answer as the base to q.
bool agrees_with_base(const KnFamily& family, std::size_t member, const Query& q);

/// Picks the next query from the transcript so far.
using Strategy = std::function<Query(const std::vector<TranscriptEntry>&)>;

/// Membership queries on the weight-k inputs in ascending order.
Strategy exhaustive_k_weight_strategy(const KnFamily& family);
/// Uniform mix of membership queries and SI queries on random subcubes.
Strategy random_strategy(const KnFamily& family, std::uint64_t seed);
/// Membership query splitting the members consistent with the transcript most
/// evenly. `family` must outlive the strategy.
Strategy greedy_strategy(const KnFamily& family);

struct ExperimentResult {
  unsigned n = 0;
  unsigned k = 0;
  std::uint64_t family_variants = 0;
  std::string strategy;
  unsigned budget = 0;
  std::size_t survivors = 0;
  QueryCounts counts;
};

ExperimentResult run_adversary_experiment(const Strategy& strategy, const std::string& name, unsigned n,
                                          unsigned budget);

struct KnIdentification {
  unsigned queries = 0;
  std::size_t identified = 0;
};

/// Identifies member `target` with one equivalence query on the base function.
KnIdentification eq_identifies_kn(const KnFamily& family, std::size_t target);

}  // namespace roql
