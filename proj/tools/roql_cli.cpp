// roql: batch driver for the learners, checking tests and the adversary harness.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "roql/checking.hpp"
#include "roql/errors.hpp"
#include "roql/learner.hpp"
#include "roql/lowerbound.hpp"

using namespace roql;
using Json = nlohmann::ordered_json;

namespace {

// Exit statuses shared by the subcommands.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInconsistent = 2;
constexpr int kPromiseViolation = 3;
constexpr int kUsage = 64;

struct Common {
  std::string output;
  bool json = false;
  unsigned jobs = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  cmd->add_flag("--json", c.json, "JSON report instead of TSV");
  cmd->add_option("-j,--jobs", c.jobs, "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--seed", c.seed, "Seed for sampled targets and random strategies");
}

/// "4" or "2..5".
std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      unsigned n = static_cast<unsigned>(std::stoul(text));
      return {n, n};
    }
    unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
    unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
    if (lo > hi) throw ParseError("empty arity range " + text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ParseError("bad arity range '" + text + "'");
  }
}

void add_counts(Json& row, const QueryCounts& c) {
  for (std::size_t k = 0; k < kQueryKindCount; ++k) row[kind_name(static_cast<QueryKind>(k))] = c.by_kind[k];
}

std::string tsv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}

/// Rows share the key order of the first row.
void emit(const std::vector<Json>& rows, const Common& c) {
  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw Error("cannot write " + c.output);
  }
  std::ostream& out = c.output.empty() ? std::cout : file;
  if (c.json) {
    out << Json(rows).dump(2) << "\n";
    return;
  }
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [key, value] : rows.front().items()) {
    out << (first ? "" : "\t") << key;
    first = false;
  }
  out << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      out << (first ? "" : "\t") << tsv_cell(value);
      first = false;
    }
    out << "\n";
  }
}

/// Runs body(i) for i < count on a thread pool; rows keep index order.
std::vector<Json> parallel_rows(std::size_t count, unsigned jobs, const std::function<Json(std::size_t)>& body) {
  std::vector<Json> rows(count);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        rows[i] = body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(jobs, count); ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

/// Keeps at most `sample` items, chosen by the seed, in their original order.
template <class T>
std::vector<T> subsample(std::vector<T> items, std::size_t sample, std::uint64_t seed) {
  if (sample == 0 || sample >= items.size()) return items;
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(sample);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  for (auto i : idx) out.push_back(items[i]);
  return out;
}

// ---------------------------------------------------------------------------
// learn

struct LearnConfig {
  Common common;
  std::string basis = "b2";
  std::string n = "3";
  std::string mode = "reconstruct";
  bool simulate = false;
  bool generalized_si = false;
  std::string target;
  std::string table;
  std::size_t sample = 0;
};

std::vector<QueryKind> kinds_for(const LearnConfig& c) {
  if (c.mode == "reconstruct") return {QueryKind::Membership};
  if (c.mode == "si-only") return {QueryKind::SubcubeIdentity};
  if (c.simulate) return {QueryKind::Membership, QueryKind::SubcubeIdentity};
  return {QueryKind::Equivalence};
}

/// Learns one target; returns the rendered hypothesis.
std::string learn_one(OracleSession& s, const LearnConfig& c, const Basis& basis, Json* extra) {
  if (c.mode == "reconstruct") return reconstruct_b2(s).to_string();
  if (c.mode == "si-only") {
    MonotoneResult r = learn_monotone_si(s);
    if (extra) (*extra)["fictitious"] = r.fictitious;
    return r.tree.to_string();
  }
  EquivalenceLearnResult r = learn_via_equivalence(s, basis, c.simulate);
  if (extra) (*extra)["rounds"] = r.rounds;
  return r.formula.to_string();
}

TruthTable hypothesis_table(const std::string& text, const LearnConfig& c, unsigned n) {
  if (c.mode == "eq") return parse_formula(text, n).truth_table();
  return parse_canonical(text).truth_table(n);
}

int run_learn(const LearnConfig& c) {
  if (c.mode != "reconstruct" && c.mode != "si-only" && c.mode != "eq") throw ParseError("unknown mode " + c.mode);
  const Basis basis = Basis::from_name(c.basis);
  OracleOptions opts;
  opts.generalized_si = c.generalized_si;

  // Single target: query trace, then the result line.
  if (!c.target.empty() || !c.table.empty()) {
    const auto [n, n_hi] = parse_range(c.n);
    if (n != n_hi) throw ParseError("a single target needs one arity");
    TruthTable f = c.table.empty() ? parse_formula(c.target, n).truth_table() : TruthTable::parse(c.table);
    opts.log = true;
    OracleSession s(f, kinds_for(c), opts);
    try {
      std::string result = learn_one(s, c, basis, nullptr);
      for (const auto& line : s.log()) std::cout << line << "\n";
      std::cout << "RESULT " << result << "\n";
      return kOk;
    } catch (const PromiseViolation& e) {
      for (const auto& line : s.log()) std::cout << line << "\n";
      std::cout << "PROMISE-VIOLATION " << e.what() << "\n";
      return kPromiseViolation;
    }
  }

  // Batch: every target the mode promises to handle.
  const auto [lo, hi] = parse_range(c.n);
  std::vector<std::pair<unsigned, const Candidate*>> targets;
  for (unsigned n = lo; n <= hi; ++n) {
    const CandidateSet& pool = candidates(c.mode == "reconstruct" ? Basis::b2() : basis, n);
    std::vector<const Candidate*> picked;
    if (c.mode == "reconstruct") {
      picked = fully_essential(pool);
    } else {
      for (const auto& cand : pool) {
        if (c.mode == "si-only" && is_constant(cand.table)) continue;
        picked.push_back(&cand);
      }
    }
    for (auto* p : subsample(picked, c.sample, c.common.seed + n)) targets.emplace_back(n, p);
  }
  bool all_ok = true;
  std::vector<Json> rows = parallel_rows(targets.size(), c.common.jobs, [&](std::size_t i) {
    const auto [n, cand] = targets[i];
    OracleSession s(cand->table, kinds_for(c), opts);
    Json row;
    row["n"] = n;
    row["target"] = cand->formula.to_string();
    Json extra;
    std::string result;
    bool ok = false;
    try {
      result = learn_one(s, c, basis, &extra);
      ok = hypothesis_table(result, c, n) == cand->table;
    } catch (const PromiseViolation& e) {
      result = std::string("promise violation: ") + e.what();
    }
    row["result"] = result;
    row["exact"] = ok;
    for (const auto& [k, v] : extra.items()) row[k] = v;
    add_counts(row, s.counts());
    return row;
  });
  for (const auto& r : rows) all_ok = all_ok && r["exact"].get<bool>();
  emit(rows, c.common);
  return all_ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// checktest

struct CheckConfig {
  Common common;
  std::string basis = "b2";
  std::string n = "4";
  unsigned l = 2;
  std::string verify;
  std::string reference;
  std::string write;
};

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int run_checktest(const CheckConfig& c) {
  // Verify a stored test against a reference formula.
  if (!c.verify.empty()) {
    std::ifstream in(c.verify);
    if (!in) throw Error("cannot read " + c.verify);
    std::stringstream text;
    text << in.rdbuf();
    auto [test, basis_name] = CheckingTest::parse(text.str());
    const Basis basis = Basis::from_name(basis_name);
    if (c.reference.empty()) throw ParseError("--verify needs --reference");
    TruthTable f = parse_formula(c.reference, test.arity()).truth_table();
    if (!test.consistent_with(f)) {
      std::cout << "inconsistent\n";
      return kInconsistent;
    }
    const bool unique = verify_checking_test(test, basis, test.arity(), f);
    std::cout << (unique ? "unique" : "ambiguous") << "\t" << consistent_count(test, basis, test.arity()) << "\n";
    return unique ? kOk : kCheckFailed;
  }

  // Write the test for one reference formula.
  const Basis basis = Basis::from_name(c.basis);
  if (!c.reference.empty()) {
    const auto [n, n_hi] = parse_range(c.n);
    if (n != n_hi) throw ParseError("a single reference needs one arity");
    CheckingTest test = hypercube_test(parse_formula(c.reference, n).truth_table(), c.l);
    const std::string text = test.to_text(basis.name());
    if (c.write.empty()) {
      std::cout << text;
    } else {
      std::ofstream(c.write) << text;
    }
    return kOk;
  }

  // Every fully essential target of the basis.
  const auto [lo, hi] = parse_range(c.n);
  std::vector<std::pair<unsigned, const Candidate*>> targets;
  for (unsigned n = lo; n <= hi; ++n) {
    for (auto* cand : fully_essential(candidates(basis, n))) targets.emplace_back(n, cand);
  }
  std::vector<Json> rows = parallel_rows(targets.size(), c.common.jobs, [&](std::size_t i) {
    const auto [n, cand] = targets[i];
    Json row;
    row["n"] = n;
    row["target"] = cand->formula.to_string();
    const bool satisfiable = n <= c.l || is_l_satisfiable(cand->table, c.l);
    row["satisfiable"] = satisfiable;
    if (!satisfiable) {
      row["size"] = 0;
      row["bound"] = binomial(n, c.l) << c.l;
      row["unique"] = false;
      return row;
    }
    CheckingTest test = hypercube_test(cand->table, c.l);
    row["size"] = test.size();
    row["bound"] = n <= c.l ? (std::uint64_t{1} << n) : binomial(n, c.l) << c.l;
    row["unique"] = verify_checking_test(test, basis, n, cand->table);
    return row;
  });
  bool all_ok = true;
  for (const auto& r : rows) {
    all_ok = all_ok && r["unique"].get<bool>() && r["size"].get<std::uint64_t>() <= r["bound"].get<std::uint64_t>();
  }
  emit(rows, c.common);
  return all_ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// adversary

struct AdversaryConfig {
  Common common;
  unsigned n = 4;
  int budget = -1;
  unsigned runs = 1;
  std::string strategy = "random";
};

int run_adversary(const AdversaryConfig& c) {
  const KnFamily family = kn_family(c.n);
  const unsigned budget = c.budget < 0 ? static_cast<unsigned>(family.variants.size() - 1) : static_cast<unsigned>(c.budget);
  std::vector<Json> rows = parallel_rows(c.runs, c.common.jobs, [&](std::size_t run) {
    Strategy strategy;
    if (c.strategy == "random") {
      strategy = random_strategy(family, c.common.seed + run);
    } else if (c.strategy == "greedy") {
      strategy = greedy_strategy(family);
    } else if (c.strategy == "exhaustive") {
      strategy = exhaustive_k_weight_strategy(family);
    } else {
      throw ParseError("unknown strategy " + c.strategy);
    }
    ExperimentResult r = run_adversary_experiment(strategy, c.strategy, c.n, budget);
    Json row;
    row["run"] = run;
    row["n"] = r.n;
    row["k"] = r.k;
    row["C(n,k)"] = r.family_variants;
    row["strategy"] = r.strategy;
    row["budget"] = r.budget;
    row["survivors"] = r.survivors;
    add_counts(row, r.counts);
    return row;
  });
  emit(rows, c.common);
  // Below C(n,k) queries two members must survive.
  if (budget < family.variants.size()) {
    for (const auto& r : rows) {
      if (r["survivors"].get<std::size_t>() < 2) return kCheckFailed;
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateConfig {
  Common common;
  std::string basis = "b2";
  std::string n = "3";
  bool list = false;
};

int run_enumerate(const EnumerateConfig& c) {
  const Basis basis = Basis::from_name(c.basis);
  const auto [lo, hi] = parse_range(c.n);
  std::vector<Json> rows;
  for (unsigned n = lo; n <= hi; ++n) {
    const CandidateSet& pool = candidates(basis, n);
    if (c.list) {
      for (const auto& cand : pool) {
        Json row;
        row["n"] = n;
        row["table"] = cand.table.to_bits();
        row["formula"] = cand.formula.to_string();
        rows.push_back(std::move(row));
      }
      continue;
    }
    Json row;
    row["basis"] = basis.name();
    row["n"] = n;
    row["count"] = pool.size();
    row["fully_essential"] = fully_essential(pool).size();
    std::ostringstream bits;
    bits.precision(4);
    bits << std::fixed << std::log2(static_cast<double>(pool.size()));
    row["log2_count"] = bits.str();
    rows.push_back(std::move(row));
  }
  emit(rows, c.common);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify-canonical

struct CanonicalConfig {
  std::string formula;
  std::string tree;
  unsigned n = 0;
};

int run_verify_canonical(const CanonicalConfig& c) {
  CanonicalTree t;
  if (!c.tree.empty()) {
    t = parse_canonical(c.tree);
  } else if (!c.formula.empty()) {
    t = canonicalize_b2(parse_formula(c.formula, c.n));
    std::cout << t.to_string() << "\n";
  } else {
    throw ParseError("give --formula or --tree");
  }
  auto violations = canonical_violations(t);
  for (const auto& v : violations) std::cout << "violation\t" << v << "\n";
  return violations.empty() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query learning of read-once Boolean functions"};
  app.require_subcommand(1);

  LearnConfig learn;
  auto* learn_cmd = app.add_subcommand("learn", "Identify targets and report query counts");
  add_common(learn_cmd, learn.common);
  learn_cmd->add_option("--basis", learn.basis, "b2, b<l>, and-or, threshold<l>");
  learn_cmd->add_option("--n", learn.n, "Arity or range lo..hi");
  learn_cmd->add_option("--mode", learn.mode, "reconstruct, si-only or eq");
  learn_cmd->add_flag("--simulate", learn.simulate, "Answer equivalence queries with membership and SI");
  learn_cmd->add_flag("--generalized-si", learn.generalized_si, "SI on a total assignment returns f there");
  learn_cmd->add_option("--target", learn.target, "Single target formula; prints the query trace");
  learn_cmd->add_option("--table", learn.table, "Single target as 'n=<k> <bits>'");
  learn_cmd->add_option("--sample", learn.sample, "Learn this many targets per arity, chosen by --seed");

  CheckConfig check;
  auto* check_cmd = app.add_subcommand("checktest", "Build and verify hypercube checking tests");
  add_common(check_cmd, check.common);
  check_cmd->add_option("--basis", check.basis, "Basis name");
  check_cmd->add_option("--n", check.n, "Arity or range lo..hi");
  check_cmd->add_option("--l", check.l, "Hypercube dimension");
  check_cmd->add_option("--verify", check.verify, "Checking test file to verify");
  check_cmd->add_option("--reference", check.reference, "Reference formula");
  check_cmd->add_option("--write", check.write, "Write the reference's test to this file");

  AdversaryConfig adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Run strategies against the K_n adversary");
  add_common(adv_cmd, adv.common);
  adv_cmd->add_option("--n", adv.n, "Arity (>= 2)");
  adv_cmd->add_option("--budget", adv.budget, "Queries per run (default C(n,k) - 1)");
  adv_cmd->add_option("--runs", adv.runs, "Number of runs");
  adv_cmd->add_option("--strategy", adv.strategy, "random, greedy or exhaustive");

  EnumerateConfig en;
  auto* en_cmd = app.add_subcommand("enumerate", "Count read-once functions over a basis");
  add_common(en_cmd, en.common);
  en_cmd->add_option("--basis", en.basis, "Basis name");
  en_cmd->add_option("--n", en.n, "Arity or range lo..hi");
  en_cmd->add_flag("--list", en.list, "List every function instead of counts");

  CanonicalConfig canon;
  auto* canon_cmd = app.add_subcommand("verify-canonical", "Canonicalize a B2 formula or check a canonical tree");
  canon_cmd->add_option("--formula", canon.formula, "Formula over B2");
  canon_cmd->add_option("--n", canon.n, "Arity of the formula");
  canon_cmd->add_option("--tree", canon.tree, "Canonical tree term, e.g. AND(x1,OR(x2,~x3)); child order is normalized on parse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*learn_cmd) return run_learn(learn);
    if (*check_cmd) return run_checktest(check);
    if (*adv_cmd) return run_adversary(adv);
    if (*en_cmd) return run_enumerate(en);
    if (*canon_cmd) return run_verify_canonical(canon);
  } catch (const PromiseViolation& e) {
    std::cerr << "promise violation: " << e.what() << "\n";
    return kPromiseViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
