#include <benchmark/benchmark.h>

#include <random>

#include "roql/checking.hpp"
#include "roql/learner.hpp"
#include "roql/lowerbound.hpp"

using namespace roql;

namespace {

void BM_EnumerateB2(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const Basis b2 = Basis::b2();
  for (auto _ : state) {
    CandidateSet set = enumerate_read_once(b2, n);
    benchmark::DoNotOptimize(set.size());
  }
}
BENCHMARK(BM_EnumerateB2)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ReconstructB2(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<TruthTable> targets;
  for (int i = 0; i < 64; ++i) targets.push_back(random_read_once_b2(n, (VarMask{1} << n) - 1, rng).truth_table());
  std::size_t next = 0;
  for (auto _ : state) {
    OracleSession s(targets[next++ % targets.size()], {QueryKind::Membership});
    benchmark::DoNotOptimize(reconstruct_b2(s));
  }
}
BENCHMARK(BM_ReconstructB2)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_LearnMonotoneSi(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const auto& pool = candidates(Basis::and_or(), n);
  std::vector<TruthTable> targets;
  for (const auto& c : pool) {
    if (!is_constant(c.table)) targets.push_back(c.table);
  }
  std::size_t next = 0;
  for (auto _ : state) {
    OracleSession s(targets[next++ % targets.size()], {QueryKind::SubcubeIdentity});
    benchmark::DoNotOptimize(learn_monotone_si(s));
  }
}
BENCHMARK(BM_LearnMonotoneSi)->DenseRange(3, 5);

void BM_HypercubeTest(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  std::mt19937_64 rng(9);
  TruthTable f = random_read_once_b2(n, (VarMask{1} << n) - 1, rng).truth_table();
  for (auto _ : state) benchmark::DoNotOptimize(hypercube_test(f, 2));
}
BENCHMARK(BM_HypercubeTest)->Arg(4)->Arg(8)->Arg(12);

void BM_AdversaryGreedy(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const KnFamily family = kn_family(n);
  const auto budget = static_cast<unsigned>(family.variants.size() - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_adversary_experiment(greedy_strategy(family), "greedy", n, budget));
  }
}
BENCHMARK(BM_AdversaryGreedy)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

// The distro ships benchmark_main only as LTO bytecode from another GCC, so the
// entry point lives here.
BENCHMARK_MAIN();
