#include <benchmark/benchmark.h>

#include <random>

#include "elimvote/constructions.hpp"
#include "elimvote/manipulation.hpp"
#include "elimvote/random.hpp"

namespace {

using namespace elimvote;

Profile bench_profile(int m, Weight weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_profile(rng, m, weight);
}

void BM_EliminateVeto(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Profile profile = bench_profile(m, 200, 17);
  const TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_eliminate(RuleFamily::veto(), profile, policy).winner);
  }
}
BENCHMARK(BM_EliminateVeto)->Arg(8)->Arg(16)->Arg(32);

void BM_DivideBorda(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Profile profile = bench_profile(m, 200, 18);
  const TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_divide(RuleFamily::borda(), profile, policy).winner);
  }
}
BENCHMARK(BM_DivideBorda)->Arg(8)->Arg(16)->Arg(32);

void BM_SequentialPlurality(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Profile profile = bench_profile(m, 100, 19);
  const TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_sequential(RuleFamily::plurality(), profile, policy).winner);
  }
}
BENCHMARK(BM_SequentialPlurality)->Arg(8)->Arg(16);

void BM_BruteManipulation(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  ManipulationQuery query;
  query.rule = RuleSpec::parse("eliminate:veto");
  query.profile = bench_profile(m, 7, 20);
  query.preferred = 0;
  query.manipulators = 1;
  query.policy = TieBreakPolicy::roster_order(query.profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_manipulation_brute(query).decision);
  }
}
BENCHMARK(BM_BruteManipulation)->Arg(4)->Arg(5)->Arg(6);

void BM_FrontierManipulation(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Profile profile = bench_profile(m, 7, 20);
  const TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        find_manipulation_frontier(FrontierVariant::EliminateVeto, profile, 0,
                                   policy)
            .decision);
  }
}
BENCHMARK(BM_FrontierManipulation)->Arg(4)->Arg(5)->Arg(6);

void BM_BuildReduction(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  CoverInstance instance;
  instance.n = 3 * m;
  for (int i = 1; i <= m; ++i) {
    instance.sets.push_back({3 * i - 2, 3 * i - 1, 3 * i});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_veto_reduction(instance).profile.ballots.size());
  }
}
BENCHMARK(BM_BuildReduction)->Arg(1)->Arg(2)->Arg(4);

void BM_ReductionTrace(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  CoverInstance instance;
  instance.n = 3 * m;
  for (int i = 1; i <= m; ++i) {
    instance.sets.push_back({3 * i - 2, 3 * i - 1, 3 * i});
  }
  const ReductionOutput red = build_veto_reduction(instance);
  Profile swayed = red.profile;
  swayed.ballots.push_back(
      cover_to_ballot(red, *cover_oracle(red.instance)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_eliminate(RuleFamily::veto(), swayed, red.policy).winner);
  }
}
BENCHMARK(BM_ReductionTrace)->Arg(1)->Arg(2)->Arg(4);

void BM_CoombsTrace(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Profile profile = bench_profile(m, 200, 21);
  const TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_coombs(profile, policy).winner);
  }
}
BENCHMARK(BM_CoombsTrace)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
