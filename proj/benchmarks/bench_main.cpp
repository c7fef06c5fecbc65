/*
 * Copyright 2026 The devdet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "devdet/beeping.hpp"
#include "devdet/json_io.hpp"
#include "devdet/synthesis.hpp"
#include "support/corpus.hpp"

using namespace devdet;
using namespace devdet::testing;

namespace {

NetworkGraph star(int n) {
  NetworkGraph g{n, {}};
  for (int v = 1; v < n; ++v) g.edges.emplace_back(0, v);
  return g;
}

NetworkGraph cycle(int n) {
  NetworkGraph g{n, {}};
  for (int v = 0; v < n; ++v) g.edges.emplace_back(v, (v + 1) % n);
  return g;
}

PIArena fixed_game(Rng& rng, int n) {
  PIArena g;
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> target(0, n - 1), degree(1, 3);
  for (int p = 0; p < n; ++p) g.add_position(coin(rng) ? Owner::Coalition : Owner::Adversary);
  for (int p = 0; p < n; ++p)
    for (int m = degree(rng); m > 0; --m) g.add_move(p, target(rng));
  return g;
}

void BM_SolveSafety(benchmark::State& state) {
  Rng rng(1);
  const PIArena g = fixed_game(rng, static_cast<int>(state.range(0)));
  const PositionSet safe = random_set(rng, g, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(solve_safety(g, safe));
  state.counters["positions"] = g.size();
}
BENCHMARK(BM_SolveSafety)->Arg(1'000)->Arg(10'000)->Arg(100'000);

void BM_SolveReachAndSafe(benchmark::State& state) {
  Rng rng(2);
  const PIArena g = fixed_game(rng, static_cast<int>(state.range(0)));
  const PositionSet safe = random_set(rng, g, 0.9);
  const PositionSet reach = random_set(rng, g, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_reach_and_safe(g, reach, safe));
}
BENCHMARK(BM_SolveReachAndSafe)->Arg(1'000)->Arg(10'000)->Arg(100'000);

// Corruptions stay unnoticed, so the abstraction grows with the deadline.
void BM_AbstractArena(benchmark::State& state) {
  const Arena a = parse_arena(read_data("match2-noflag.json"));
  const RevelationGame rev = build_revelation_game(a, trivial_monitor(a));
  std::size_t positions = 0;
  for (auto _ : state) {
    const AbstractArena abs = build_abstract_arena(rev, static_cast<int>(state.range(0)));
    positions = abs.game.size();
  }
  state.counters["positions"] = static_cast<double>(positions);
}
BENCHMARK(BM_AbstractArena)->RangeMultiplier(2)->Range(1, 16);

void BM_SynthesizeMatch2(benchmark::State& state) {
  const Arena a = match2();
  const MonitorAutomaton mon = trivial_monitor(a);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(a, mon));
}
BENCHMARK(BM_SynthesizeMatch2);

void BM_RefuteStar(benchmark::State& state) {
  const Arena a = beeping_arena(star(static_cast<int>(state.range(0))));
  const MonitorAutomaton mon = trivial_monitor(a);
  SynthesisOptions opts;
  opts.max_deadline = 6;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(a, mon, opts));
}
BENCHMARK(BM_RefuteStar)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_RefuteCycle(benchmark::State& state) {
  const Arena a = beeping_arena(cycle(static_cast<int>(state.range(0))));
  const MonitorAutomaton mon = trivial_monitor(a);
  SynthesisOptions opts;
  opts.max_deadline = 6;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(a, mon, opts));
}
BENCHMARK(BM_RefuteCycle)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  Rng rng(3);
  const std::vector<Instance> corpus = random_instances(9, 8);
  const Instance& x = corpus[state.range(0)];
  const StrategyProfile s = random_profile(rng, x.arena, 3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(verify(x.arena, x.monitor, s));
  state.counters["players"] = x.arena.num_players();
  state.counters["states"] = x.arena.num_states();
}
BENCHMARK(BM_Verify)->DenseRange(0, 7);

void BM_ExposureWins(benchmark::State& state) {
  Rng rng(4);
  const Arena a = match2();
  const MonitorAutomaton mon = trivial_monitor(a);
  const ExposureGame g = build_exposure_game(a, mon);
  const StrategyProfile s =
      strategy_to_exposure(g.arena, random_profile(rng, a, static_cast<int>(state.range(0)), 0.3))
          .profile;
  for (auto _ : state) benchmark::DoNotOptimize(exposure_wins(g, s));
}
BENCHMARK(BM_ExposureWins)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
