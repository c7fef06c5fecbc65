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

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "devdet/arena.hpp"
#include "devdet/epistemic.hpp"
#include "devdet/exposure.hpp"
#include "devdet/solver.hpp"
#include "devdet/verifier.hpp"

namespace devdet {

struct SynthesisOptions {
  int deadline = 0;       // fixed deadline; 0 selects iterative deepening
  int max_deadline = 8;   // last deadline tried when deepening
  std::size_t cap = kDefaultPositionCap;
  int verbosity = 0;
  std::ostream* log = nullptr;

  // Before the full game, look for a losing game in which Nature may corrupt
  // only one or two candidates, only in the first refute_horizon rounds (pairs
  // are also tried without that limit), and deviators afterwards mimic actions
  // of honest copies of themselves.
  bool refute = true;
  int refute_horizon = 1;
  std::size_t refute_budget = 200'000;  // expansions per restriction
};

/// A weakening of Nature under which the coalition already loses.
struct Refutation {
  std::vector<PlayerId> candidates;
  int horizon = 0;  // 0: first corruption at any round
  std::size_t expansions = 0;
};

struct Certificate {
  AbstractArena arena;
  GameSolution solution;
};

struct Solution {
  StrategyProfile profile;
  Certificate certificate;
};

enum class SynthesisStatus { Solved, Unrealizable, NotStateMonitored };
const char* to_string(SynthesisStatus s);

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::Unrealizable;
  int deadline = 0;  // deadline of the solution, or the last one tried
  std::optional<Solution> solution;
  std::optional<StateMonitoringCounterexample> counterexample;
  std::optional<Refutation> refutation;
};

/// Deadlines tried by iterative deepening: 1, 2, 4, ... and finally max_deadline.
std::vector<int> deadline_schedule(const SynthesisOptions& opts);

/// Searches restricted games (single candidates, then pairs) at the largest
/// scheduled deadline, round-robin with a growing expansion budget. A
/// structure is lost once two worlds with distinct deviators look alike to
/// every other player, since each deviator can copy the other world forever.
std::optional<Refutation> find_refutation(const RevelationGame& rev, const SynthesisOptions& opts);

/// Throws Explosion when the abstraction exceeds the position cap, and
/// InvalidArgument for monitors with a pending set.
SynthesisResult synthesize(const Arena& arena, const MonitorAutomaton& mon,
                           const SynthesisOptions& opts = {});

/// Solves an already built abstraction; nullopt when the initial structure
/// is losing.
std::optional<Certificate> solve_abstract(const RevelationGame& rev, AbstractArena arena);

/// One machine per player whose memory is (structure, own class).
/// Throws NonUniqueSuccessor if an observation leads to two places.
StrategyProfile distribute(const Certificate& cert, const RevelationGame& rev);

VerifierReport certify(const Arena& arena, const MonitorAutomaton& mon, const Solution& sol,
                       std::size_t cap = kDefaultProductCap);

}  // namespace devdet
