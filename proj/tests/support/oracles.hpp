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

#include <optional>
#include <string>

#include "devdet/epistemic.hpp"
#include "devdet/exposure.hpp"
#include "devdet/solver.hpp"
#include "devdet/verifier.hpp"
#include "support/corpus.hpp"

namespace devdet::testing {

// Depth-bounded minimax over the game tree, memoized on (position, depth).
PositionSet minimax_safety(const PIArena& arena, const PositionSet& safe);
PositionSet minimax_reach_and_safe(const PIArena& arena, const PositionSet& reach,
                                   const PositionSet& safe);

// Checks that the positional strategy keeps every play from a winning position
// winning: all positions safe and, for reachability, R visited on every play.
bool strategy_keeps_safe(const PIArena& arena, const PositionSet& safe, const GameSolution& sol);
bool strategy_reaches(const PIArena& arena, const PositionSet& reach, const PositionSet& safe,
                      const GameSolution& sol);

// Random walk through the abstract game. After every expansion the successor
// structures are compared with the bisimulation quotient of the concrete
// histories, whose indistinguishability, revelation and ages are recomputed
// from observation traces. Returns a description of the first mismatch.
std::optional<std::string> knowledge_walk(const RevelationGame& rev, Rng& rng, int steps,
                                          int deadline);

// Enumerates every history with at most one deviator up to `horizon` rounds,
// follows it through the product and compares the product's common-knowledge
// flag with chain closure over all histories of the same length.
std::optional<std::string> literal_ck_check(const Arena& arena, const StrategyProfile& s,
                                            const Product& product, int horizon);

// Exhaustive search of (exposure state, coalition memories, base monitor
// state) against every Nature behaviour. Winning plays reach WIN, or stay
// silent and are accepted by the base monitor.
bool exposure_oracle(const ExposureGame& game, const MonitorAutomaton& base_monitor,
                     const StrategyProfile& coalition);

}  // namespace devdet::testing
