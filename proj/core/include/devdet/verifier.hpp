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

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "devdet/arena.hpp"

namespace devdet {

/// One hypothesis about the actual play: no deviation yet, or a unilateral
/// deviation by `deviator`. The deviator's memory is dropped (-1) since her
/// later actions are arbitrary.
struct WorldNode {
  PlayerId deviator = -1;
  StateId gstate = 0;
  std::vector<int> memories;

  bool silent() const { return deviator < 0; }
  auto operator<=>(const WorldNode&) const = default;
};

/// Worlds connected under the players' relations, minimal up to bisimulation.
/// A player's relation never links a world in which she is the deviator.
struct KnowledgeState {
  std::vector<WorldNode> worlds;
  std::vector<std::vector<int>> classes;  // [player][world]

  bool related(PlayerId i, int a, int b) const { return classes[i][a] == classes[i][b]; }
  auto operator<=>(const KnowledgeState&) const = default;
};

/// Whether the players other than the deviator of world `actual` commonly
/// know that this deviator deviated.
bool common_knowledge_of_deviation(const KnowledgeState& k, int actual);

inline constexpr std::size_t kDefaultProductCap = 1'000'000;

/// Reachable product of actual world and knowledge state.
struct Product {
  struct Edge {
    int target = 0;
    Profile realized;
  };
  struct Node {
    int knowledge = 0;
    int actual = 0;
    bool ck = false;
    std::vector<Edge> edges;
  };
  std::vector<KnowledgeState> knowledge;
  std::vector<Node> nodes;

  const WorldNode& world(int node) const {
    return knowledge[nodes[node].knowledge].worlds[nodes[node].actual];
  }
};

/// Throws Explosion above cap product nodes.
Product build_product(const Arena& arena, const StrategyProfile& s,
                      std::size_t cap = kDefaultProductCap);

struct WitnessStep {
  StateId gstate = 0;
  PlayerId deviator = -1;
  std::vector<int> memories;
  Profile realized;  // profile played from this step to the next
};

enum class AccusationFault { Premature, False, Uncoordinated, Missing };
const char* to_string(AccusationFault f);

struct OutcomeResult {
  bool pass = false;
  Lasso outcome;
};

struct DetectionResult {
  bool pass = false;
  std::vector<WitnessStep> witness;  // a cycle avoiding common knowledge
  int max_delay = 0;                 // rounds from deviation to common knowledge
};

struct AccusationResult {
  bool pass = false;
  std::optional<AccusationFault> fault;
  PlayerId accuser = -1;
  PlayerId accused = -1;
  std::vector<WitnessStep> witness;  // path to the fault, or a cycle for Missing
  int max_delay = 0;                 // rounds from deviation to consensus
};

struct VerifierReport {
  OutcomeResult outcome;
  DetectionResult detection;
  AccusationResult accusations;
  std::size_t product_size = 0;

  bool pass() const { return outcome.pass && detection.pass && accusations.pass; }
};

OutcomeResult check_outcome(const Arena& arena, const MonitorAutomaton& mon,
                            const StrategyProfile& s);

DetectionResult check_detection(const Arena& arena, const Product& product);
DetectionResult check_detection(const Arena& arena, const StrategyProfile& s,
                                std::size_t cap = kDefaultProductCap);

/// Accusations are read as joint exposure: the first round in which some
/// non-deviating player accuses ends the deviation thread, and is correct
/// only when every non-deviating player accuses the actual deviator.
/// Every deviation must end that way.
AccusationResult check_accusations(const Arena& arena, const StrategyProfile& s,
                                   const Product& product);
AccusationResult check_accusations(const Arena& arena, const StrategyProfile& s,
                                   std::size_t cap = kDefaultProductCap);

/// Validates the profile (throws InvalidArgument on structural problems,
/// including coalitions of fewer than two players) and runs every check.
VerifierReport verify(const Arena& arena, const MonitorAutomaton& mon, const StrategyProfile& s,
                      std::size_t cap = kDefaultProductCap);

}  // namespace devdet
