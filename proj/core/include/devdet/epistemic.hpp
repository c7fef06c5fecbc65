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
#include <functional>
#include <vector>

#include "devdet/arena.hpp"
#include "devdet/exposure.hpp"
#include "devdet/solver.hpp"

namespace devdet {

/// A situation the coalition cannot rule out: which component (candidate
/// deviator) is being played, the monitor state reached, and whether Nature
/// has corrupted the candidate yet.
struct EpistemicNode {
  int component = 0;
  int mon = 0;
  bool silent = true;
  int age = 0;  // rounds since the corruption, capped at the deadline
  bool resolved = false;

  auto operator<=>(const EpistemicNode&) const = default;
};

/// Commonly known knowledge state at a shared global state: nodes plus one
/// equivalence relation per player, stored as class ids numbered by first
/// occurrence in node order.
///
/// A player's relation never links a node in which that player is the
/// corrupted candidate: there the player's information plays no role, so
/// such nodes sit in singleton classes.
///
/// Structures are kept minimal up to bisimulation, with nodes in canonical
/// order, so equal knowledge states compare equal.
struct EpistemicStructure {
  StateId gstate = 0;
  int round = 0;  // rounds played, capped at the corruption horizon (0 if none)
  std::vector<EpistemicNode> nodes;
  std::vector<std::vector<int>> classes;  // [player][node]

  int num_classes(PlayerId i) const;
  bool related(PlayerId i, int a, int b) const { return classes[i][a] == classes[i][b]; }
  std::vector<int> class_members(PlayerId i, int cls) const;

  auto operator<=>(const EpistemicStructure&) const = default;
};

/// The candidate deviator of a node, or -1 while the node is silent.
PlayerId deviator_of(const RevelationGame& rev, const EpistemicNode& node);

EpistemicStructure initial_structure(const RevelationGame& rev);

/// Throws std::logic_error naming the first violated invariant.
void check_structure(const RevelationGame& rev, const EpistemicStructure& u);

/// Coalition actions per (player, class).
struct Assignment {
  std::vector<std::vector<ActionId>> actions;  // [player][class]

  Profile profile_at(const EpistemicStructure& u, int node) const;
  auto operator<=>(const Assignment&) const = default;
};

std::size_t assignment_count(const RevelationGame& rev, const EpistemicStructure& u);

/// Every class-constant assignment, in lexicographic order.
std::vector<Assignment> legal_assignments(const RevelationGame& rev, const EpistemicStructure& u);

/// Classes whose choice cannot matter (every member is a node in which the
/// player is the corrupted candidate) are fixed to action 0; enumeration
/// stops early when visit returns false.
void for_each_reduced_assignment(const RevelationGame& rev, const EpistemicStructure& u,
                                 const std::function<bool(const Assignment&)>& visit);

struct RevealSummary {
  std::vector<bool> revealed;  // per node
  bool single_component = false;  // all nodes share one component index
};

/// A corrupted node of candidate k is revealed when every node reachable from
/// it through the relations of players other than k is a corrupted node of
/// candidate k.
RevealSummary is_revealed(const RevelationGame& rev, const EpistemicStructure& u);

/// One successor node produced by expand, with its provenance.
struct ExpandedChild {
  int parent = 0;
  NatureMove move;
  Profile realized;
  std::vector<ObsId> obs;
  int structure = 0;  // index into Expansion::successors
  int node = 0;       // node index inside that structure
};

struct Expansion {
  std::vector<EpistemicStructure> successors;  // sorted, distinct
  std::vector<ExpandedChild> children;
};

/// One knowledge-update round (deadline 0: untimed). Throws IllegalAssignment when f does not fit u.
Expansion expand(const RevelationGame& rev, const EpistemicStructure& u, const Assignment& f,
                 int deadline);

struct StructureLabels {
  bool silent_safe = true;
  bool silent_accepted = true;
  bool overage = false;
  bool revealed = false;  // no silent node and every node resolved
};

StructureLabels label_structure(const RevelationGame& rev, const EpistemicStructure& u,
                                int deadline);

inline constexpr std::size_t kDefaultPositionCap = 1'000'000;

/// Perfect-information abstraction: coalition positions are knowledge
/// structures, adversary positions are (structure, assignment) pairs.
struct AbstractArena {
  PIArena game;
  int deadline = 1;
  std::vector<EpistemicStructure> structures;
  std::vector<StructureLabels> labels;
  std::vector<bool> expanded;
  std::vector<int> structure_position;

  struct Choice {
    int structure = 0;
    Assignment assignment;
    std::vector<int> successors;  // structure indices
  };
  std::vector<Choice> choices;
  std::vector<int> choice_position;

  /// Per position: structure index (coalition) or choice index (adversary).
  std::vector<int> payload;
};

/// Breadth-first construction to a fixpoint. Deadline 0 builds the untimed
/// abstraction: ages stay 0 and nothing is ever overage. Structures that are revealed or
/// already violate the objective's safety part are left unexpanded.
/// Throws Explosion when the number of positions exceeds cap.
AbstractArena build_abstract_arena(const RevelationGame& rev, int deadline,
                                   std::size_t cap = kDefaultPositionCap);

}  // namespace devdet
