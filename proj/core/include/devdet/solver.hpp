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
#include <vector>

namespace devdet {

enum class Owner { Coalition, Adversary };

/// Two-player turn-based game graph.
class PIArena {
 public:
  int add_position(Owner owner);
  void add_move(int from, int to);

  /// Routes every dead end to a fresh self-looping sink that no objective
  /// contains; returns the sink, or -1 when nothing needed completing.
  int complete();

  int size() const { return static_cast<int>(owner_.size()); }
  Owner owner(int p) const { return owner_[p]; }
  const std::vector<int>& moves(int p) const { return moves_[p]; }
  bool is_sink(int p) const { return p == sink_; }

  int initial = 0;

 private:
  std::vector<Owner> owner_;
  std::vector<std::vector<int>> moves_;
  int sink_ = -1;
};

/// Indicator vector over positions; shorter vectors read as false beyond their end.
using PositionSet = std::vector<bool>;

/// Chosen move index (into moves(p)) per position; -1 where undefined.
using PositionalStrategy = std::vector<int>;

struct GameSolution {
  PositionSet winning;
  PositionalStrategy strategy;
};

/// Coalition positions with some move into Y plus adversary positions with all
/// moves into Y.
PositionSet cpre(const PIArena& arena, const PositionSet& target);

/// Greatest fixpoint of Y -> S & cpre(Y).
GameSolution solve_safety(const PIArena& arena, const PositionSet& safe);

/// Coalition forces: always stay in S, and visit R. The strategy also covers
/// the safe region outside the winning set, where play continues after R.
GameSolution solve_reach_and_safe(const PIArena& arena, const PositionSet& reach,
                                  const PositionSet& safe);

}  // namespace devdet
