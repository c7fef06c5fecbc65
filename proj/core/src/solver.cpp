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

#include "devdet/solver.hpp"

#include <deque>

namespace devdet {

int PIArena::add_position(Owner owner) {
  owner_.push_back(owner);
  moves_.emplace_back();
  return size() - 1;
}

void PIArena::add_move(int from, int to) { moves_[from].push_back(to); }

int PIArena::complete() {
  std::vector<int> dead;
  for (int p = 0; p < size(); ++p)
    if (moves_[p].empty()) dead.push_back(p);
  if (dead.empty()) return -1;
  if (sink_ < 0) {
    sink_ = add_position(Owner::Adversary);
    add_move(sink_, sink_);
  }
  for (int p : dead) add_move(p, sink_);
  return sink_;
}

namespace {

bool member(const PositionSet& s, int p) {
  return static_cast<std::size_t>(p) < s.size() && s[p];
}

std::vector<std::vector<int>> predecessors(const PIArena& arena) {
  std::vector<std::vector<int>> pred(arena.size());
  for (int p = 0; p < arena.size(); ++p)
    for (int q : arena.moves(p)) pred[q].push_back(p);
  return pred;
}

// Least-indexed move of p that lands in `inside`, or -1.
int first_move_into(const PIArena& arena, int p, const PositionSet& inside) {
  const auto& moves = arena.moves(p);
  for (std::size_t k = 0; k < moves.size(); ++k)
    if (inside[moves[k]]) return static_cast<int>(k);
  return -1;
}

}  // namespace

PositionSet cpre(const PIArena& arena, const PositionSet& target) {
  PositionSet out(arena.size(), false);
  for (int p = 0; p < arena.size(); ++p) {
    const auto& moves = arena.moves(p);
    if (moves.empty()) continue;
    bool any = false, all = true;
    for (int q : moves) {
      const bool in = member(target, q);
      any = any || in;
      all = all && in;
    }
    out[p] = arena.owner(p) == Owner::Coalition ? any : all;
  }
  return out;
}

GameSolution solve_safety(const PIArena& arena, const PositionSet& safe) {
  // The complement of the greatest fixpoint is the adversary's attractor to
  // the unsafe positions; computed with successor counters in linear time.
  const int n = arena.size();
  const auto pred = predecessors(arena);
  std::vector<int> remaining(n);
  PositionSet losing(n, false);
  std::deque<int> queue;
  for (int p = 0; p < n; ++p) {
    remaining[p] = static_cast<int>(arena.moves(p).size());
    if (!member(safe, p) || arena.is_sink(p) || remaining[p] == 0) {
      losing[p] = true;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    for (int p : pred[q]) {
      if (losing[p]) continue;
      if (arena.owner(p) == Owner::Adversary || --remaining[p] == 0) {
        losing[p] = true;
        queue.push_back(p);
      }
    }
  }
  GameSolution sol;
  sol.winning.assign(n, false);
  for (int p = 0; p < n; ++p) sol.winning[p] = !losing[p];
  sol.strategy.assign(n, -1);
  for (int p = 0; p < n; ++p)
    if (sol.winning[p] && arena.owner(p) == Owner::Coalition)
      sol.strategy[p] = first_move_into(arena, p, sol.winning);
  return sol;
}

GameSolution solve_reach_and_safe(const PIArena& arena, const PositionSet& reach,
                                  const PositionSet& safe) {
  const int n = arena.size();
  const GameSolution stay = solve_safety(arena, safe);
  const PositionSet& z = stay.winning;

  // Coalition attractor to R & Z inside Z, layer by layer so ranks are exact.
  const auto pred = predecessors(arena);
  std::vector<int> rank(n, -1);
  std::vector<int> remaining(n);
  // Moves leaving Z never count down, so adversary positions that can escape
  // Z are never attracted.
  for (int p = 0; p < n; ++p) remaining[p] = static_cast<int>(arena.moves(p).size());
  std::vector<int> layer;
  for (int p = 0; p < n; ++p)
    if (z[p] && member(reach, p)) {
      rank[p] = 0;
      layer.push_back(p);
    }
  for (int r = 1; !layer.empty(); ++r) {
    std::vector<int> next;
    for (int q : layer)
      for (int p : pred[q]) {
        if (rank[p] >= 0 || !z[p]) continue;
        if (arena.owner(p) == Owner::Coalition || --remaining[p] == 0) {
          rank[p] = r;
          next.push_back(p);
        }
      }
    layer = std::move(next);
  }

  GameSolution sol;
  sol.winning.assign(n, false);
  sol.strategy.assign(n, -1);
  for (int p = 0; p < n; ++p) sol.winning[p] = rank[p] >= 0;
  for (int p = 0; p < n; ++p) {
    if (!z[p] || arena.owner(p) != Owner::Coalition) continue;
    // Once R has been visited, play continues in Z outside the attractor.
    if (rank[p] <= 0) {
      sol.strategy[p] = stay.strategy[p];
      continue;
    }
    const auto& moves = arena.moves(p);
    for (std::size_t k = 0; k < moves.size(); ++k)
      if (rank[moves[k]] >= 0 && rank[moves[k]] < rank[p]) {
        sol.strategy[p] = static_cast<int>(k);
        break;
      }
  }
  return sol;
}

}  // namespace devdet
