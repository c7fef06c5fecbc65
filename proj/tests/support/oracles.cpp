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

#include "support/oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace devdet::testing {

namespace {

bool in(const PositionSet& s, int p) { return p < static_cast<int>(s.size()) && s[p]; }

}  // namespace

PositionSet minimax_safety(const PIArena& arena, const PositionSet& safe) {
  const int n = arena.size();
  std::map<std::pair<int, int>, bool> memo;
  std::function<bool(int, int)> survive = [&](int p, int depth) -> bool {
    if (!in(safe, p)) return false;
    if (depth == 0) return true;
    if (auto it = memo.find({p, depth}); it != memo.end()) return it->second;
    const auto& moves = arena.moves(p);
    bool v;
    if (arena.owner(p) == Owner::Coalition)
      v = std::any_of(moves.begin(), moves.end(), [&](int q) { return survive(q, depth - 1); });
    else
      v = std::all_of(moves.begin(), moves.end(), [&](int q) { return survive(q, depth - 1); });
    memo[{p, depth}] = v;
    return v;
  };
  PositionSet out(n);
  for (int p = 0; p < n; ++p) out[p] = survive(p, n + 1);
  return out;
}

PositionSet minimax_reach_and_safe(const PIArena& arena, const PositionSet& reach,
                                   const PositionSet& safe) {
  const int n = arena.size();
  const PositionSet forever = minimax_safety(arena, safe);
  std::map<std::pair<int, int>, bool> memo;
  std::function<bool(int, int)> win = [&](int p, int depth) -> bool {
    if (!in(safe, p)) return false;
    if (in(reach, p) && forever[p]) return true;
    if (depth == 0) return false;
    if (auto it = memo.find({p, depth}); it != memo.end()) return it->second;
    const auto& moves = arena.moves(p);
    bool v;
    if (arena.owner(p) == Owner::Coalition)
      v = std::any_of(moves.begin(), moves.end(), [&](int q) { return win(q, depth - 1); });
    else
      v = std::all_of(moves.begin(), moves.end(), [&](int q) { return win(q, depth - 1); });
    memo[{p, depth}] = v;
    return v;
  };
  PositionSet out(n);
  for (int p = 0; p < n; ++p) out[p] = win(p, n + 1);
  return out;
}

namespace {

// Positions reachable from the winning region when the coalition follows sol.
std::vector<int> strategy_successors(const PIArena& arena, const GameSolution& sol, int p) {
  if (arena.owner(p) == Owner::Adversary) return arena.moves(p);
  const int m = p < static_cast<int>(sol.strategy.size()) ? sol.strategy[p] : -1;
  if (m < 0 || m >= static_cast<int>(arena.moves(p).size())) return {};
  return {arena.moves(p)[m]};
}

std::vector<bool> strategy_reachable(const PIArena& arena, const GameSolution& sol,
                                     bool& stuck) {
  std::vector<bool> seen(arena.size(), false);
  std::vector<int> stack;
  for (int p = 0; p < arena.size(); ++p)
    if (in(sol.winning, p)) {
      seen[p] = true;
      stack.push_back(p);
    }
  stuck = false;
  while (!stack.empty()) {
    const int p = stack.back();
    stack.pop_back();
    const std::vector<int> next = strategy_successors(arena, sol, p);
    if (next.empty()) stuck = true;
    for (int q : next)
      if (!seen[q]) {
        seen[q] = true;
        stack.push_back(q);
      }
  }
  return seen;
}

}  // namespace

bool strategy_keeps_safe(const PIArena& arena, const PositionSet& safe, const GameSolution& sol) {
  bool stuck = false;
  const std::vector<bool> seen = strategy_reachable(arena, sol, stuck);
  if (stuck) return false;
  for (int p = 0; p < arena.size(); ++p)
    if (seen[p] && !in(safe, p)) return false;
  return true;
}

bool strategy_reaches(const PIArena& arena, const PositionSet& reach, const PositionSet& safe,
                      const GameSolution& sol) {
  if (!strategy_keeps_safe(arena, safe, sol)) return false;
  // Positions reachable from the winning region before R is visited.
  std::vector<bool> before(arena.size(), false);
  std::vector<int> stack;
  for (int p = 0; p < arena.size(); ++p)
    if (in(sol.winning, p) && !in(reach, p)) {
      before[p] = true;
      stack.push_back(p);
    }
  while (!stack.empty()) {
    const int p = stack.back();
    stack.pop_back();
    for (int q : strategy_successors(arena, sol, p))
      if (!in(reach, q) && !before[q]) {
        before[q] = true;
        stack.push_back(q);
      }
  }
  // Among those, a cycle would let the adversary avoid R forever.
  std::vector<int> color(arena.size(), 0);
  std::function<bool(int)> cyclic = [&](int p) -> bool {
    color[p] = 1;
    for (int q : strategy_successors(arena, sol, p)) {
      if (!before[q]) continue;
      if (color[q] == 1) return true;
      if (color[q] == 0 && cyclic(q)) return true;
    }
    color[p] = 2;
    return false;
  };
  for (int p = 0; p < arena.size(); ++p)
    if (before[p] && color[p] == 0 && cyclic(p)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Knowledge tracking

namespace {

struct HistoryWorld {
  int component = 0;
  bool deviated = false;
  StateId state = 0;
  int mon = 0;
  int age = 0;
  bool resolved = false;
  std::vector<std::vector<ObsId>> traces;  // [player]
  int node = 0;                            // node of the current structure
};

bool excluded(const RevelationGame& rev, const HistoryWorld& w, PlayerId i) {
  return w.deviated && rev.candidates[w.component] == i;
}

bool indist(const RevelationGame& rev, const std::vector<HistoryWorld>& ws, PlayerId i, int a,
            int b) {
  if (a == b) return true;
  if (excluded(rev, ws[a], i) || excluded(rev, ws[b], i)) return false;
  return ws[a].traces[i] == ws[b].traces[i];
}

std::vector<int> component_ids(const RevelationGame& rev, const std::vector<HistoryWorld>& ws) {
  const int n = rev.base.num_players();
  std::vector<int> comp(ws.size(), -1);
  int next = 0;
  for (int s = 0; s < static_cast<int>(ws.size()); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < static_cast<int>(ws.size()); ++y)
        for (PlayerId i = 0; i < n && comp[y] < 0; ++i)
          if (indist(rev, ws, i, x, y)) {
            comp[y] = next;
            stack.push_back(y);
          }
    }
    ++next;
  }
  return comp;
}

// Common knowledge among everyone but the deviator that the deviator deviated.
bool chain_closed(const RevelationGame& rev, const std::vector<HistoryWorld>& ws, int start) {
  const PlayerId dev = rev.candidates[ws[start].component];
  std::vector<bool> seen(ws.size(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (!ws[x].deviated || rev.candidates[ws[x].component] != dev) return false;
    for (int y = 0; y < static_cast<int>(ws.size()); ++y)
      for (PlayerId j = 0; j < rev.base.num_players(); ++j)
        if (j != dev && !seen[y] && indist(rev, ws, j, x, y)) {
          seen[y] = true;
          stack.push_back(y);
        }
  }
  return true;
}

std::string describe(const HistoryWorld& w) {
  std::ostringstream s;
  s << "{component " << w.component << (w.deviated ? " deviated" : " silent") << " state "
    << w.state << " mon " << w.mon << " age " << w.age << (w.resolved ? " resolved" : "")
    << "}";
  return s.str();
}

// Naive partition refinement on the history model.
std::vector<int> bisimulation_blocks(const RevelationGame& rev,
                                     const std::vector<HistoryWorld>& ws) {
  const int n = rev.base.num_players();
  std::vector<int> color(ws.size());
  {
    std::map<std::tuple<int, bool, int, int, bool>, int> ids;
    for (std::size_t x = 0; x < ws.size(); ++x) {
      auto key = std::tuple{ws[x].component, ws[x].deviated, ws[x].mon, ws[x].age, ws[x].resolved};
      color[x] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
  }
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(ws.size());
    for (std::size_t x = 0; x < ws.size(); ++x) {
      std::vector<int> sig{color[x]};
      for (PlayerId i = 0; i < n; ++i) {
        std::set<int> seen;
        for (std::size_t y = 0; y < ws.size(); ++y)
          if (indist(rev, ws, i, static_cast<int>(x), static_cast<int>(y))) seen.insert(color[y]);
        sig.push_back(-1);
        sig.insert(sig.end(), seen.begin(), seen.end());
      }
      next[x] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    const std::size_t before = std::set<int>(color.begin(), color.end()).size();
    color = next;
    if (ids.size() == before) return color;
  }
}

std::optional<std::string> compare(const RevelationGame& rev, const std::vector<HistoryWorld>& ws,
                                   const EpistemicStructure& u) {
  const int n = rev.base.num_players();
  const std::vector<int> block = bisimulation_blocks(rev, ws);
  const int blocks = *std::max_element(block.begin(), block.end()) + 1;
  if (blocks != static_cast<int>(u.nodes.size()))
    return "structure has " + std::to_string(u.nodes.size()) + " nodes, histories give " +
           std::to_string(blocks) + " bisimulation classes";
  for (std::size_t x = 0; x < ws.size(); ++x) {
    if (ws[x].state != u.gstate) return "global state differs for " + describe(ws[x]);
    const EpistemicNode& node = u.nodes[ws[x].node];
    if (node.component != ws[x].component || node.silent == ws[x].deviated ||
        node.mon != ws[x].mon || node.age != ws[x].age || node.resolved != ws[x].resolved)
      return "node labels differ for history " + describe(ws[x]);
    for (std::size_t y = 0; y < ws.size(); ++y)
      if ((block[x] == block[y]) != (ws[x].node == ws[y].node))
        return "node assignment disagrees with bisimilarity of " + describe(ws[x]) + " and " +
               describe(ws[y]);
  }
  for (PlayerId i = 0; i < n; ++i) {
    std::vector<std::vector<bool>> rel(blocks, std::vector<bool>(blocks, false));
    for (std::size_t x = 0; x < ws.size(); ++x)
      for (std::size_t y = 0; y < ws.size(); ++y)
        if (indist(rev, ws, i, static_cast<int>(x), static_cast<int>(y)))
          rel[block[x]][block[y]] = true;
    for (std::size_t x = 0; x < ws.size(); ++x)
      for (std::size_t y = 0; y < ws.size(); ++y)
        if (rel[block[x]][block[y]] != u.related(i, ws[x].node, ws[y].node))
          return "relation of player " + std::to_string(i) + " differs between " +
                 describe(ws[x]) + " and " + describe(ws[y]);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> knowledge_walk(const RevelationGame& rev, Rng& rng, int steps,
                                          int deadline) {
  const Arena& arena = rev.base;
  const int n = arena.num_players();
  EpistemicStructure u = initial_structure(rev);
  std::vector<HistoryWorld> ws;
  for (int k = 0; k < rev.num_components(); ++k) {
    HistoryWorld w;
    w.component = k;
    w.state = arena.initial();
    w.mon = rev.monitor.initial;
    w.traces.assign(n, {});
    for (int x = 0; x < static_cast<int>(u.nodes.size()); ++x)
      if (u.nodes[x].component == k) w.node = x;
    ws.push_back(w);
  }
  if (auto bad = compare(rev, ws, u)) return "initial structure: " + *bad;

  for (int step = 1; step <= steps; ++step) {
    Assignment f;
    f.actions.resize(n);
    for (PlayerId i = 0; i < n; ++i)
      for (int c = 0; c < u.num_classes(i); ++c)
        f.actions[i].push_back(std::uniform_int_distribution<int>(
            0, static_cast<int>(arena.actions(i).size()) - 1)(rng));
    const Expansion e = expand(rev, u, f, deadline);

    std::vector<HistoryWorld> next;
    std::vector<std::pair<int, int>> placed;  // (successor, node) per new history
    for (const HistoryWorld& w : ws) {
      const PlayerId k = rev.candidates[w.component];
      Profile intended(n);
      for (PlayerId i = 0; i < n; ++i) intended[i] = f.actions[i][u.classes[i][w.node]];
      std::vector<std::pair<bool, ActionId>> moves;  // (deviated afterwards, k's action)
      if (!w.deviated) moves.push_back({false, intended[k]});
      for (ActionId c = 0; c < static_cast<ActionId>(arena.actions(k).size()); ++c)
        if (w.deviated || c != intended[k]) moves.push_back({true, c});
      for (auto [dev, c] : moves) {
        Profile realized = intended;
        realized[k] = c;
        const std::size_t p = arena.profile_index(realized);
        const Transition& t = arena.step(w.state, p);
        HistoryWorld v = w;
        v.deviated = dev;
        v.state = t.target;
        v.mon = rev.monitor.next(w.mon, w.state, p);
        if (dev && !w.deviated) v.age = 0;
        else if (dev && !w.resolved) v.age = std::min(w.age + 1, deadline);
        for (PlayerId i = 0; i < n; ++i) v.traces[i].push_back(t.obs[i]);
        auto it = std::find_if(e.children.begin(), e.children.end(), [&](const ExpandedChild& c) {
          return c.parent == w.node && c.realized == realized && c.move.corrupt == dev;
        });
        if (it == e.children.end())
          return "step " + std::to_string(step) + ": no child for history " + describe(v);
        placed.emplace_back(it->structure, it->node);
        v.node = it->node;
        next.push_back(std::move(v));
      }
    }
    for (std::size_t x = 0; x < next.size(); ++x)
      if (next[x].deviated && !next[x].resolved && chain_closed(rev, next, static_cast<int>(x)))
        next[x].resolved = true;

    const std::vector<int> comp = component_ids(rev, next);
    const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    std::set<int> covered;
    std::vector<std::vector<HistoryWorld>> groups(ncomp);
    std::vector<int> target(ncomp, -1);
    for (std::size_t x = 0; x < next.size(); ++x) {
      const int c = comp[x];
      if (target[c] >= 0 && target[c] != placed[x].first)
        return "step " + std::to_string(step) + ": one component spans several successors";
      target[c] = placed[x].first;
      covered.insert(placed[x].first);
      groups[c].push_back(next[x]);
    }
    if (covered.size() != e.successors.size())
      return "step " + std::to_string(step) + ": successors without histories";
    for (int c = 0; c < ncomp; ++c)
      if (auto bad = compare(rev, groups[c], e.successors[target[c]]))
        return "step " + std::to_string(step) + ": " + *bad;

    const int chosen = std::uniform_int_distribution<int>(0, ncomp - 1)(rng);
    u = e.successors[target[chosen]];
    ws = groups[chosen];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Literal common knowledge

namespace {

struct PlayHistory {
  PlayerId deviator = -1;
  StateId state = 0;
  std::vector<int> memories;
  std::vector<std::vector<ObsId>> traces;
  int node = 0;
};

bool play_indist(const std::vector<PlayHistory>& hs, PlayerId i, int a, int b) {
  if (a == b) return true;
  if (hs[a].deviator == i || hs[b].deviator == i) return false;
  return hs[a].traces[i] == hs[b].traces[i];
}

}  // namespace

std::optional<std::string> literal_ck_check(const Arena& arena, const StrategyProfile& s,
                                            const Product& product, int horizon) {
  const int n = arena.num_players();
  PlayHistory start;
  start.state = arena.initial();
  for (PlayerId i = 0; i < n; ++i) start.memories.push_back(s[i].initial);
  start.traces.assign(n, {});
  std::vector<PlayHistory> level{start};
  for (int t = 0;; ++t) {
    for (int x = 0; x < static_cast<int>(level.size()); ++x) {
      const PlayHistory& h = level[x];
      const WorldNode& w = product.world(h.node);
      if (w.deviator != h.deviator || w.gstate != h.state)
        return "round " + std::to_string(t) + ": product world does not match the history";
      for (PlayerId i = 0; i < n; ++i)
        if (i != h.deviator && w.memories[i] != h.memories[i])
          return "round " + std::to_string(t) + ": memory of player " + std::to_string(i) +
                 " differs";
      bool ck = false;
      if (h.deviator >= 0) {
        ck = true;
        std::vector<bool> seen(level.size(), false);
        std::vector<int> stack{x};
        seen[x] = true;
        while (!stack.empty() && ck) {
          const int y = stack.back();
          stack.pop_back();
          if (level[y].deviator != h.deviator) ck = false;
          for (int z = 0; z < static_cast<int>(level.size()); ++z)
            for (PlayerId j = 0; j < n; ++j)
              if (j != h.deviator && !seen[z] && play_indist(level, j, y, z)) {
                seen[z] = true;
                stack.push_back(z);
              }
        }
      }
      if (ck != product.nodes[h.node].ck)
        return "round " + std::to_string(t) + ": product says " +
               (product.nodes[h.node].ck ? "common knowledge" : "no common knowledge") +
               " for a deviation by player " + std::to_string(h.deviator);
    }
    if (t == horizon) break;

    std::vector<PlayHistory> next;
    for (const PlayHistory& h : level) {
      Profile intended(n);
      for (PlayerId i = 0; i < n; ++i)
        intended[i] = i == h.deviator ? 0 : s[i].output[h.memories[i]];
      std::vector<std::pair<PlayerId, Profile>> moves;
      if (h.deviator < 0) {
        moves.push_back({-1, intended});
        for (PlayerId k = 0; k < n; ++k)
          for (ActionId c = 0; c < static_cast<ActionId>(arena.actions(k).size()); ++c)
            if (c != intended[k]) {
              Profile p = intended;
              p[k] = c;
              moves.push_back({k, p});
            }
      } else {
        for (ActionId c = 0; c < static_cast<ActionId>(arena.actions(h.deviator).size()); ++c) {
          Profile p = intended;
          p[h.deviator] = c;
          moves.push_back({h.deviator, p});
        }
      }
      for (const auto& [dev, p] : moves) {
        const Transition& tr = arena.step(h.state, p);
        PlayHistory g = h;
        g.deviator = dev;
        g.state = tr.target;
        for (PlayerId i = 0; i < n; ++i) {
          g.traces[i].push_back(tr.obs[i]);
          if (i != dev) g.memories[i] = s[i].next(h.memories[i], tr.obs[i]);
        }
        const auto& edges = product.nodes[h.node].edges;
        auto it = std::find_if(edges.begin(), edges.end(),
                               [&](const Product::Edge& e) { return e.realized == p; });
        if (it == edges.end()) return "round " + std::to_string(t) + ": product misses a move";
        g.node = it->target;
        next.push_back(std::move(g));
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exposure game

bool exposure_oracle(const ExposureGame& game, const MonitorAutomaton& base_monitor,
                     const StrategyProfile& coalition) {
  const ExposureArena& ea = game.arena;
  const Arena& g = ea.game;
  const int n = ea.num_base_players();
  const int stride = n + 1;
  auto silent_state = [&](StateId v) {
    return v != ea.win && v != ea.lose && v % stride == 0;
  };

  struct Node {
    StateId state;
    std::vector<int> memories;
    int q;
    auto operator<=>(const Node&) const = default;
  };
  std::map<Node, int> index;
  std::vector<Node> nodes;
  std::vector<std::vector<int>> succ;
  std::vector<int> silent_next;  // successor under Nature's silent action
  auto intern = [&](const Node& x) {
    auto [it, fresh] = index.emplace(x, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back(x);
      succ.emplace_back();
      silent_next.push_back(-1);
    }
    return it->second;
  };
  Node init{g.initial(), {}, base_monitor.initial};
  for (PlayerId i = 0; i < n; ++i) init.memories.push_back(coalition[i].initial);
  intern(init);
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    const Node cur = nodes[x];
    Profile p(n + 1);
    for (PlayerId i = 0; i < n; ++i) p[i] = coalition[i].output[cur.memories[i]];
    for (ActionId a = 0; a < static_cast<ActionId>(g.actions(n).size()); ++a) {
      p[n] = a;
      const Transition& t = g.step(cur.state, p);
      Node nx{t.target, cur.memories, cur.q};
      for (PlayerId i = 0; i < n; ++i) nx.memories[i] = coalition[i].next(cur.memories[i], t.obs[i]);
      if (silent_state(cur.state) && silent_state(t.target)) {
        const Profile base(p.begin(), p.begin() + n);
        const StateId v = cur.state / stride;
        nx.q = base_monitor.next(cur.q, v, ea.base.profile_index(base));
      }
      const int y = intern(nx);
      succ[x].push_back(y);
      if (a == 0) silent_next[x] = y;
    }
  }
  // LOSE must be unreachable.
  for (const Node& x : nodes)
    if (x.state == ea.lose) return false;
  // No cycle among corrupted states that never reaches WIN.
  std::vector<int> color(nodes.size(), 0);
  std::function<bool(int)> cyclic = [&](int x) -> bool {
    color[x] = 1;
    for (int y : succ[x]) {
      const StateId v = nodes[y].state;
      if (v == ea.win || v == ea.lose || silent_state(v)) continue;
      if (color[y] == 1) return true;
      if (color[y] == 0 && cyclic(y)) return true;
    }
    color[x] = 2;
    return false;
  };
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    const StateId v = nodes[x].state;
    if (v != ea.win && v != ea.lose && !silent_state(v) && color[x] == 0 &&
        cyclic(static_cast<int>(x)))
      return false;
  }
  // The silent play must satisfy the base monitor.
  std::vector<bool> visited(nodes.size(), false);
  bool marked = false;
  int x = 0;
  while (!visited[x] && silent_state(nodes[x].state)) {
    visited[x] = true;
    marked = marked || base_monitor.marked[nodes[x].q];
    x = silent_next[x];
  }
  if (!silent_state(nodes[x].state)) return nodes[x].state == ea.win;
  return base_monitor.kind == MonitorKind::Safety ? !marked : marked;
}

}  // namespace devdet::testing
