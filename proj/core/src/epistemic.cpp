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

#include "devdet/epistemic.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace devdet {

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

// Renumbers arbitrary ids by first occurrence.
std::vector<int> first_occurrence(const std::vector<int>& ids) {
  std::map<int, int> seen;
  std::vector<int> out(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k)
    out[k] = seen.emplace(ids[k], static_cast<int>(seen.size())).first->second;
  return out;
}

// Knowledge model before minimisation.
struct RawModel {
  StateId gstate = 0;
  int round = 0;
  std::vector<EpistemicNode> nodes;
  std::vector<std::vector<int>> classes;  // [player][node], arbitrary ids
};

std::vector<bool> revealed_nodes(const RevelationGame& rev, const std::vector<EpistemicNode>& nodes,
                                 const std::vector<std::vector<int>>& classes) {
  const int n = rev.base.num_players();
  const int size = static_cast<int>(nodes.size());
  std::vector<std::map<int, std::vector<int>>> members(n);
  for (PlayerId i = 0; i < n; ++i)
    for (int x = 0; x < size; ++x) members[i][classes[i][x]].push_back(x);

  std::vector<bool> out(size, false);
  for (int x = 0; x < size; ++x) {
    if (nodes[x].silent) continue;
    const PlayerId k = rev.candidates[nodes[x].component];
    std::vector<bool> seen(size, false);
    std::deque<int> queue{x};
    seen[x] = true;
    bool only_k = true;
    while (!queue.empty() && only_k) {
      const int y = queue.front();
      queue.pop_front();
      if (nodes[y].silent || rev.candidates[nodes[y].component] != k) {
        only_k = false;
        break;
      }
      for (PlayerId j = 0; j < n; ++j) {
        if (j == k) continue;
        for (int z : members[j][classes[j][y]])
          if (!seen[z]) {
            seen[z] = true;
            queue.push_back(z);
          }
      }
    }
    out[x] = only_k;
  }
  return out;
}

// Quotient by the coarsest bisimulation, with canonical node order.
// Returns the structure and, per raw node, its node index in it.
std::pair<EpistemicStructure, std::vector<int>> canonicalize(const RawModel& raw) {
  const int n = static_cast<int>(raw.classes.size());
  const int size = static_cast<int>(raw.nodes.size());

  std::vector<int> color(size);
  {
    std::vector<EpistemicNode> labels = raw.nodes;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (int x = 0; x < size; ++x)
      color[x] = static_cast<int>(std::lower_bound(labels.begin(), labels.end(), raw.nodes[x]) -
                                  labels.begin());
  }
  std::vector<std::map<int, std::vector<int>>> members(n);
  for (PlayerId i = 0; i < n; ++i)
    for (int x = 0; x < size; ++x) members[i][raw.classes[i][x]].push_back(x);

  int count = *std::max_element(color.begin(), color.end()) + 1;
  while (true) {
    using Signature = std::vector<std::vector<int>>;
    std::vector<Signature> sig(size);
    for (int x = 0; x < size; ++x) {
      sig[x].push_back({color[x]});
      for (PlayerId i = 0; i < n; ++i) {
        std::vector<int> seen;
        for (int y : members[i][raw.classes[i][x]]) seen.push_back(color[y]);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        sig[x].push_back(std::move(seen));
      }
    }
    std::vector<Signature> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int x = 0; x < size; ++x)
      color[x] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[x]) -
                                  sorted.begin());
    const int next = static_cast<int>(sorted.size());
    if (next == count) break;
    count = next;
  }

  EpistemicStructure u;
  u.gstate = raw.gstate;
  u.round = raw.round;
  u.nodes.resize(count);
  for (int x = 0; x < size; ++x) u.nodes[color[x]] = raw.nodes[x];
  u.classes.assign(n, {});
  for (PlayerId i = 0; i < n; ++i) {
    UnionFind uf(count);
    for (const auto& [cls, xs] : members[i])
      for (int y : xs) uf.unite(color[xs.front()], color[y]);
    std::vector<int> roots(count);
    for (int b = 0; b < count; ++b) roots[b] = uf.find(b);
    u.classes[i] = first_occurrence(roots);
  }
  return {std::move(u), std::move(color)};
}

}  // namespace

int EpistemicStructure::num_classes(PlayerId i) const {
  const auto& c = classes[i];
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

std::vector<int> EpistemicStructure::class_members(PlayerId i, int cls) const {
  std::vector<int> out;
  for (int x = 0; x < static_cast<int>(nodes.size()); ++x)
    if (classes[i][x] == cls) out.push_back(x);
  return out;
}

PlayerId deviator_of(const RevelationGame& rev, const EpistemicNode& node) {
  return node.silent ? -1 : rev.candidates[node.component];
}

EpistemicStructure initial_structure(const RevelationGame& rev) {
  EpistemicStructure u;
  u.gstate = rev.base.initial();
  for (int k = 0; k < rev.num_components(); ++k)
    u.nodes.push_back({k, rev.monitor.initial, true, 0, false});
  u.classes.assign(rev.base.num_players(), std::vector<int>(u.nodes.size(), 0));
  return u;
}

void check_structure(const RevelationGame& rev, const EpistemicStructure& u) {
  const int n = rev.base.num_players();
  const int size = static_cast<int>(u.nodes.size());
  if (size == 0) throw std::logic_error("empty structure");
  if (static_cast<int>(u.classes.size()) != n) throw std::logic_error("relation count");
  UnionFind uf(size);
  for (PlayerId i = 0; i < n; ++i) {
    if (static_cast<int>(u.classes[i].size()) != size) throw std::logic_error("relation size");
    if (first_occurrence(u.classes[i]) != u.classes[i])
      throw std::logic_error("class ids not canonical");
    std::map<int, int> rep;
    for (int x = 0; x < size; ++x) {
      auto [it, fresh] = rep.emplace(u.classes[i][x], x);
      uf.unite(it->second, x);
      if (deviator_of(rev, u.nodes[x]) == i && !fresh)
        throw std::logic_error("corrupted candidate shares a class for its own relation");
    }
  }
  for (int x = 0; x < size; ++x)
    if (uf.find(x) != uf.find(0)) throw std::logic_error("structure not connected");
  int silent_mon = -1;
  int first_silent = -1;
  for (int x = 0; x < size; ++x) {
    if (!u.nodes[x].silent) continue;
    if (silent_mon >= 0 && u.nodes[x].mon != silent_mon)
      throw std::logic_error("silent nodes disagree on the monitor state");
    silent_mon = u.nodes[x].mon;
    if (first_silent < 0) first_silent = x;
    for (PlayerId i = 0; i < n; ++i)
      if (!u.related(i, x, first_silent)) throw std::logic_error("silent nodes not related");
  }
  for (const auto& node : u.nodes) {
    if (node.silent && (node.age != 0 || node.resolved))
      throw std::logic_error("silent node with deviation data");
  }
}

Profile Assignment::profile_at(const EpistemicStructure& u, int node) const {
  Profile p(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) p[i] = actions[i][u.classes[i][node]];
  return p;
}

std::size_t assignment_count(const RevelationGame& rev, const EpistemicStructure& u) {
  std::size_t count = 1;
  for (PlayerId i = 0; i < rev.base.num_players(); ++i)
    for (int c = 0; c < u.num_classes(i); ++c) count *= rev.base.actions(i).size();
  return count;
}

namespace {

void enumerate(const RevelationGame& rev, const EpistemicStructure& u, bool reduce,
               const std::function<bool(const Assignment&)>& visit) {
  const int n = rev.base.num_players();
  Assignment f;
  f.actions.resize(n);
  std::vector<std::pair<PlayerId, int>> free;
  for (PlayerId i = 0; i < n; ++i) {
    f.actions[i].assign(u.num_classes(i), 0);
    for (int c = 0; c < u.num_classes(i); ++c) {
      bool dont_care = reduce;
      for (int x : u.class_members(i, c))
        dont_care = dont_care && deviator_of(rev, u.nodes[x]) == i;
      if (!dont_care) free.emplace_back(i, c);
    }
  }
  while (true) {
    if (!visit(f)) return;
    // Increment the mixed-radix counter, last slot least significant.
    int k = static_cast<int>(free.size()) - 1;
    for (; k >= 0; --k) {
      auto [i, c] = free[k];
      if (++f.actions[i][c] < static_cast<ActionId>(rev.base.actions(i).size())) break;
      f.actions[i][c] = 0;
    }
    if (k < 0) return;
  }
}

}  // namespace

std::vector<Assignment> legal_assignments(const RevelationGame& rev,
                                          const EpistemicStructure& u) {
  std::vector<Assignment> out;
  enumerate(rev, u, false, [&](const Assignment& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

void for_each_reduced_assignment(const RevelationGame& rev, const EpistemicStructure& u,
                                 const std::function<bool(const Assignment&)>& visit) {
  enumerate(rev, u, true, visit);
}

RevealSummary is_revealed(const RevelationGame& rev, const EpistemicStructure& u) {
  RevealSummary out;
  out.revealed = revealed_nodes(rev, u.nodes, u.classes);
  out.single_component = std::all_of(u.nodes.begin(), u.nodes.end(), [&](const auto& node) {
    return node.component == u.nodes.front().component;
  });
  return out;
}

Expansion expand(const RevelationGame& rev, const EpistemicStructure& u, const Assignment& f,
                 int deadline) {
  const Arena& base = rev.base;
  const int n = base.num_players();
  if (static_cast<int>(f.actions.size()) != n)
    throw Error(ErrorKind::IllegalAssignment, "assignment has the wrong player count");
  for (PlayerId i = 0; i < n; ++i) {
    if (static_cast<int>(f.actions[i].size()) != u.num_classes(i))
      throw Error(ErrorKind::IllegalAssignment,
                  "player " + std::to_string(i) + " needs one action per class");
    for (ActionId a : f.actions[i])
      if (a < 0 || a >= static_cast<ActionId>(base.actions(i).size()))
        throw Error(ErrorKind::IllegalAssignment, "action outside the alphabet");
  }

  struct Raw {
    EpistemicNode node;
    StateId target;
    ExpandedChild child;
  };
  const int horizon = rev.corruption_horizon;
  const bool may_corrupt = horizon <= 0 || u.round < horizon;
  // Actions that k plays somewhere in u as an honest player.
  auto honest_actions = [&](PlayerId k) {
    std::vector<bool> seen(base.actions(k).size(), false);
    for (int y = 0; y < static_cast<int>(u.nodes.size()); ++y)
      if (deviator_of(rev, u.nodes[y]) != k) seen[f.actions[k][u.classes[k][y]]] = true;
    return seen;
  };
  std::vector<Raw> raw;
  for (int x = 0; x < static_cast<int>(u.nodes.size()); ++x) {
    const EpistemicNode& parent = u.nodes[x];
    const Profile intended = f.profile_at(u, x);
    const PlayerId k = rev.candidates[parent.component];
    std::vector<NatureMove> moves;
    if (parent.silent && may_corrupt) {
      moves = nature_moves(rev, parent.component, intended[k]);
    } else if (parent.silent) {
      moves = {NatureMove{false, intended[k]}};
    } else {
      std::vector<bool> seen(base.actions(k).size(), true);
      if (rev.mimicking_deviators) {
        seen = honest_actions(k);
        if (std::find(seen.begin(), seen.end(), true) == seen.end()) seen.flip();
      }
      for (ActionId c = 0; c < static_cast<ActionId>(seen.size()); ++c)
        if (seen[c]) moves.push_back({true, c});
    }
    for (const NatureMove& mv : moves) {
      Raw r;
      r.child.parent = x;
      r.child.move = mv;
      r.child.realized = intended;
      if (mv.corrupt) r.child.realized[k] = mv.action;
      const std::size_t p = base.profile_index(r.child.realized);
      const Transition& t = base.step(u.gstate, p);
      r.target = t.target;
      r.child.obs = t.obs;
      r.node = parent;
      r.node.mon = rev.monitor.next(parent.mon, u.gstate, p);
      if (parent.silent && mv.corrupt) {
        r.node.silent = false;
        r.node.age = 0;
      } else if (!parent.silent && !parent.resolved) {
        r.node.age = std::min(parent.age + 1, deadline);
      }
      raw.push_back(std::move(r));
    }
  }

  // Relations: same parent class and same observation, never for the
  // corrupted candidate itself.
  const int total = static_cast<int>(raw.size());
  std::vector<std::vector<int>> cls(n, std::vector<int>(total));
  UnionFind uf(total);
  for (PlayerId i = 0; i < n; ++i) {
    std::map<std::pair<int, ObsId>, int> group;
    for (int y = 0; y < total; ++y) {
      if (deviator_of(rev, raw[y].node) == i) {
        cls[i][y] = -1 - y;
        continue;
      }
      auto key = std::pair{u.classes[i][raw[y].child.parent], raw[y].child.obs[i]};
      auto [it, fresh] = group.emplace(key, y);
      cls[i][y] = it->second;
      uf.unite(it->second, y);
    }
  }

  std::map<int, std::vector<int>> components;
  for (int y = 0; y < total; ++y) components[uf.find(y)].push_back(y);

  Expansion out;
  std::vector<std::pair<EpistemicStructure, std::vector<std::pair<int, int>>>> built;
  for (const auto& [root, ys] : components) {
    RawModel model;
    model.gstate = raw[ys.front()].target;
    model.round = horizon > 0 ? std::min(u.round + 1, horizon) : 0;
    model.classes.assign(n, {});
    for (int y : ys) {
      if (raw[y].target != model.gstate)
        throw std::logic_error("related histories end in different states");
      model.nodes.push_back(raw[y].node);
      for (PlayerId i = 0; i < n; ++i) model.classes[i].push_back(cls[i][y]);
    }
    const std::vector<bool> revealed = revealed_nodes(rev, model.nodes, model.classes);
    for (std::size_t k = 0; k < ys.size(); ++k)
      if (revealed[k]) model.nodes[k].resolved = true;
    auto [structure, where] = canonicalize(model);
    std::vector<std::pair<int, int>> placement;
    for (std::size_t k = 0; k < ys.size(); ++k) placement.emplace_back(ys[k], where[k]);
    built.emplace_back(std::move(structure), std::move(placement));
  }

  for (const auto& b : built) out.successors.push_back(b.first);
  std::sort(out.successors.begin(), out.successors.end());
  out.successors.erase(std::unique(out.successors.begin(), out.successors.end()),
                       out.successors.end());
  out.children.resize(total);
  for (auto& [structure, placement] : built) {
    const int s = static_cast<int>(
        std::lower_bound(out.successors.begin(), out.successors.end(), structure) -
        out.successors.begin());
    for (auto [y, node] : placement) {
      out.children[y] = raw[y].child;
      out.children[y].structure = s;
      out.children[y].node = node;
    }
  }
  return out;
}

StructureLabels label_structure(const RevelationGame& rev, const EpistemicStructure& u,
                                int deadline) {
  StructureLabels l;
  const bool safety = rev.monitor.kind == MonitorKind::Safety;
  l.revealed = true;
  for (const auto& node : u.nodes) {
    if (node.silent) {
      l.revealed = false;
      const bool marked = rev.monitor.marked[node.mon];
      if (safety && marked) l.silent_safe = false;
      if (safety == marked) l.silent_accepted = false;
    } else {
      if (!node.resolved) {
        l.revealed = false;
        if (deadline > 0 && node.age >= deadline) l.overage = true;
      }
    }
  }
  return l;
}

AbstractArena build_abstract_arena(const RevelationGame& rev, int deadline, std::size_t cap) {
  if (deadline < 0) throw Error(ErrorKind::InvalidArgument, "deadline must not be negative");
  AbstractArena a;
  a.deadline = deadline;
  const bool safety = rev.monitor.kind == MonitorKind::Safety;
  std::map<EpistemicStructure, int> index;

  auto check_cap = [&] {
    if (static_cast<std::size_t>(a.game.size()) > cap)
      throw Error(ErrorKind::Explosion, "abstract arena exceeds " + std::to_string(cap) +
                                            " positions at deadline " + std::to_string(deadline));
  };
  auto intern = [&](const EpistemicStructure& u) {
    auto [it, fresh] = index.emplace(u, static_cast<int>(a.structures.size()));
    if (fresh) {
      a.structures.push_back(u);
      a.labels.push_back(label_structure(rev, u, deadline));
      const int pos = a.game.add_position(Owner::Coalition);
      a.structure_position.push_back(pos);
      a.payload.push_back(it->second);
      check_cap();
    }
    return it->second;
  };

  a.game.initial = a.structure_position[intern(initial_structure(rev))];
  for (std::size_t s = 0; s < a.structures.size(); ++s) {
    const StructureLabels l = a.labels[s];
    const int pos = a.structure_position[s];
    const bool violates = l.overage || (safety && !l.silent_safe);
    a.expanded.push_back(!violates && !l.revealed);
    if (!a.expanded.back()) {
      a.game.add_move(pos, pos);
      continue;
    }
    // Copy: interning may reallocate the structure vector.
    const EpistemicStructure u = a.structures[s];
    for_each_reduced_assignment(rev, u, [&](const Assignment& f) {
      const int c = static_cast<int>(a.choices.size());
      const int cpos = a.game.add_position(Owner::Adversary);
      a.payload.push_back(c);
      a.game.add_move(pos, cpos);
      check_cap();
      AbstractArena::Choice choice;
      choice.structure = static_cast<int>(s);
      choice.assignment = f;
      const Expansion e = expand(rev, u, f, deadline);
      for (const auto& succ : e.successors) {
        const int t = intern(succ);
        choice.successors.push_back(t);
        a.game.add_move(cpos, a.structure_position[t]);
      }
      a.choices.push_back(std::move(choice));
      a.choice_position.push_back(cpos);
      return true;
    });
  }
  return a;
}

}  // namespace devdet
