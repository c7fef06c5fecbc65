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

#include "devdet/verifier.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "devdet/error.hpp"

namespace devdet {

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Coarsest bisimulation quotient of a world model. Blocks are numbered by
// the sorted order of their final signatures, so isomorphic inputs give
// identical outputs.
std::pair<KnowledgeState, std::vector<int>> minimise(const std::vector<WorldNode>& worlds,
                                                     const std::vector<std::vector<int>>& rel) {
  const int size = static_cast<int>(worlds.size());
  const int n = static_cast<int>(rel.size());
  std::vector<std::vector<std::vector<int>>> neighbours(n, std::vector<std::vector<int>>(size));
  for (PlayerId i = 0; i < n; ++i) {
    std::map<int, std::vector<int>> groups;
    for (int x = 0; x < size; ++x) groups[rel[i][x]].push_back(x);
    for (auto& [id, xs] : groups)
      for (int x : xs) neighbours[i][x] = xs;
  }

  std::set<WorldNode> labels(worlds.begin(), worlds.end());
  std::vector<int> block(size);
  for (int x = 0; x < size; ++x)
    block[x] = static_cast<int>(std::distance(labels.begin(), labels.find(worlds[x])));
  std::size_t blocks = labels.size();

  for (;;) {
    std::map<std::vector<int>, int> signatures;
    std::vector<std::vector<int>> sig(size);
    for (int x = 0; x < size; ++x) {
      sig[x].push_back(block[x]);
      for (PlayerId i = 0; i < n; ++i) {
        std::set<int> seen;
        for (int y : neighbours[i][x]) seen.insert(block[y]);
        sig[x].push_back(-1);  // separator
        sig[x].insert(sig[x].end(), seen.begin(), seen.end());
      }
      signatures.emplace(sig[x], 0);
    }
    int next = 0;
    for (auto& [key, id] : signatures) id = next++;
    for (int x = 0; x < size; ++x) block[x] = signatures[sig[x]];
    if (signatures.size() == blocks) break;
    blocks = signatures.size();
  }

  KnowledgeState k;
  k.worlds.resize(blocks);
  for (int x = 0; x < size; ++x) k.worlds[block[x]] = worlds[x];
  k.classes.assign(n, std::vector<int>(blocks));
  for (PlayerId i = 0; i < n; ++i) {
    std::vector<int> parent(blocks);
    std::iota(parent.begin(), parent.end(), 0);
    for (int x = 0; x < size; ++x)
      for (int y : neighbours[i][x]) {
        const int a = find_root(parent, block[x]);
        const int b = find_root(parent, block[y]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    std::map<int, int> ids;
    for (std::size_t b = 0; b < blocks; ++b) {
      const int root = find_root(parent, static_cast<int>(b));
      k.classes[i][b] = ids.emplace(root, static_cast<int>(ids.size())).first->second;
    }
  }
  return {std::move(k), std::move(block)};
}

struct Move {
  WorldNode world;
  Profile realized;
  std::vector<ObsId> obs;
};

std::vector<Move> world_moves(const Arena& arena, const StrategyProfile& s, const WorldNode& w) {
  const int n = arena.num_players();
  Profile intended(n, 0);
  for (PlayerId i = 0; i < n; ++i)
    if (i != w.deviator) intended[i] = s[i].output[w.memories[i]];

  std::vector<std::pair<PlayerId, Profile>> choices;
  if (w.silent()) {
    choices.emplace_back(-1, intended);
    for (PlayerId i = 0; i < n; ++i)
      for (ActionId c = 0; c < static_cast<ActionId>(arena.actions(i).size()); ++c) {
        if (c == intended[i]) continue;
        Profile p = intended;
        p[i] = c;
        choices.emplace_back(i, std::move(p));
      }
  } else {
    for (ActionId c = 0; c < static_cast<ActionId>(arena.actions(w.deviator).size()); ++c) {
      Profile p = intended;
      p[w.deviator] = c;
      choices.emplace_back(w.deviator, std::move(p));
    }
  }

  std::vector<Move> out;
  for (auto& [dev, p] : choices) {
    const Transition& t = arena.step(w.gstate, p);
    Move m;
    m.world.deviator = dev;
    m.world.gstate = t.target;
    m.world.memories.assign(n, -1);
    for (PlayerId i = 0; i < n; ++i)
      if (i != dev) m.world.memories[i] = s[i].next(w.memories[i], t.obs[i]);
    m.realized = std::move(p);
    m.obs = t.obs;
    out.push_back(std::move(m));
  }
  return out;
}

// Successor knowledge states of every world: per world, a list of
// (knowledge state, world index, realized profile).
using Successor = std::tuple<KnowledgeState, int, Profile>;

std::vector<std::vector<Successor>> expand_knowledge(const Arena& arena, const StrategyProfile& s,
                                                     const KnowledgeState& k) {
  const int n = arena.num_players();
  std::vector<Move> children;
  std::vector<int> parent;
  for (int x = 0; x < static_cast<int>(k.worlds.size()); ++x)
    for (Move& m : world_moves(arena, s, k.worlds[x])) {
      children.push_back(std::move(m));
      parent.push_back(x);
    }
  const int total = static_cast<int>(children.size());

  std::vector<std::vector<int>> rel(n, std::vector<int>(total));
  std::vector<int> uf(total);
  std::iota(uf.begin(), uf.end(), 0);
  for (PlayerId i = 0; i < n; ++i) {
    std::map<std::pair<int, ObsId>, int> first;
    for (int y = 0; y < total; ++y) {
      if (children[y].world.deviator == i) {
        rel[i][y] = total + y;  // own singleton class
        continue;
      }
      auto [it, fresh] =
          first.emplace(std::pair{k.classes[i][parent[y]], children[y].obs[i]}, y);
      rel[i][y] = it->second;
      const int a = find_root(uf, it->second);
      const int b = find_root(uf, y);
      if (a != b) uf[std::max(a, b)] = std::min(a, b);
    }
  }

  std::map<int, std::vector<int>> components;
  for (int y = 0; y < total; ++y) components[find_root(uf, y)].push_back(y);

  std::vector<std::vector<Successor>> out(k.worlds.size());
  for (const auto& [root, ys] : components) {
    std::vector<WorldNode> worlds;
    std::vector<std::vector<int>> sub(n);
    for (int y : ys) {
      worlds.push_back(children[y].world);
      for (PlayerId i = 0; i < n; ++i) sub[i].push_back(rel[i][y]);
    }
    auto [next, block] = minimise(worlds, sub);
    for (std::size_t t = 0; t < ys.size(); ++t)
      out[parent[ys[t]]].emplace_back(next, block[t], children[ys[t]].realized);
  }
  return out;
}

std::vector<WitnessStep> path_steps(const Product& product, const std::vector<int>& nodes) {
  std::vector<WitnessStep> steps;
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const WorldNode& w = product.world(nodes[t]);
    WitnessStep step{w.gstate, w.deviator, w.memories, {}};
    if (t + 1 < nodes.size())
      for (const auto& e : product.nodes[nodes[t]].edges)
        if (e.target == nodes[t + 1]) {
          step.realized = e.realized;
          break;
        }
    steps.push_back(std::move(step));
  }
  return steps;
}

// Rounds from a deviation to the end of the `inside` region: the deviating
// round plus the longest stay inside.
int deviation_delay(const Product& product, const std::vector<int>& longest) {
  int delay = 0;
  for (std::size_t v = 0; v < product.nodes.size(); ++v) {
    if (!product.world(static_cast<int>(v)).silent()) continue;
    for (const auto& e : product.nodes[v].edges)
      if (!product.world(e.target).silent()) delay = std::max(delay, longest[e.target] + 1);
  }
  return delay;
}

// Cycle search restricted to `inside`; on success returns the cycle with
// its first node repeated at the end. Otherwise fills the longest path
// length (in nodes) starting at each node.
std::vector<int> find_cycle(const Product& product, const std::vector<bool>& inside,
                            std::vector<int>& longest) {
  const int size = static_cast<int>(product.nodes.size());
  std::vector<int> colour(size, 0);
  longest.assign(size, 0);
  for (int root = 0; root < size; ++root) {
    if (!inside[root] || colour[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& edges = product.nodes[v].edges;
      if (next < edges.size()) {
        const int w = edges[next++].target;
        if (!inside[w]) continue;
        if (colour[w] == 1) {
          std::vector<int> cycle;
          auto it = std::find_if(stack.begin(), stack.end(),
                                 [&](const auto& frame) { return frame.first == w; });
          for (; it != stack.end(); ++it) cycle.push_back(it->first);
          cycle.push_back(w);
          return cycle;
        }
        if (colour[w] == 0) {
          colour[w] = 1;
          stack.emplace_back(w, 0);
        }
        continue;
      }
      int best = 0;
      for (const auto& e : edges)
        if (inside[e.target]) best = std::max(best, longest[e.target]);
      longest[v] = best + 1;
      colour[v] = 2;
      stack.pop_back();
    }
  }
  return {};
}

}  // namespace

bool common_knowledge_of_deviation(const KnowledgeState& k, int actual) {
  const PlayerId dev = k.worlds[actual].deviator;
  if (dev < 0) return false;
  const int n = static_cast<int>(k.classes.size());
  std::vector<bool> seen(k.worlds.size(), false);
  std::deque<int> queue{actual};
  seen[actual] = true;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    if (k.worlds[x].deviator != dev) return false;
    for (PlayerId j = 0; j < n; ++j) {
      if (j == dev) continue;
      for (int y = 0; y < static_cast<int>(k.worlds.size()); ++y)
        if (!seen[y] && k.related(j, x, y)) {
          seen[y] = true;
          queue.push_back(y);
        }
    }
  }
  return true;
}

const char* to_string(AccusationFault f) {
  switch (f) {
    case AccusationFault::Premature: return "PrematureAccusation";
    case AccusationFault::False: return "FalseAccusation";
    case AccusationFault::Uncoordinated: return "UncoordinatedAccusation";
    case AccusationFault::Missing: return "MissingAccusation";
  }
  return "?";
}

Product build_product(const Arena& arena, const StrategyProfile& s, std::size_t cap) {
  const int n = arena.num_players();
  Product product;
  std::map<KnowledgeState, int> kindex;
  std::map<std::pair<int, int>, int> nindex;
  std::vector<std::vector<std::vector<Successor>>> expansions;

  auto intern = [&](const KnowledgeState& k, int actual) {
    auto [kit, kfresh] = kindex.emplace(k, static_cast<int>(product.knowledge.size()));
    if (kfresh) product.knowledge.push_back(k);
    auto [nit, nfresh] =
        nindex.emplace(std::pair{kit->second, actual}, static_cast<int>(product.nodes.size()));
    if (nfresh) {
      if (product.nodes.size() >= cap)
        throw Error(ErrorKind::Explosion,
                    "verifier product exceeds " + std::to_string(cap) + " states");
      Product::Node node;
      node.knowledge = kit->second;
      node.actual = actual;
      node.ck = common_knowledge_of_deviation(product.knowledge[kit->second], actual);
      product.nodes.push_back(std::move(node));
    }
    return nit->second;
  };

  KnowledgeState start;
  WorldNode w0{-1, arena.initial(), std::vector<int>(n)};
  for (PlayerId i = 0; i < n; ++i) w0.memories[i] = s[i].initial;
  start.worlds.push_back(w0);
  start.classes.assign(n, std::vector<int>{0});
  intern(start, 0);

  for (std::size_t v = 0; v < product.nodes.size(); ++v) {
    const int kid = product.nodes[v].knowledge;
    if (static_cast<std::size_t>(kid) >= expansions.size()) expansions.resize(kid + 1);
    if (expansions[kid].empty())
      expansions[kid] = expand_knowledge(arena, s, product.knowledge[kid]);
    std::vector<Product::Edge> edges;
    for (const auto& [k, actual, realized] : expansions[kid][product.nodes[v].actual])
      edges.push_back({intern(k, actual), realized});
    product.nodes[v].edges = std::move(edges);
  }
  return product;
}

OutcomeResult check_outcome(const Arena& arena, const MonitorAutomaton& mon,
                            const StrategyProfile& s) {
  OutcomeResult r;
  r.outcome = outcome_lasso(arena, s);
  r.pass = monitor_verdict(arena, mon, r.outcome) == Verdict::Accepting;
  return r;
}

DetectionResult check_detection(const Arena&, const Product& product) {
  DetectionResult r;
  std::vector<bool> inside(product.nodes.size());
  for (std::size_t v = 0; v < product.nodes.size(); ++v)
    inside[v] = !product.world(static_cast<int>(v)).silent() && !product.nodes[v].ck;
  std::vector<int> longest;
  const std::vector<int> cycle = find_cycle(product, inside, longest);
  if (!cycle.empty()) {
    r.witness = path_steps(product, cycle);
    return r;
  }
  r.pass = true;
  r.max_delay = deviation_delay(product, longest);
  return r;
}

DetectionResult check_detection(const Arena& arena, const StrategyProfile& s, std::size_t cap) {
  return check_detection(arena, build_product(arena, s, cap));
}

AccusationResult check_accusations(const Arena& arena, const StrategyProfile& s,
                                   const Product& product) {
  const int n = arena.num_players();
  const int size = static_cast<int>(product.nodes.size());
  AccusationResult r;

  std::vector<int> parent(size, -2);
  std::vector<bool> inside(size, false);
  std::deque<int> queue{0};
  parent[0] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const WorldNode& w = product.world(v);

    std::vector<std::pair<PlayerId, PlayerId>> accusations;
    for (PlayerId j = 0; j < n; ++j)
      if (j != w.deviator)
        if (auto p = s[j].accuses(w.memories[j])) accusations.emplace_back(j, *p);

    if (!accusations.empty()) {
      std::optional<AccusationFault> fault;
      auto [accuser, accused] = accusations.front();
      if (w.silent()) {
        fault = AccusationFault::Premature;
      } else {
        for (auto [j, p] : accusations)
          if (p != w.deviator && !fault) {
            fault = AccusationFault::False;
            accuser = j;
            accused = p;
          }
        if (!fault && static_cast<int>(accusations.size()) != n - 1)
          fault = AccusationFault::Uncoordinated;
      }
      if (fault) {
        r.fault = fault;
        r.accuser = accuser;
        r.accused = accused;
        std::vector<int> path;
        for (int u = v; u >= 0; u = parent[u]) path.push_back(u);
        std::reverse(path.begin(), path.end());
        r.witness = path_steps(product, path);
        return r;
      }
      continue;  // joint exposure ends this thread
    }

    inside[v] = !w.silent();
    for (const auto& e : product.nodes[v].edges)
      if (parent[e.target] == -2) {
        parent[e.target] = v;
        queue.push_back(e.target);
      }
  }

  std::vector<int> longest;
  const std::vector<int> cycle = find_cycle(product, inside, longest);
  if (!cycle.empty()) {
    r.fault = AccusationFault::Missing;
    r.accused = product.world(cycle.front()).deviator;
    r.witness = path_steps(product, cycle);
    return r;
  }
  r.pass = true;
  r.max_delay = deviation_delay(product, longest);
  return r;
}

AccusationResult check_accusations(const Arena& arena, const StrategyProfile& s, std::size_t cap) {
  return check_accusations(arena, s, build_product(arena, s, cap));
}

VerifierReport verify(const Arena& arena, const MonitorAutomaton& mon, const StrategyProfile& s,
                      std::size_t cap) {
  if (arena.num_players() < 2)
    throw Error(ErrorKind::InvalidArgument, "a coalition needs at least two players");
  const ValidationReport problems = validate_profile(arena, s);
  if (!problems.empty())
    throw Error(ErrorKind::InvalidArgument,
                std::string("invalid profile: ") + to_string(problems.front().kind) + " at " +
                    problems.front().where);
  VerifierReport report;
  report.outcome = check_outcome(arena, mon, s);
  const Product product = build_product(arena, s, cap);
  report.product_size = product.nodes.size();
  report.detection = check_detection(arena, product);
  report.accusations = check_accusations(arena, s, product);
  return report;
}

}  // namespace devdet
