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

#include "devdet/beeping.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/biconnected_components.hpp>
#include <boost/graph/connected_components.hpp>

namespace devdet {

namespace {

using UGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;

UGraph to_boost(const NetworkGraph& g) {
  UGraph bg(g.n);
  for (auto [u, v] : g.edges) boost::add_edge(u, v, bg);
  return bg;
}

}  // namespace

void validate_graph(const NetworkGraph& g) {
  if (g.n < 2) throw Error(ErrorKind::InvalidArgument, "graph needs at least two vertices");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n)
      throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    if (u == v) throw Error(ErrorKind::InvalidArgument, "self-loop on vertex " + std::to_string(u));
    if (!seen.insert(std::minmax(u, v)).second)
      throw Error(ErrorKind::InvalidArgument, "repeated edge");
  }
}

Arena beeping_arena(const NetworkGraph& g, int max_nodes) {
  validate_graph(g);
  if (g.n > max_nodes)
    throw Error(ErrorKind::TooLarge, std::to_string(g.n) + " vertices exceed the table cap of " +
                                         std::to_string(max_nodes));
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  // Observation ids per player.
  constexpr ObsId kQuiet = 0, kHeard = 1, kBeeped = 2;
  std::vector<std::vector<std::string>> actions(g.n, {kSilent, kBeep});
  std::vector<std::vector<std::string>> observations(g.n,
                                                     {"silent/quiet", "silent/heard", kBeep});
  Arena arena(std::move(actions), std::move(observations), {"v0"}, 0);
  for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
    Profile prof = arena.profile_at(p);
    Transition t;
    t.target = 0;
    t.obs.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      if (prof[i] == 1) {
        t.obs[i] = kBeeped;
        continue;
      }
      bool heard = std::any_of(adj[i].begin(), adj[i].end(), [&](int j) { return prof[j] == 1; });
      t.obs[i] = heard ? kHeard : kQuiet;
    }
    arena.set_transition(0, prof, std::move(t));
  }
  return arena;
}

MonitorAutomaton fraction_monitor(const Arena& arena, const NetworkGraph& g, int num, int den) {
  if (den <= 0 || num < 0 || num > den)
    throw Error(ErrorKind::InvalidArgument, "fraction must lie in [0, 1]");
  MonitorAutomaton mon;
  mon.kind = MonitorKind::Safety;
  mon.states = {"ok", "violated"};
  mon.arena_states = arena.num_states();
  mon.arena_profiles = arena.num_profiles();
  mon.marked = {false, true};
  mon.delta.assign(2 * mon.num_symbols(), 1);
  for (StateId v = 0; v < arena.num_states(); ++v)
    for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
      Profile prof = arena.profile_at(p);
      const long beeps = std::count(prof.begin(), prof.end(), 1);
      const bool violating = beeps * den > static_cast<long>(num) * g.n;
      mon.delta[mon.symbol(v, p)] = violating ? 1 : 0;
    }
  return mon;
}

std::vector<int> articulation_points(const NetworkGraph& g) {
  validate_graph(g);
  UGraph bg = to_boost(g);
  std::vector<UGraph::vertex_descriptor> points;
  boost::articulation_points(bg, std::back_inserter(points));
  std::vector<int> out(points.begin(), points.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool connected(const NetworkGraph& g) {
  validate_graph(g);
  UGraph bg = to_boost(g);
  std::vector<int> component(g.n);
  return boost::connected_components(bg, component.data()) == 1;
}

bool two_connected(const NetworkGraph& g) {
  return g.n >= 2 && connected(g) && articulation_points(g).empty();
}

}  // namespace devdet
