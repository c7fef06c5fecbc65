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

#include "devdet/exposure.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace devdet {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

int coalition_action_count(const Arena& base, PlayerId i) {
  return static_cast<int>(base.actions(i).size()) + base.num_players() - 1;
}

ObsId sink_obs(const Arena& base, PlayerId i, ActionId x) {
  return static_cast<ObsId>(base.observations(i).size()) + x;
}

ObsId corrupted_obs(const Arena& base, PlayerId i, ActionId x) {
  return static_cast<ObsId>(base.observations(i).size()) + coalition_action_count(base, i) + x;
}

struct Decoded {
  int corrupted = -1;  // player whose action Nature replaces this round
  int next_local = -1;
  ActionId replacement = 0;
};

// Nature action ids: 0 silent, then corrupt(i, c) grouped by player.
std::pair<PlayerId, ActionId> decode_nature(const Arena& base, ActionId a) {
  int k = a - 1;
  for (PlayerId i = 0; i < base.num_players(); ++i) {
    const int na = static_cast<int>(base.actions(i).size());
    if (k < na) return {i, k};
    k -= na;
  }
  return {-1, 0};
}

Decoded decode_round(const ExposureArena& ea, int local, const Profile& prof) {
  const Arena& base = ea.base;
  const int n = base.num_players();
  Decoded d;
  const ActionId nat = prof[n];
  auto [who, c] = nat == 0 ? std::pair<PlayerId, ActionId>{-1, 0} : decode_nature(base, nat);
  if (local < 0) {
    if (who >= 0 && c != prof[who]) {
      d.corrupted = who;
      d.next_local = who;
      d.replacement = c;
    }
    return d;
  }
  d.corrupted = local;
  d.next_local = local;
  if (who == local) {
    d.replacement = c;
  } else {
    // Nature lets the corrupted player act; exposure actions fall back to action 0.
    const ActionId own = prof[local];
    d.replacement = own < static_cast<ActionId>(base.actions(local).size()) ? own : 0;
  }
  return d;
}

Transition exposure_step(const ExposureArena& ea, StateId v, int local, const Profile& prof) {
  const Arena& base = ea.base;
  const int n = base.num_players();
  const Decoded d = decode_round(ea, local, prof);
  Transition t;
  t.obs.assign(n + 1, 0);

  bool any_accuse = false, consensus = local >= 0;
  for (PlayerId j = 0; j < n; ++j) {
    if (j == d.corrupted) continue;
    auto acc = ea.accused(j, prof[j]);
    any_accuse = any_accuse || acc.has_value();
    consensus = consensus && acc == std::optional<PlayerId>(local);
  }
  if (any_accuse) {
    t.target = consensus ? ea.win : ea.lose;
    for (PlayerId j = 0; j < n; ++j) t.obs[j] = sink_obs(base, j, prof[j]);
  } else {
    Profile realized(prof.begin(), prof.begin() + n);
    if (d.corrupted >= 0) realized[d.corrupted] = d.replacement;
    const Transition& bt = base.step(v, realized);
    t.target = ea.state_of(bt.target, d.next_local);
    for (PlayerId j = 0; j < n; ++j)
      t.obs[j] = j == d.corrupted ? corrupted_obs(base, j, prof[j]) : bt.obs[j];
  }
  return t;
}

Transition sink_step(const ExposureArena& ea, StateId sink, const Profile& prof) {
  const int n = ea.base.num_players();
  Transition t;
  t.target = sink;
  t.obs.assign(n + 1, 0);
  for (PlayerId j = 0; j < n; ++j) t.obs[j] = sink_obs(ea.base, j, prof[j]);
  return t;
}

}  // namespace

std::optional<PlayerId> ExposureArena::accused(PlayerId i, ActionId a) const {
  const int na = static_cast<int>(base.actions(i).size());
  if (a < na) return std::nullopt;
  const int k = a - na;
  return k < i ? k : k + 1;
}

ActionId ExposureArena::accuse_action(PlayerId i, PlayerId j) const {
  return static_cast<ActionId>(base.actions(i).size()) + (j < i ? j : j - 1);
}

ActionId ExposureArena::corrupt_action(PlayerId i, ActionId c) const {
  ActionId id = 1;
  for (PlayerId j = 0; j < i; ++j) id += static_cast<ActionId>(base.actions(j).size());
  return id + c;
}

ExposureGame build_exposure_game(const Arena& arena, const MonitorAutomaton& mon,
                                 std::size_t row_cap) {
  const int n = arena.num_players();
  for (const auto& s : arena.states())
    if (s == kWinState || s == kLoseState)
      throw Error(ErrorKind::AlphabetClash, "reserved state name " + s);
  for (PlayerId i = 0; i < n; ++i) {
    for (const auto& a : arena.actions(i))
      if (a.starts_with(kAccusePrefix))
        throw Error(ErrorKind::AlphabetClash, "reserved action name " + a);
    for (const auto& b : arena.observations(i))
      if (ends_with(b, "/sink") || ends_with(b, "/corrupted"))
        throw Error(ErrorKind::AlphabetClash, "reserved observation name " + b);
  }

  ExposureGame out;
  ExposureArena& ea = out.arena;
  ea.base = arena;
  ea.nature = n;

  std::vector<std::vector<std::string>> actions(n + 1), observations(n + 1);
  for (PlayerId i = 0; i < n; ++i) {
    actions[i] = arena.actions(i);
    for (PlayerId j = 0; j < n; ++j)
      if (j != i) actions[i].push_back(kAccusePrefix + std::to_string(j));
    observations[i] = arena.observations(i);
    for (const auto& x : actions[i]) observations[i].push_back(x + "/sink");
    for (const auto& x : actions[i]) observations[i].push_back(x + "/corrupted");
  }
  actions[n].push_back("silent");
  for (PlayerId i = 0; i < n; ++i)
    for (const auto& c : arena.actions(i))
      actions[n].push_back("corrupt:" + std::to_string(i) + ":" + c);

  std::vector<std::string> states;
  for (StateId v = 0; v < arena.num_states(); ++v) {
    states.push_back(arena.state_name(v) + "|silent");
    for (PlayerId i = 0; i < n; ++i)
      states.push_back(arena.state_name(v) + "|" + std::to_string(i));
  }
  ea.win = static_cast<StateId>(states.size());
  states.push_back(kWinState);
  ea.lose = static_cast<StateId>(states.size());
  states.push_back(kLoseState);

  for (const auto& x : actions[n])
    for (const auto& s : states) observations[n].push_back(x + "/" + s);

  std::size_t rows = states.size();
  for (const auto& a : actions) rows *= a.size();
  if (rows > row_cap)
    throw Error(ErrorKind::TooLarge, "exposure game needs " + std::to_string(rows) + " rows");

  const int num_states = static_cast<int>(states.size());
  ea.game = Arena(std::move(actions), std::move(observations), std::move(states),
                  ea.state_of(arena.initial(), -1));
  const Arena& g = ea.game;
  const ObsId nature_obs_stride = num_states;

  for (StateId s = 0; s < num_states; ++s) {
    for (std::size_t p = 0; p < g.num_profiles(); ++p) {
      Profile prof = g.profile_at(p);
      Transition t = (s == ea.win || s == ea.lose)
                         ? sink_step(ea, s, prof)
                         : exposure_step(ea, s / (n + 1), s % (n + 1) - 1, prof);
      t.obs[n] = prof[n] * nature_obs_stride + t.target;
      ea.game.set_transition(s, prof, std::move(t));
    }
  }

  // Winning-condition monitor: base states while silent, then
  // corrupted / win / lose.
  MonitorAutomaton& w = out.monitor;
  const int nq = static_cast<int>(mon.states.size());
  const int corrupted = nq, won = nq + 1, lost = nq + 2;
  w.kind = MonitorKind::Safety;
  for (const auto& q : mon.states) w.states.push_back("silent:" + q);
  w.states.insert(w.states.end(), {"corrupted", "win", "lose"});
  w.initial = mon.initial;
  w.arena_states = g.num_states();
  w.arena_profiles = g.num_profiles();
  w.marked.assign(nq + 3, false);
  w.marked[lost] = true;
  w.pending.assign(nq + 3, false);
  w.pending[corrupted] = true;
  for (int q = 0; q < nq; ++q)
    w.pending[q] = mon.kind == MonitorKind::Safety ? mon.marked[q] : !mon.marked[q];
  w.delta.assign(w.num_symbols() * (nq + 3), 0);
  for (StateId s = 0; s < num_states; ++s) {
    for (std::size_t p = 0; p < g.num_profiles(); ++p) {
      const Transition& t = g.step(s, p);
      const std::size_t sym = w.symbol(s, p);
      for (int q = 0; q < nq + 3; ++q) {
        int to;
        if (q == won || q == lost) to = q;
        else if (t.target == ea.win) to = won;
        else if (t.target == ea.lose) to = lost;
        else if (q == corrupted || t.target % (n + 1) != 0) to = corrupted;
        else if (s == ea.win || s == ea.lose || (s % (n + 1)) != 0) to = corrupted;
        else {
          Profile prof = g.profile_at(p);
          prof.resize(n);
          to = mon.next(q, s / (n + 1), arena.profile_index(prof));
        }
        w.delta[static_cast<std::size_t>(q) * w.num_symbols() + sym] = to;
      }
    }
  }
  return out;
}

ExposureEmbedding strategy_to_exposure(const ExposureArena& ea, const StrategyProfile& s) {
  ExposureEmbedding out;
  const int n = ea.num_base_players();
  for (PlayerId i = 0; i < n; ++i) {
    const StrategyMachine& m = s.at(i);
    if (m.accusation.empty() ||
        std::none_of(m.accusation.begin(), m.accusation.end(),
                     [](const auto& a) { return a.has_value(); }))
      out.warnings.push_back("MissingAccusation: player " + std::to_string(i));
    StrategyMachine e;
    e.memory = m.memory;
    e.initial = m.initial;
    e.num_observations = static_cast<int>(ea.game.observations(i).size());
    e.update.resize(static_cast<std::size_t>(m.size()) * e.num_observations);
    for (int mem = 0; mem < m.size(); ++mem) {
      for (ObsId b = 0; b < e.num_observations; ++b)
        e.update[static_cast<std::size_t>(mem) * e.num_observations + b] =
            b < m.num_observations ? m.next(mem, b) : mem;
      auto acc = m.accuses(mem);
      e.output.push_back(acc ? ea.accuse_action(i, *acc) : m.output[mem]);
    }
    out.profile.push_back(std::move(e));
  }
  return out;
}

StrategyProfile strategy_from_exposure(const ExposureArena& ea, const StrategyProfile& s) {
  StrategyProfile out;
  const int n = ea.num_base_players();
  for (PlayerId i = 0; i < n; ++i) {
    const StrategyMachine& e = s.at(i);
    StrategyMachine m;
    m.memory = e.memory;
    m.initial = e.initial;
    m.num_observations = static_cast<int>(ea.base.observations(i).size());
    bool any = false;
    for (int mem = 0; mem < e.size(); ++mem) {
      for (ObsId b = 0; b < m.num_observations; ++b) m.update.push_back(e.next(mem, b));
      auto acc = ea.accused(i, e.output[mem]);
      m.output.push_back(acc ? 0 : e.output[mem]);
      m.accusation.push_back(acc);
      any = any || acc.has_value();
    }
    if (!any) m.accusation.clear();
    out.push_back(std::move(m));
  }
  return out;
}

bool exposure_wins(const ExposureGame& game, const StrategyProfile& coalition) {
  const ExposureArena& ea = game.arena;
  const Arena& g = ea.game;
  const MonitorAutomaton& w = game.monitor;
  const int n = ea.num_base_players();
  const int num_nature = static_cast<int>(g.actions(n).size());

  // Configuration: state, coalition memories, monitor state.
  using Config = std::vector<int>;
  std::map<Config, int> index;
  std::vector<Config> configs;
  std::vector<std::vector<int>> succ;
  Config start(n + 2);
  start[0] = g.initial();
  for (PlayerId i = 0; i < n; ++i) start[i + 1] = coalition.at(i).initial;
  start[n + 1] = w.initial;
  index[start] = 0;
  configs.push_back(start);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const Config c = configs[k];
    if (w.marked[c[n + 1]]) return false;
    succ.emplace_back();
    Profile prof(n + 1);
    for (PlayerId i = 0; i < n; ++i) prof[i] = coalition[i].output[c[i + 1]];
    for (int nat = 0; nat < num_nature; ++nat) {
      prof[n] = nat;
      const std::size_t p = g.profile_index(prof);
      const Transition& t = g.step(c[0], p);
      Config next(n + 2);
      next[0] = t.target;
      for (PlayerId i = 0; i < n; ++i) next[i + 1] = coalition[i].next(c[i + 1], t.obs[i]);
      next[n + 1] = w.next(c[n + 1], c[0], p);
      auto [it, fresh] = index.emplace(next, static_cast<int>(configs.size()));
      if (fresh) configs.push_back(next);
      succ[k].push_back(it->second);
    }
  }

  // A pending configuration on a reachable cycle lets Nature keep the play
  // pending forever. Tarjan's SCC algorithm, iterative.
  const int total = static_cast<int>(configs.size());
  std::vector<int> low(total, -1), num(total, -1), stack;
  std::vector<bool> on_stack(total, false);
  int counter = 0;
  for (int root = 0; root < total; ++root) {
    if (num[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> work{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, edge] = work.back();
      if (edge < succ[v].size()) {
        const int u = succ[v][edge++];
        if (num[u] < 0) {
          num[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = true;
          work.emplace_back(u, 0);
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], num[u]);
        }
        continue;
      }
      const int done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      if (low[done] != num[done]) continue;
      std::vector<int> scc;
      int u;
      do {
        u = stack.back();
        stack.pop_back();
        on_stack[u] = false;
        scc.push_back(u);
      } while (u != done);
      const bool cyclic = scc.size() > 1 || std::count(succ[done].begin(), succ[done].end(), done);
      if (!cyclic) continue;
      for (int x : scc)
        if (w.is_pending(configs[x][n + 1])) return false;
    }
  }
  return true;
}

NotStateMonitoredError::NotStateMonitoredError(StateMonitoringCounterexample cex)
    : Error(ErrorKind::NotStateMonitored,
            "player " + std::to_string(cex.player) +
                " cannot tell apart two histories ending in different states"),
      cex_(std::move(cex)) {}

RevelationGame build_revelation_game(const Arena& arena, const MonitorAutomaton& mon) {
  if (auto cex = check_perfect_state_monitoring(arena)) throw NotStateMonitoredError(*cex);
  RevelationGame rev;
  rev.base = arena;
  rev.monitor = mon;
  for (PlayerId i = 0; i < arena.num_players(); ++i) rev.candidates.push_back(i);
  return rev;
}

std::vector<NatureMove> nature_moves(const RevelationGame& rev, int component,
                                     ActionId intended) {
  const PlayerId k = rev.candidates.at(component);
  std::vector<NatureMove> moves{{false, intended}};
  for (ActionId c = 0; c < static_cast<ActionId>(rev.base.actions(k).size()); ++c)
    if (c != intended) moves.push_back({true, c});
  return moves;
}

}  // namespace devdet
