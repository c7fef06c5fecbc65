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

#include "devdet/arena.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace devdet {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::UnknownAction: return "UnknownAction";
    case ErrorKind::InvalidHistory: return "InvalidHistory";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::AlphabetClash: return "AlphabetClash";
    case ErrorKind::NotStateMonitored: return "NotStateMonitored";
    case ErrorKind::IllegalAssignment: return "IllegalAssignment";
    case ErrorKind::Explosion: return "Explosion";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::NonUniqueSuccessor: return "NonUniqueSuccessor";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::TooFewPlayers: return "TooFewPlayers";
    case ViolationKind::EmptyAlphabet: return "EmptyAlphabet";
    case ViolationKind::BadInitial: return "BadInitial";
    case ViolationKind::TotalityViolation: return "TotalityViolation";
    case ViolationKind::BadTarget: return "BadTarget";
    case ViolationKind::UnknownObservation: return "UnknownObservation";
    case ViolationKind::OwnActionMismatch: return "OwnActionMismatch";
    case ViolationKind::MonitorNotTotal: return "MonitorNotTotal";
    case ViolationKind::MarkedNotAbsorbing: return "MarkedNotAbsorbing";
    case ViolationKind::MachineNotTotal: return "MachineNotTotal";
    case ViolationKind::SelfAccusation: return "SelfAccusation";
  }
  return "Violation";
}

std::string_view own_action_component(std::string_view observation) {
  return observation.substr(0, observation.find('/'));
}

Arena::Arena(std::vector<std::vector<std::string>> actions,
             std::vector<std::vector<std::string>> observations,
             std::vector<std::string> states, StateId initial)
    : actions_(std::move(actions)),
      observations_(std::move(observations)),
      states_(std::move(states)),
      initial_(initial) {
  if (observations_.size() != actions_.size())
    throw Error(ErrorKind::InvalidArgument, "observation alphabets do not match players");
  num_profiles_ = 1;
  stride_.assign(actions_.size(), 1);
  for (int i = num_players() - 1; i >= 0; --i) {
    stride_[i] = num_profiles_;
    num_profiles_ *= std::max<std::size_t>(actions_[i].size(), 1);
  }
  table_.assign(states_.size() * num_profiles_, std::nullopt);
}

namespace {

template <typename Names>
std::optional<int> find_name(const Names& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

}  // namespace

std::optional<StateId> Arena::find_state(std::string_view name) const {
  return find_name(states_, name);
}
std::optional<ActionId> Arena::find_action(PlayerId i, std::string_view name) const {
  return find_name(actions_.at(i), name);
}
std::optional<ObsId> Arena::find_observation(PlayerId i, std::string_view name) const {
  return find_name(observations_.at(i), name);
}

bool Arena::is_profile(std::span<const ActionId> profile) const {
  if (profile.size() != actions_.size()) return false;
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (profile[i] < 0 || static_cast<std::size_t>(profile[i]) >= actions_[i].size())
      return false;
  return true;
}

std::size_t Arena::profile_index(std::span<const ActionId> profile) const {
  if (!is_profile(profile)) throw Error(ErrorKind::UnknownAction, "action profile outside alphabets");
  std::size_t index = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) index += stride_[i] * profile[i];
  return index;
}

Profile Arena::profile_at(std::size_t index) const {
  Profile p(actions_.size());
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    p[i] = static_cast<ActionId>(index / stride_[i]);
    index %= stride_[i];
  }
  return p;
}

void Arena::set_transition(StateId from, std::span<const ActionId> profile, Transition t) {
  if (from < 0 || from >= num_states()) throw Error(ErrorKind::UnknownState, "source state");
  table_[static_cast<std::size_t>(from) * num_profiles_ + profile_index(profile)] = std::move(t);
}

void Arena::erase_transition(StateId from, std::span<const ActionId> profile) {
  if (from < 0 || from >= num_states()) throw Error(ErrorKind::UnknownState, "source state");
  table_[static_cast<std::size_t>(from) * num_profiles_ + profile_index(profile)].reset();
}

const Transition& Arena::step(StateId from, std::size_t profile_index) const {
  if (from < 0 || from >= num_states())
    throw Error(ErrorKind::UnknownState, "state " + std::to_string(from));
  if (profile_index >= num_profiles_) throw Error(ErrorKind::UnknownAction, "profile index");
  const auto& r = row(from, profile_index);
  if (!r) throw Error(ErrorKind::MalformedInput, "missing transition row");
  return *r;
}

const Transition& Arena::step(StateId from, std::span<const ActionId> profile) const {
  if (from < 0 || from >= num_states())
    throw Error(ErrorKind::UnknownState, "state " + std::to_string(from));
  return step(from, profile_index(profile));
}

namespace {

std::string row_name(const Arena& arena, StateId v, std::size_t p) {
  std::string s = arena.state_name(v) + " (";
  Profile prof = arena.profile_at(p);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (i) s += ",";
    s += arena.actions(static_cast<PlayerId>(i))[prof[i]];
  }
  return s + ")";
}

}  // namespace

ValidationReport validate_arena(const Arena& arena) {
  ValidationReport report;
  if (arena.num_players() < 2)
    report.push_back({ViolationKind::TooFewPlayers, std::to_string(arena.num_players())});
  bool empty = arena.num_states() == 0;
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    if (arena.actions(i).empty())
      report.push_back({ViolationKind::EmptyAlphabet, "actions of player " + std::to_string(i)});
    if (arena.observations(i).empty())
      report.push_back(
          {ViolationKind::EmptyAlphabet, "observations of player " + std::to_string(i)});
    empty = empty || arena.actions(i).empty();
  }
  if (arena.num_states() == 0) report.push_back({ViolationKind::EmptyAlphabet, "states"});
  if (arena.initial() < 0 || arena.initial() >= arena.num_states())
    report.push_back({ViolationKind::BadInitial, std::to_string(arena.initial())});
  if (empty) return report;

  for (StateId v = 0; v < arena.num_states(); ++v) {
    for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
      const auto& r = arena.row(v, p);
      if (!r) {
        report.push_back({ViolationKind::TotalityViolation, row_name(arena, v, p)});
        continue;
      }
      if (r->target < 0 || r->target >= arena.num_states())
        report.push_back({ViolationKind::BadTarget, row_name(arena, v, p)});
      if (r->obs.size() != static_cast<std::size_t>(arena.num_players())) {
        report.push_back({ViolationKind::UnknownObservation, row_name(arena, v, p)});
        continue;
      }
      Profile prof = arena.profile_at(p);
      for (PlayerId i = 0; i < arena.num_players(); ++i) {
        ObsId b = r->obs[i];
        if (b < 0 || static_cast<std::size_t>(b) >= arena.observations(i).size()) {
          report.push_back({ViolationKind::UnknownObservation,
                            row_name(arena, v, p) + " player " + std::to_string(i)});
          continue;
        }
        if (own_action_component(arena.observations(i)[b]) != arena.actions(i)[prof[i]])
          report.push_back({ViolationKind::OwnActionMismatch,
                            row_name(arena, v, p) + " player " + std::to_string(i)});
      }
    }
  }
  return report;
}

void check_history(const Arena& arena, const History& h) {
  if (h.states.size() != h.profiles.size() + 1)
    throw Error(ErrorKind::InvalidHistory, "states and profiles out of step");
  if (h.states.front() != arena.initial())
    throw Error(ErrorKind::InvalidHistory, "does not start at the initial state");
  for (std::size_t t = 0; t < h.profiles.size(); ++t) {
    if (!arena.is_profile(h.profiles[t]))
      throw Error(ErrorKind::InvalidHistory, "unknown action at stage " + std::to_string(t + 1));
    const auto& r = arena.row(h.states[t], arena.profile_index(h.profiles[t]));
    if (!r || r->target != h.states[t + 1])
      throw Error(ErrorKind::InvalidHistory, "stage " + std::to_string(t + 1) +
                                                 " does not follow the transition table");
  }
}

std::vector<ObsId> observation_trace(const Arena& arena, const History& h, PlayerId i) {
  if (h.states.empty() && h.profiles.empty()) return {};
  check_history(arena, h);
  std::vector<ObsId> trace;
  trace.reserve(h.profiles.size());
  for (std::size_t t = 0; t < h.profiles.size(); ++t)
    trace.push_back(arena.step(h.states[t], h.profiles[t]).obs.at(i));
  return trace;
}

bool indistinguishable(const Arena& arena, const History& h1, const History& h2,
                       PlayerId i) {
  return observation_trace(arena, h1, i) == observation_trace(arena, h2, i);
}

MonitorAutomaton trivial_monitor(const Arena& arena, MonitorKind kind) {
  MonitorAutomaton mon;
  mon.kind = kind;
  mon.states = {"q0"};
  mon.arena_states = arena.num_states();
  mon.arena_profiles = arena.num_profiles();
  mon.delta.assign(mon.num_symbols(), 0);
  mon.marked = {kind == MonitorKind::Reachability};
  return mon;
}

ValidationReport validate_monitor(const Arena& arena, const MonitorAutomaton& mon) {
  ValidationReport report;
  const int nq = static_cast<int>(mon.states.size());
  if (nq == 0 || mon.initial < 0 || mon.initial >= nq)
    report.push_back({ViolationKind::BadInitial, "monitor initial state"});
  if (mon.arena_states != arena.num_states() || mon.arena_profiles != arena.num_profiles() ||
      mon.delta.size() != mon.num_symbols() * nq || mon.marked.size() != mon.states.size() ||
      (!mon.pending.empty() && mon.pending.size() != mon.states.size())) {
    report.push_back({ViolationKind::MonitorNotTotal, "monitor alphabet does not match arena"});
    return report;
  }
  for (int q = 0; q < nq; ++q) {
    for (std::size_t s = 0; s < mon.num_symbols(); ++s) {
      int to = mon.delta[q * mon.num_symbols() + s];
      if (to < 0 || to >= nq) {
        report.push_back({ViolationKind::MonitorNotTotal,
                          mon.states[q] + " on symbol " + std::to_string(s)});
      } else if (mon.marked[q] && to != q) {
        report.push_back({ViolationKind::MarkedNotAbsorbing, mon.states[q]});
        break;
      }
    }
  }
  return report;
}

Verdict monitor_verdict(const Arena& arena, const MonitorAutomaton& mon, const Lasso& lasso) {
  if (mon.arena_states != arena.num_states() || mon.arena_profiles != arena.num_profiles() ||
      mon.delta.size() != mon.num_symbols() * mon.states.size())
    throw Error(ErrorKind::AlphabetMismatch, "monitor does not read this arena's symbols");
  if (lasso.cycle.profiles.empty())
    throw Error(ErrorKind::InvalidHistory, "lasso cycle is empty");

  bool marked_seen = mon.marked[mon.initial];
  auto run = [&](int q, const History& h) {
    for (std::size_t t = 0; t < h.profiles.size(); ++t) {
      q = mon.next(q, h.states[t], arena.profile_index(h.profiles[t]));
      marked_seen = marked_seen || mon.marked[q];
    }
    return q;
  };
  int q = run(mon.initial, lasso.prefix);

  // Iterate the cycle until the monitor state at its start repeats; the
  // states visited from the first repetition on are the ones seen forever.
  std::map<int, std::size_t> first_start;
  std::vector<int> starts;
  while (!first_start.count(q)) {
    first_start[q] = starts.size();
    starts.push_back(q);
    q = run(q, lasso.cycle);
  }
  bool pending_forever = false;
  for (std::size_t k = first_start[q]; k < starts.size(); ++k) {
    int r = starts[k];
    pending_forever = pending_forever || mon.is_pending(r);
    for (std::size_t t = 0; t < lasso.cycle.profiles.size(); ++t) {
      r = mon.next(r, lasso.cycle.states[t], arena.profile_index(lasso.cycle.profiles[t]));
      pending_forever = pending_forever || mon.is_pending(r);
    }
  }
  if (pending_forever) return Verdict::Rejecting;
  bool accept = mon.kind == MonitorKind::Safety ? !marked_seen : marked_seen;
  return accept ? Verdict::Accepting : Verdict::Rejecting;
}

ValidationReport validate_profile(const Arena& arena, const StrategyProfile& profile) {
  ValidationReport report;
  if (profile.size() != static_cast<std::size_t>(arena.num_players())) {
    report.push_back({ViolationKind::MachineNotTotal, "profile size differs from player count"});
    return report;
  }
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    const auto& m = profile[i];
    const std::string who = "player " + std::to_string(i);
    const int nb = static_cast<int>(arena.observations(i).size());
    if (m.memory.empty() || m.initial < 0 || m.initial >= m.size() || m.num_observations != nb ||
        m.update.size() != static_cast<std::size_t>(m.size()) * nb ||
        m.output.size() != m.memory.size() ||
        (!m.accusation.empty() && m.accusation.size() != m.memory.size())) {
      report.push_back({ViolationKind::MachineNotTotal, who});
      continue;
    }
    for (int u : m.update)
      if (u < 0 || u >= m.size()) {
        report.push_back({ViolationKind::MachineNotTotal, who + " update"});
        break;
      }
    for (ActionId a : m.output)
      if (a < 0 || static_cast<std::size_t>(a) >= arena.actions(i).size()) {
        report.push_back({ViolationKind::MachineNotTotal, who + " output"});
        break;
      }
    for (const auto& acc : m.accusation) {
      if (!acc) continue;
      if (*acc == i) report.push_back({ViolationKind::SelfAccusation, who});
      else if (*acc < 0 || *acc >= arena.num_players())
        report.push_back({ViolationKind::MachineNotTotal, who + " accusation"});
    }
  }
  return report;
}

Lasso outcome_lasso(const Arena& arena, const StrategyProfile& profile) {
  const int n = arena.num_players();
  std::vector<int> config(n + 1);
  config[0] = arena.initial();
  for (int i = 0; i < n; ++i) config[i + 1] = profile[i].initial;

  std::map<std::vector<int>, std::size_t> seen;
  History play;
  play.states.push_back(arena.initial());
  while (!seen.count(config)) {
    seen.emplace(config, play.profiles.size());
    Profile a(n);
    for (int i = 0; i < n; ++i) a[i] = profile[i].output[config[i + 1]];
    const Transition& t = arena.step(config[0], a);
    config[0] = t.target;
    for (int i = 0; i < n; ++i) config[i + 1] = profile[i].next(config[i + 1], t.obs[i]);
    play.profiles.push_back(std::move(a));
    play.states.push_back(t.target);
  }
  const std::size_t start = seen.at(config);
  Lasso lasso;
  lasso.prefix.states.assign(play.states.begin(), play.states.begin() + start + 1);
  lasso.prefix.profiles.assign(play.profiles.begin(), play.profiles.begin() + start);
  lasso.cycle.states.assign(play.states.begin() + start, play.states.end());
  lasso.cycle.profiles.assign(play.profiles.begin() + start, play.profiles.end());
  return lasso;
}

std::optional<StateMonitoringCounterexample> check_perfect_state_monitoring(
    const Arena& arena) {
  const int nv = arena.num_states();
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    // Per state: observation of player i -> list of (profile, target).
    std::vector<std::map<ObsId, std::vector<std::pair<std::size_t, StateId>>>> by_obs(nv);
    for (StateId v = 0; v < nv; ++v)
      for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
        const auto& r = arena.row(v, p);
        if (r) by_obs[v][r->obs[i]].emplace_back(p, r->target);
      }

    struct Parent {
      int pair = -1;
      std::size_t p1 = 0, p2 = 0;
    };
    std::vector<Parent> parent(static_cast<std::size_t>(nv) * nv);
    std::vector<bool> seen(parent.size(), false);
    std::deque<int> queue;
    const int root = arena.initial() * nv + arena.initial();
    seen[root] = true;
    queue.push_back(root);
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      const StateId u = cur / nv, w = cur % nv;
      if (u != w) {
        StateMonitoringCounterexample cex;
        cex.player = i;
        std::vector<std::pair<std::size_t, std::size_t>> steps;
        std::vector<int> pairs{cur};
        for (int x = cur; parent[x].pair >= 0; x = parent[x].pair) {
          steps.emplace_back(parent[x].p1, parent[x].p2);
          pairs.push_back(parent[x].pair);
        }
        std::reverse(steps.begin(), steps.end());
        std::reverse(pairs.begin(), pairs.end());
        for (int x : pairs) {
          cex.first.states.push_back(x / nv);
          cex.second.states.push_back(x % nv);
        }
        for (auto [p1, p2] : steps) {
          cex.first.profiles.push_back(arena.profile_at(p1));
          cex.second.profiles.push_back(arena.profile_at(p2));
        }
        return cex;
      }
      for (const auto& [b, left] : by_obs[u]) {
        auto it = by_obs[w].find(b);
        if (it == by_obs[w].end()) continue;
        for (auto [p1, t1] : left)
          for (auto [p2, t2] : it->second) {
            const int next = t1 * nv + t2;
            if (seen[next]) continue;
            seen[next] = true;
            parent[next] = {cur, p1, p2};
            queue.push_back(next);
          }
      }
    }
  }
  return std::nullopt;
}

}  // namespace devdet
