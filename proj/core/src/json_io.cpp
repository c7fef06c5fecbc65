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

#include "devdet/json_io.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace devdet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::MalformedInput, (path.empty() ? std::string("/") : path) + ": " + what);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::MalformedInput, "line " + std::to_string(line) + ", column " +
                                               std::to_string(column) + ": invalid JSON");
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string string_of(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

int int_of(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<std::string> strings(const json& j, const std::string& path) {
  std::vector<std::string> out;
  array(j, path);
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(string_of(j[k], path + "/" + std::to_string(k)));
  return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name,
           const std::string& path, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) fail(path, std::string("unknown ") + what + " \"" + name + "\"");
  return static_cast<int>(it - names.begin());
}

Profile profile_of(const Arena& arena, const json& j, const std::string& path) {
  array(j, path);
  if (static_cast<int>(j.size()) != arena.num_players())
    fail(path, "expected " + std::to_string(arena.num_players()) + " actions");
  Profile p;
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    const std::string at = path + "/" + std::to_string(i);
    p.push_back(lookup(arena.actions(i), string_of(j[i], at), at, "action"));
  }
  return p;
}

json profile_names(const Arena& arena, const Profile& p) {
  json out = json::array();
  for (PlayerId i = 0; i < static_cast<PlayerId>(p.size()); ++i)
    out.push_back(arena.actions(i)[p[i]]);
  return out;
}

json arena_json(const Arena& arena) {
  json j;
  j["players"] = arena.num_players();
  j["actions"] = json::array();
  j["observations"] = json::array();
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    j["actions"].push_back(arena.actions(i));
    j["observations"].push_back(arena.observations(i));
  }
  j["states"] = arena.states();
  j["initial"] = arena.state_name(arena.initial());
  j["transitions"] = json::array();
  for (StateId v = 0; v < arena.num_states(); ++v)
    for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
      const auto& row = arena.row(v, p);
      if (!row) continue;
      json obs = json::array();
      for (PlayerId i = 0; i < arena.num_players(); ++i)
        obs.push_back(arena.observations(i)[row->obs[i]]);
      j["transitions"].push_back({{"from", arena.state_name(v)},
                                  {"actions", profile_names(arena, arena.profile_at(p))},
                                  {"to", arena.state_name(row->target)},
                                  {"obs", obs}});
    }
  return j;
}

json monitor_json(const Arena& arena, const MonitorAutomaton& mon) {
  json j;
  j["kind"] = mon.kind == MonitorKind::Safety ? "safety" : "reachability";
  j["states"] = mon.states;
  j["initial"] = mon.states[mon.initial];
  j["marked"] = json::array();
  json pending = json::array();
  for (int q = 0; q < static_cast<int>(mon.states.size()); ++q) {
    if (mon.marked[q]) j["marked"].push_back(mon.states[q]);
    if (mon.is_pending(q)) pending.push_back(mon.states[q]);
  }
  if (!pending.empty()) j["pending"] = pending;
  j["default"] = "stay";
  j["delta"] = json::array();
  for (int q = 0; q < static_cast<int>(mon.states.size()); ++q)
    for (StateId v = 0; v < arena.num_states(); ++v)
      for (std::size_t p = 0; p < arena.num_profiles(); ++p) {
        const int to = mon.next(q, v, p);
        if (to == q) continue;
        j["delta"].push_back(
            {{"from", mon.states[q]},
             {"symbol",
              {{"state", arena.state_name(v)},
               {"actions", profile_names(arena, arena.profile_at(p))}}},
             {"to", mon.states[to]}});
      }
  return j;
}

json steps_json(const Arena& arena, const std::vector<WitnessStep>& steps) {
  json out = json::array();
  for (const auto& s : steps) {
    json step = {{"state", arena.state_name(s.gstate)}, {"memories", s.memories}};
    step["deviator"] = s.deviator >= 0 ? json(s.deviator) : json(nullptr);
    if (!s.realized.empty()) step["actions"] = profile_names(arena, s.realized);
    out.push_back(step);
  }
  return out;
}

json history_json(const Arena& arena, const History& h) {
  json out = json::array();
  for (std::size_t t = 0; t < h.states.size(); ++t) {
    out.push_back(arena.state_name(h.states[t]));
    if (t < h.profiles.size()) out.push_back(profile_names(arena, h.profiles[t]));
  }
  return out;
}

}  // namespace

Arena parse_arena(std::string_view text) {
  const json j = parse_text(text);
  const int players = int_of(field(j, "", "players"), "/players");
  if (players < 1) fail("/players", "expected a positive count");
  std::vector<std::vector<std::string>> actions, observations;
  const json& ja = array(field(j, "", "actions"), "/actions");
  const json& jo = array(field(j, "", "observations"), "/observations");
  if (static_cast<int>(ja.size()) != players) fail("/actions", "one alphabet per player expected");
  if (static_cast<int>(jo.size()) != players)
    fail("/observations", "one alphabet per player expected");
  for (int i = 0; i < players; ++i) {
    actions.push_back(strings(ja[i], "/actions/" + std::to_string(i)));
    observations.push_back(strings(jo[i], "/observations/" + std::to_string(i)));
  }
  const std::vector<std::string> states = strings(field(j, "", "states"), "/states");
  if (std::set(states.begin(), states.end()).size() != states.size())
    fail("/states", "duplicate state name");
  const int initial =
      lookup(states, string_of(field(j, "", "initial"), "/initial"), "/initial", "state");
  Arena arena(actions, observations, states, initial);

  const json& rows = array(field(j, "", "transitions"), "/transitions");
  std::set<std::pair<StateId, std::size_t>> seen;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = "/transitions/" + std::to_string(k);
    const json& r = rows[k];
    const StateId from =
        lookup(states, string_of(field(r, path, "from"), path + "/from"), path + "/from", "state");
    const StateId to =
        lookup(states, string_of(field(r, path, "to"), path + "/to"), path + "/to", "state");
    const Profile p = profile_of(arena, field(r, path, "actions"), path + "/actions");
    const json& obs = array(field(r, path, "obs"), path + "/obs");
    if (static_cast<int>(obs.size()) != players) fail(path + "/obs", "one observation per player expected");
    Transition t{to, {}};
    for (int i = 0; i < players; ++i) {
      const std::string at = path + "/obs/" + std::to_string(i);
      t.obs.push_back(lookup(observations[i], string_of(obs[i], at), at, "observation"));
    }
    if (!seen.insert({from, arena.profile_index(p)}).second) fail(path, "duplicate row");
    arena.set_transition(from, p, t);
  }
  return arena;
}

std::string write_arena(const Arena& arena) { return arena_json(arena).dump(2) + "\n"; }

MonitorAutomaton parse_monitor(std::string_view text, const Arena& arena) {
  const json j = parse_text(text);
  MonitorAutomaton mon;
  const std::string kind = string_of(field(j, "", "kind"), "/kind");
  if (kind == "safety") mon.kind = MonitorKind::Safety;
  else if (kind == "reachability") mon.kind = MonitorKind::Reachability;
  else fail("/kind", "expected \"safety\" or \"reachability\"");
  mon.states = strings(field(j, "", "states"), "/states");
  if (mon.states.empty()) fail("/states", "at least one state expected");
  if (std::set(mon.states.begin(), mon.states.end()).size() != mon.states.size())
    fail("/states", "duplicate state name");
  mon.initial =
      lookup(mon.states, string_of(field(j, "", "initial"), "/initial"), "/initial", "state");
  mon.arena_states = arena.num_states();
  mon.arena_profiles = arena.num_profiles();
  mon.marked.assign(mon.states.size(), false);
  const std::vector<std::string> marked = strings(field(j, "", "marked"), "/marked");
  for (std::size_t k = 0; k < marked.size(); ++k)
    mon.marked[lookup(mon.states, marked[k], "/marked/" + std::to_string(k), "state")] = true;
  if (const json* p = optional_field(j, "pending")) {
    mon.pending.assign(mon.states.size(), false);
    const std::vector<std::string> pending = strings(*p, "/pending");
    for (std::size_t k = 0; k < pending.size(); ++k)
      mon.pending[lookup(mon.states, pending[k], "/pending/" + std::to_string(k), "state")] = true;
  }
  bool stay = false;
  if (const json* d = optional_field(j, "default")) {
    if (string_of(*d, "/default") != "stay") fail("/default", "only \"stay\" is supported");
    stay = true;
  }

  mon.delta.assign(mon.states.size() * mon.num_symbols(), -1);
  const json& rows = array(field(j, "", "delta"), "/delta");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = "/delta/" + std::to_string(k);
    const json& r = rows[k];
    const int from = lookup(mon.states, string_of(field(r, path, "from"), path + "/from"),
                            path + "/from", "state");
    const int to =
        lookup(mon.states, string_of(field(r, path, "to"), path + "/to"), path + "/to", "state");
    const json& sym = field(r, path, "symbol");
    const std::string spath = path + "/symbol";
    const StateId v = lookup(arena.states(), string_of(field(sym, spath, "state"), spath + "/state"),
                             spath + "/state", "arena state");
    const Profile p = profile_of(arena, field(sym, spath, "actions"), spath + "/actions");
    int& cell = mon.delta[from * mon.num_symbols() + mon.symbol(v, arena.profile_index(p))];
    if (cell >= 0) fail(path, "duplicate row");
    cell = to;
  }
  for (std::size_t q = 0; q < mon.states.size(); ++q)
    for (std::size_t s = 0; s < mon.num_symbols(); ++s) {
      int& cell = mon.delta[q * mon.num_symbols() + s];
      if (cell >= 0) continue;
      if (!stay) {
        const Profile p = arena.profile_at(s % mon.arena_profiles);
        std::string actions;
        for (PlayerId i = 0; i < arena.num_players(); ++i)
          actions += (i ? "," : "") + arena.actions(i)[p[i]];
        fail("/delta", "no row for state \"" + mon.states[q] + "\" on (" +
                           arena.state_name(static_cast<StateId>(s / mon.arena_profiles)) + ", [" +
                           actions + "])");
      }
      cell = static_cast<int>(q);
    }
  return mon;
}

std::string write_monitor(const Arena& arena, const MonitorAutomaton& mon) {
  return monitor_json(arena, mon).dump(2) + "\n";
}

StrategyProfile parse_profile(std::string_view text, const Arena& arena) {
  const json j = parse_text(text);
  const json& machines = array(field(j, "", "strategies"), "/strategies");
  if (static_cast<int>(machines.size()) != arena.num_players())
    fail("/strategies", "one machine per player expected");
  StrategyProfile profile;
  for (PlayerId i = 0; i < arena.num_players(); ++i) {
    const std::string base = "/strategies/" + std::to_string(i);
    const json& jm = machines[i];
    StrategyMachine m;
    m.memory = strings(field(jm, base, "memory"), base + "/memory");
    if (m.memory.empty()) fail(base + "/memory", "at least one memory state expected");
    if (std::set(m.memory.begin(), m.memory.end()).size() != m.memory.size())
      fail(base + "/memory", "duplicate memory name");
    m.initial = lookup(m.memory, string_of(field(jm, base, "initial"), base + "/initial"),
                       base + "/initial", "memory state");
    const auto& obs = arena.observations(i);
    m.num_observations = static_cast<int>(obs.size());
    m.update.assign(m.memory.size() * obs.size(), -1);
    const json& upd = array(field(jm, base, "update"), base + "/update");
    for (std::size_t k = 0; k < upd.size(); ++k) {
      const std::string path = base + "/update/" + std::to_string(k);
      const int from = lookup(m.memory, string_of(field(upd[k], path, "from"), path + "/from"),
                              path + "/from", "memory state");
      const int b = lookup(obs, string_of(field(upd[k], path, "obs"), path + "/obs"),
                           path + "/obs", "observation");
      const int to = lookup(m.memory, string_of(field(upd[k], path, "to"), path + "/to"),
                            path + "/to", "memory state");
      int& cell = m.update[from * obs.size() + b];
      if (cell >= 0) fail(path, "duplicate row");
      cell = to;
    }
    for (std::size_t k = 0; k < m.update.size(); ++k)
      if (m.update[k] < 0)
        fail(base + "/update", "no row for memory \"" + m.memory[k / obs.size()] +
                                   "\" on observation \"" + obs[k % obs.size()] + "\"");
    m.output.assign(m.memory.size(), -1);
    const json& out = array(field(jm, base, "output"), base + "/output");
    for (std::size_t k = 0; k < out.size(); ++k) {
      const std::string path = base + "/output/" + std::to_string(k);
      const int st = lookup(m.memory, string_of(field(out[k], path, "state"), path + "/state"),
                            path + "/state", "memory state");
      const int a = lookup(arena.actions(i),
                           string_of(field(out[k], path, "action"), path + "/action"),
                           path + "/action", "action");
      if (m.output[st] >= 0) fail(path, "duplicate row");
      m.output[st] = a;
    }
    for (std::size_t k = 0; k < m.output.size(); ++k)
      if (m.output[k] < 0) fail(base + "/output", "no action for memory \"" + m.memory[k] + "\"");
    if (const json* acc = optional_field(jm, "accuse")) {
      array(*acc, base + "/accuse");
      if (!acc->empty()) m.accusation.assign(m.memory.size(), std::nullopt);
      for (std::size_t k = 0; k < acc->size(); ++k) {
        const std::string path = base + "/accuse/" + std::to_string(k);
        const int st = lookup(m.memory,
                              string_of(field((*acc)[k], path, "state"), path + "/state"),
                              path + "/state", "memory state");
        const int who = int_of(field((*acc)[k], path, "player"), path + "/player");
        if (who < 0 || who >= arena.num_players()) fail(path + "/player", "no such player");
        if (who == i) fail(path + "/player", "a machine cannot accuse its own player");
        if (m.accusation[st]) fail(path, "duplicate row");
        m.accusation[st] = who;
      }
    }
    profile.push_back(std::move(m));
  }
  return profile;
}

std::string write_profile(const Arena& arena, const StrategyProfile& profile) {
  json machines = json::array();
  for (PlayerId i = 0; i < static_cast<PlayerId>(profile.size()); ++i) {
    const StrategyMachine& m = profile[i];
    json jm;
    jm["memory"] = m.memory;
    jm["initial"] = m.memory[m.initial];
    jm["update"] = json::array();
    for (int q = 0; q < m.size(); ++q)
      for (ObsId b = 0; b < m.num_observations; ++b)
        jm["update"].push_back({{"from", m.memory[q]},
                                {"obs", arena.observations(i)[b]},
                                {"to", m.memory[m.next(q, b)]}});
    jm["output"] = json::array();
    for (int q = 0; q < m.size(); ++q)
      jm["output"].push_back({{"state", m.memory[q]}, {"action", arena.actions(i)[m.output[q]]}});
    jm["accuse"] = json::array();
    for (int q = 0; q < m.size(); ++q)
      if (auto who = m.accuses(q)) jm["accuse"].push_back({{"state", m.memory[q]}, {"player", *who}});
    machines.push_back(jm);
  }
  return json{{"strategies", machines}}.dump(2) + "\n";
}

NetworkGraph parse_graph(std::string_view text) {
  const json j = parse_text(text);
  NetworkGraph g;
  g.n = int_of(field(j, "", "n"), "/n");
  const json& edges = array(field(j, "", "edges"), "/edges");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string path = "/edges/" + std::to_string(k);
    const json& e = array(edges[k], path);
    if (e.size() != 2) fail(path, "expected a pair of vertices");
    g.edges.emplace_back(int_of(e[0], path + "/0"), int_of(e[1], path + "/1"));
  }
  try {
    validate_graph(g);
  } catch (const Error& e) {
    fail("/edges", e.what());
  }
  return g;
}

std::string write_graph(const NetworkGraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  return json{{"n", g.n}, {"edges", edges}}.dump(2) + "\n";
}

std::string write_revelation(const RevelationGame& rev) {
  return json{{"base", arena_json(rev.base)}, {"monitor", monitor_json(rev.base, rev.monitor)}}
             .dump(2) +
         "\n";
}

std::string write_certificate(const RevelationGame& rev, const Certificate& cert) {
  const AbstractArena& a = cert.arena;
  const Arena& base = rev.base;
  json structures = json::array();
  for (std::size_t s = 0; s < a.structures.size(); ++s) {
    const EpistemicStructure& u = a.structures[s];
    json nodes = json::array();
    for (const auto& node : u.nodes)
      nodes.push_back({{"component", node.component},
                       {"candidate", rev.candidates[node.component]},
                       {"monitor", rev.monitor.states[node.mon]},
                       {"status", node.silent ? "silent" : "deviated"},
                       {"age", node.age},
                       {"resolved", node.resolved}});
    const StructureLabels& l = a.labels[s];
    const int pos = a.structure_position[s];
    json js = {{"id", s},
               {"state", base.state_name(u.gstate)},
               {"nodes", nodes},
               {"classes", u.classes},
               {"labels",
                {{"silent_safe", l.silent_safe},
                 {"silent_accepted", l.silent_accepted},
                 {"overage", l.overage},
                 {"revealed", l.revealed}}},
               {"expanded", static_cast<bool>(a.expanded[s])},
               {"winning", static_cast<bool>(cert.solution.winning[pos])}};
    const int move = cert.solution.strategy[pos];
    if (a.expanded[s] && cert.solution.winning[pos] && move >= 0)
      js["choice"] = a.payload[a.game.moves(pos)[move]];
    structures.push_back(js);
  }
  json choices = json::array();
  for (std::size_t c = 0; c < a.choices.size(); ++c) {
    const auto& ch = a.choices[c];
    json assignment = json::array();
    for (PlayerId i = 0; i < base.num_players(); ++i) {
      json row = json::array();
      for (ActionId act : ch.assignment.actions[i]) row.push_back(base.actions(i)[act]);
      assignment.push_back(row);
    }
    choices.push_back({{"id", c},
                       {"structure", ch.structure},
                       {"assignment", assignment},
                       {"successors", ch.successors},
                       {"winning", static_cast<bool>(cert.solution.winning[a.choice_position[c]])}});
  }
  json j = {{"deadline", a.deadline},
            {"objective", rev.monitor.kind == MonitorKind::Safety ? "safety" : "reach-and-safe"},
            {"initial", 0},
            {"structures", structures},
            {"choices", choices}};
  return j.dump(2) + "\n";
}

std::string write_report(const Arena& arena, const VerifierReport& r) {
  auto verdict = [](bool pass) { return pass ? "Pass" : "Fail"; };
  json outcome = {{"verdict", verdict(r.outcome.pass)},
                  {"prefix", history_json(arena, r.outcome.outcome.prefix)},
                  {"cycle", history_json(arena, r.outcome.outcome.cycle)}};
  if (!r.outcome.pass) outcome["fault"] = "OutcomeNotInW";
  json detection = {{"verdict", verdict(r.detection.pass)}, {"max_delay", r.detection.max_delay}};
  if (!r.detection.pass) {
    detection["fault"] = "DetectionCycle";
    detection["witness"] = steps_json(arena, r.detection.witness);
  }
  json accusations = {{"verdict", verdict(r.accusations.pass)},
                      {"max_delay", r.accusations.max_delay}};
  if (r.accusations.fault) {
    accusations["fault"] = to_string(*r.accusations.fault);
    accusations["accuser"] = r.accusations.accuser >= 0 ? json(r.accusations.accuser) : json(nullptr);
    accusations["accused"] = r.accusations.accused >= 0 ? json(r.accusations.accused) : json(nullptr);
    accusations["witness"] = steps_json(arena, r.accusations.witness);
  }
  json j = {{"verdict", verdict(r.pass())},
            {"outcome", outcome},
            {"detection", detection},
            {"accusations", accusations},
            {"product_size", r.product_size}};
  return j.dump(2) + "\n";
}

}  // namespace devdet
