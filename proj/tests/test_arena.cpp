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

#include <map>
#include <set>

#include "doctest.h"
#include "devdet/arena.hpp"
#include "devdet/error.hpp"
#include "support/corpus.hpp"

using namespace devdet;
using namespace devdet::testing;

namespace {

// Two players, two states; player 1 picks and sees the next state, player 0
// sees nothing but its own action.
Arena blind_arena() {
  Arena a({{"a"}, {"a", "b"}}, {{"a/-"}, {"a/s0", "a/s1", "b/s0", "b/s1"}}, {"s0", "s1"}, 0);
  for (StateId v = 0; v < 2; ++v)
    for (ActionId x = 0; x < 2; ++x) a.set_transition(v, Profile{0, x}, Transition{x, {0, 3 * x}});
  return a;
}

History run(const Arena& a, const std::vector<Profile>& profiles) {
  History h;
  h.states.push_back(a.initial());
  for (const Profile& p : profiles) {
    h.profiles.push_back(p);
    h.states.push_back(a.step(h.states.back(), p).target);
  }
  return h;
}

// Marked states seen on prefix + cycle^k, long enough for the monitor to settle.
Verdict unrolled_verdict(const Arena& a, const MonitorAutomaton& mon, const Lasso& l) {
  int q = mon.initial;
  bool marked = mon.marked[q];
  auto feed = [&](const History& h) {
    for (std::size_t t = 0; t < h.profiles.size(); ++t) {
      q = mon.next(q, h.states[t], a.profile_index(h.profiles[t]));
      marked = marked || mon.marked[q];
    }
  };
  feed(l.prefix);
  for (std::size_t k = 0; k <= mon.states.size(); ++k) feed(l.cycle);
  const bool accept = mon.kind == MonitorKind::Safety ? !marked : marked;
  return accept ? Verdict::Accepting : Verdict::Rejecting;
}

}  // namespace

TEST_CASE("profiles index in mixed radix with the last player fastest") {
  Arena a({{"a", "b", "c"}, {"x", "y"}}, {{"o"}, {"o"}}, {"v"}, 0);
  CHECK(a.num_profiles() == 6);
  for (std::size_t p = 0; p < a.num_profiles(); ++p) CHECK(a.profile_index(a.profile_at(p)) == p);
  CHECK(a.profile_index(Profile{1, 0}) == 2);
  CHECK_FALSE(a.is_profile(Profile{3, 0}));
  CHECK_FALSE(a.is_profile(Profile{0}));
}

TEST_CASE("validation reports every structural violation") {
  SUBCASE("complete arena is clean") { CHECK(validate_arena(match2()).empty()); }
  SUBCASE("missing row") {
    Arena a = match2();
    a.erase_transition(0, Profile{0, 1});
    auto r = validate_arena(a);
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == ViolationKind::TotalityViolation);
    CHECK(r[0].where == "v0 (a,b)");
  }
  SUBCASE("observation naming another action") {
    Arena a = match2();
    Transition t = a.step(0, Profile{0, 0});
    t.obs[0] = 2;  // "b/eq" while player 0 played a
    a.set_transition(0, Profile{0, 0}, t);
    auto r = validate_arena(a);
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == ViolationKind::OwnActionMismatch);
  }
  SUBCASE("single player") {
    Arena a({{"a"}}, {{"a"}}, {"v"}, 0);
    a.set_transition(0, Profile{0}, Transition{0, {0}});
    CHECK(validate_arena(a).front().kind == ViolationKind::TooFewPlayers);
  }
  SUBCASE("bad target and initial") {
    Arena a({{"a"}, {"a"}}, {{"a"}, {"a"}}, {"v"}, 3);
    a.set_transition(0, Profile{0, 0}, Transition{5, {0, 0}});
    std::set<ViolationKind> kinds;
    for (const auto& v : validate_arena(a)) kinds.insert(v.kind);
    CHECK(kinds.count(ViolationKind::BadInitial));
    CHECK(kinds.count(ViolationKind::BadTarget));
  }
}

TEST_CASE("own action component is the text before the slash") {
  CHECK(own_action_component("a/eq") == "a");
  CHECK(own_action_component("beep") == "beep");
  CHECK(own_action_component("silent/heard") == "silent");
}

TEST_CASE("histories and observation traces") {
  const Arena a = blind_arena();
  CHECK(validate_arena(a).empty());
  const History h1 = run(a, {{0, 0}, {0, 1}});
  const History h2 = run(a, {{0, 1}, {0, 1}});
  CHECK(h1.states == std::vector<StateId>{0, 0, 1});
  CHECK(observation_trace(a, h1, 1) == std::vector<ObsId>{0, 3});
  CHECK(indistinguishable(a, h1, h2, 0));
  CHECK_FALSE(indistinguishable(a, h1, h2, 1));

  History bad = h1;
  bad.states[1] = 1;
  CHECK_THROWS_AS(check_history(a, bad), Error);
  bad = h1;
  bad.profiles[0] = {0, 2};
  CHECK_THROWS_AS(check_history(a, bad), Error);
}

TEST_CASE("perfect state monitoring against exhaustive history pairs") {
  Rng rng(11);
  for (int round = 0; round < 40; ++round) {
    const bool monitored = round % 2 == 0;
    const Arena a = random_arena(rng, 2, 2, 2, monitored);
    // Oracle: all histories up to length 5, grouped by a player's trace. With
    // two states any violation shows within four rounds.
    bool violated = false;
    for (PlayerId i = 0; i < a.num_players() && !violated; ++i) {
      std::vector<History> level{History{{a.initial()}, {}}};
      for (int len = 0; len < 5 && !violated; ++len) {
        std::vector<History> next;
        for (const History& h : level)
          for (std::size_t p = 0; p < a.num_profiles(); ++p) {
            History g = h;
            g.profiles.push_back(a.profile_at(p));
            g.states.push_back(a.step(h.states.back(), p).target);
            next.push_back(std::move(g));
          }
        std::map<std::vector<ObsId>, StateId> end;
        for (const History& h : next) {
          auto [it, fresh] = end.emplace(observation_trace(a, h, i), h.states.back());
          if (!fresh && it->second != h.states.back()) violated = true;
        }
        level = std::move(next);
      }
    }
    const auto cex = check_perfect_state_monitoring(a);
    CHECK(cex.has_value() == violated);
    if (monitored) CHECK_FALSE(cex.has_value());
    if (cex) {
      CHECK(indistinguishable(a, cex->first, cex->second, cex->player));
      CHECK(cex->first.states.back() != cex->second.states.back());
    }
  }
}

TEST_CASE("counterexample for a blind player") {
  const auto cex = check_perfect_state_monitoring(blind_arena());
  REQUIRE(cex.has_value());
  CHECK(cex->player == 0);
  CHECK(cex->first.length() == 1);
}

TEST_CASE("monitor verdicts") {
  const Arena a = match2();
  const Lasso loop{History{{0}, {}}, History{{0, 0}, {{0, 0}}}};
  CHECK(monitor_verdict(a, trivial_monitor(a), loop) == Verdict::Accepting);
  CHECK(monitor_verdict(a, trivial_monitor(a, MonitorKind::Reachability), loop) ==
        Verdict::Accepting);

  MonitorAutomaton avoid = match2_family()[2].monitor;  // rejects (b,b)
  CHECK(monitor_verdict(a, avoid, loop) == Verdict::Accepting);
  const Lasso bb{History{{0, 0}, {{1, 1}}}, History{{0, 0}, {{0, 0}}}};
  CHECK(monitor_verdict(a, avoid, bb) == Verdict::Rejecting);

  MonitorAutomaton reach = match2_family()[3].monitor;  // accepts after (a,b)
  const Lasso hit{History{{0, 0}, {{0, 1}}}, History{{0, 0}, {{0, 0}}}};
  CHECK(monitor_verdict(a, reach, hit) == Verdict::Accepting);
  CHECK(monitor_verdict(a, reach, loop) == Verdict::Rejecting);

  const Lasso empty{History{{0}, {}}, History{{0}, {}}};
  CHECK_THROWS_AS(monitor_verdict(a, avoid, empty), Error);
}

TEST_CASE("monitor verdicts agree with unrolling on random lassos") {
  Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    const Arena a = random_arena(rng, 2, 2, 2, true);
    const MonitorKind kind = round % 2 ? MonitorKind::Safety : MonitorKind::Reachability;
    const MonitorAutomaton mon = random_monitor(rng, a, kind, 3);
    REQUIRE(validate_monitor(a, mon).empty());
    const StrategyProfile s = random_profile(rng, a, 2, 0);
    const Lasso l = outcome_lasso(a, s);
    CHECK(monitor_verdict(a, mon, l) == unrolled_verdict(a, mon, l));
  }
}

TEST_CASE("outcome lasso follows the machines") {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    const Arena a = random_arena(rng, 3, 3, 2, round % 2);
    const StrategyProfile s = random_profile(rng, a, 2, 0);
    const Lasso l = outcome_lasso(a, s);
    REQUIRE_FALSE(l.cycle.profiles.empty());
    CHECK(l.prefix.states.back() == l.cycle.states.front());
    CHECK(l.cycle.states.back() == l.cycle.states.front());
    // Direct simulation for prefix + two cycles.
    StateId v = a.initial();
    std::vector<int> m;
    for (const auto& machine : s) m.push_back(machine.initial);
    std::vector<Profile> expected;
    const std::size_t len = l.prefix.profiles.size() + 2 * l.cycle.profiles.size();
    for (std::size_t t = 0; t < len; ++t) {
      Profile p;
      for (std::size_t i = 0; i < s.size(); ++i) p.push_back(s[i].output[m[i]]);
      const Transition& tr = a.step(v, p);
      for (std::size_t i = 0; i < s.size(); ++i) m[i] = s[i].next(m[i], tr.obs[i]);
      v = tr.target;
      expected.push_back(p);
    }
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t np = l.prefix.profiles.size();
      const Profile& got =
          t < np ? l.prefix.profiles[t] : l.cycle.profiles[(t - np) % l.cycle.profiles.size()];
      CHECK(got == expected[t]);
    }
  }
}

TEST_CASE("profile validation") {
  const Arena a = match2();
  Rng rng(1);
  StrategyProfile s = random_profile(rng, a, 2, 0);
  CHECK(validate_profile(a, s).empty());
  s[0].accusation = {0, std::nullopt};
  CHECK(validate_profile(a, s).front().kind == ViolationKind::SelfAccusation);
  s[0].accusation.clear();
  s[1].update.pop_back();
  CHECK(validate_profile(a, s).front().kind == ViolationKind::MachineNotTotal);
  s.pop_back();
  CHECK_FALSE(validate_profile(a, s).empty());
}

TEST_CASE("monitor validation") {
  const Arena a = match2();
  MonitorAutomaton mon = match2_family()[2].monitor;
  CHECK(validate_monitor(a, mon).empty());
  mon.delta[mon.num_symbols() + 0] = 0;  // leave the marked state
  CHECK(validate_monitor(a, mon).front().kind == ViolationKind::MarkedNotAbsorbing);
  mon.delta.pop_back();
  CHECK(validate_monitor(a, mon).front().kind == ViolationKind::MonitorNotTotal);
}
