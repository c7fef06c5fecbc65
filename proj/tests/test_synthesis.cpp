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

#include <sstream>

#include "doctest.h"
#include "devdet/beeping.hpp"
#include "devdet/json_io.hpp"
#include "devdet/synthesis.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace devdet;
using namespace devdet::testing;

namespace {

SynthesisOptions small_options() {
  SynthesisOptions opts;
  opts.max_deadline = 4;
  opts.cap = 200'000;
  opts.refute_budget = 20'000;
  return opts;
}

}  // namespace

TEST_CASE("deadline schedule") {
  SynthesisOptions opts;
  CHECK(deadline_schedule(opts) == std::vector<int>{1, 2, 4, 8});
  opts.max_deadline = 5;
  CHECK(deadline_schedule(opts) == std::vector<int>{1, 2, 4, 5});
  opts.max_deadline = 1;
  CHECK(deadline_schedule(opts) == std::vector<int>{1});
  opts.deadline = 3;
  CHECK(deadline_schedule(opts) == std::vector<int>{3});
  opts.deadline = 0;
  opts.max_deadline = 0;
  CHECK(error_kind([&] { deadline_schedule(opts); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("match2 is solved and certified") {
  const Arena a = match2();
  const MonitorAutomaton mon = trivial_monitor(a);
  std::ostringstream log;
  SynthesisOptions opts = small_options();
  opts.log = &log;
  opts.verbosity = 1;
  const SynthesisResult r = synthesize(a, mon, opts);
  REQUIRE(r.status == SynthesisStatus::Solved);
  REQUIRE(r.solution);
  CHECK(r.deadline == 1);
  CHECK(log.str().find("deadline 1") != std::string::npos);
  CHECK(validate_profile(a, r.solution->profile).empty());
  CHECK(certify(a, mon, *r.solution).pass());
  const RevelationGame rev = build_revelation_game(a, mon);
  CHECK(write_profile(a, distribute(r.solution->certificate, rev)) ==
        write_profile(a, r.solution->profile));

  const ExposureGame g = build_exposure_game(a, mon);
  CHECK(exposure_wins(g, strategy_to_exposure(g.arena, r.solution->profile).profile));
}

TEST_CASE("every solution of the match2 family certifies") {
  int solved = 0;
  for (const Instance& x : match2_family()) {
    const SynthesisResult r = synthesize(x.arena, x.monitor, small_options());
    if (r.status != SynthesisStatus::Solved) continue;
    ++solved;
    const VerifierReport v = certify(x.arena, x.monitor, *r.solution);
    CHECK_MESSAGE(v.pass(), x.name);
  }
  CHECK(solved >= 3);
}

TEST_CASE("unnoticeable corruption is unrealizable") {
  const Arena a = parse_arena(read_data("match2-noflag.json"));
  const MonitorAutomaton mon = trivial_monitor(a);
  const SynthesisResult r = synthesize(a, mon, small_options());
  CHECK(r.status == SynthesisStatus::Unrealizable);
  CHECK_FALSE(r.solution);
  REQUIRE(r.refutation);
  CHECK(r.refutation->horizon == 1);
  CHECK(r.refutation->candidates.size() == 1);

  // The full game agrees without the shortcut.
  SynthesisOptions full = small_options();
  full.refute = false;
  const SynthesisResult s = synthesize(a, mon, full);
  CHECK(s.status == SynthesisStatus::Unrealizable);
  CHECK_FALSE(s.refutation);
  CHECK(s.deadline == 4);
}

TEST_CASE("a cut vertex hides its neighbours") {
  const NetworkGraph path = parse_graph(read_data("path3.json"));
  CHECK_FALSE(two_connected(path));
  const Arena a = beeping_arena(path);
  const SynthesisResult r = synthesize(a, trivial_monitor(a), small_options());
  CHECK(r.status == SynthesisStatus::Unrealizable);
  REQUIRE(r.refutation);
  CHECK(r.refutation->candidates == std::vector<PlayerId>{0, 2});
}

TEST_CASE("a cut vertex can relay a fake deviation") {
  // The centre of a star copies what it would do after hearing leaf 1.
  const Arena a = beeping_arena({4, {{0, 1}, {0, 2}, {0, 3}}});
  SynthesisOptions opts = small_options();
  opts.max_deadline = 6;
  const SynthesisResult r = synthesize(a, trivial_monitor(a), opts);
  CHECK(r.status == SynthesisStatus::Unrealizable);
  REQUIRE(r.refutation);
  CHECK(r.refutation->horizon == 0);
  CHECK(r.refutation->candidates.size() == 2);
}

TEST_CASE("full information is not refuted") {
  const Arena a = match3();
  const RevelationGame rev = build_revelation_game(a, trivial_monitor(a));
  SynthesisOptions opts = small_options();
  CHECK_FALSE(find_refutation(rev, opts).has_value());
}

TEST_CASE("refutations never contradict the full game") {
  Rng rng(41);
  std::vector<Instance> corpus;
  corpus.push_back({"match3", match3(), trivial_monitor(match3())});
  for (int k = 0; k < 40; ++k) {
    Arena a = random_arena(rng, 3, 1 + k % 2, 2, true);
    MonitorAutomaton mon = random_monitor(rng, a, k % 3 ? MonitorKind::Safety : MonitorKind::Reachability, 2);
    corpus.push_back({"random3/" + std::to_string(k), std::move(a), std::move(mon)});
  }
  int solved = 0;
  for (const Instance& x : corpus) {
    SynthesisOptions full = small_options();
    full.refute = false;
    full.max_deadline = 2;
    full.cap = 20'000;
    std::optional<SynthesisResult> r;
    try {
      r = synthesize(x.arena, x.monitor, full);
    } catch (const Error&) {
      continue;
    }
    if (r->status != SynthesisStatus::Solved) continue;
    ++solved;
    const RevelationGame rev = build_revelation_game(x.arena, x.monitor);
    CHECK_MESSAGE(!find_refutation(rev, full).has_value(), x.name);
  }
  MESSAGE(solved << " solved");
  CHECK(solved >= 3);
}

TEST_CASE("not state monitored") {
  Arena blind({{"s"}, {"x", "y"}}, {{"s"}, {"x", "y"}}, {"x", "y"}, 0);
  for (StateId v = 0; v < 2; ++v)
    for (ActionId c = 0; c < 2; ++c) blind.set_transition(v, Profile{0, c}, {c, {0, c}});
  const SynthesisResult r = synthesize(blind, trivial_monitor(blind));
  CHECK(r.status == SynthesisStatus::NotStateMonitored);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->player == 0);
  CHECK(std::string(to_string(r.status)) == "NotStateMonitored");
}

TEST_CASE("rejected inputs") {
  const Arena a = match2();
  MonitorAutomaton pending = trivial_monitor(a);
  pending.pending = {true};
  CHECK(error_kind([&] { synthesize(a, pending); }) == ErrorKind::InvalidArgument);

  Arena solo({{"a"}}, {{"o"}}, {"v"}, 0);
  solo.set_transition(0, Profile{0}, {0, {0}});
  CHECK(error_kind([&] { synthesize(solo, trivial_monitor(solo)); }) ==
        ErrorKind::InvalidArgument);

  Arena partial({{"a", "b"}, {"a"}}, {{"o"}, {"o"}}, {"v"}, 0);
  partial.set_transition(0, Profile{0, 0}, {0, {0, 0}});
  CHECK(error_kind([&] { synthesize(partial, trivial_monitor(partial)); }) ==
        ErrorKind::InvalidArgument);

  const Arena noflag = parse_arena(read_data("match2-noflag.json"));
  SynthesisOptions tight;
  tight.refute = false;
  tight.deadline = 6;
  tight.cap = 5;
  CHECK(error_kind([&] { synthesize(noflag, trivial_monitor(noflag), tight); }) ==
        ErrorKind::Explosion);
}

TEST_CASE("synthesis is deterministic") {
  for (const Instance& x : random_instances(17, 6)) {
    std::string first, second;
    for (std::string* out : {&first, &second}) {
      const SynthesisResult r = synthesize(x.arena, x.monitor, small_options());
      *out = to_string(r.status);
      if (r.solution) *out += write_profile(x.arena, r.solution->profile);
    }
    CHECK_MESSAGE(first == second, x.name);
  }
}
