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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devdet/error.hpp"

namespace devdet {

// Dense indices into the arena's alphabets.
using PlayerId = int;
using StateId = int;
using ActionId = int;
using ObsId = int;

/// One action per player, indexed by PlayerId.
using Profile = std::vector<ActionId>;

/// Returns the part of an observation symbol that names the observer's own
/// action: everything before the first '/', or the whole symbol.
std::string_view own_action_component(std::string_view observation);

struct Transition {
  StateId target = -1;
  std::vector<ObsId> obs;  // one observation per player

  bool operator==(const Transition&) const = default;
};

/// A finite game: players, per-player action and observation alphabets,
/// opaque global states and a deterministic transition table
/// (state, action profile) -> (successor, observation profile).
///
/// Profiles are numbered in mixed radix with player 0 most significant, so
/// enumerating indices 0..num_profiles()-1 walks profiles lexicographically.
class Arena {
 public:
  Arena() = default;
  Arena(std::vector<std::vector<std::string>> actions,
        std::vector<std::vector<std::string>> observations,
        std::vector<std::string> states, StateId initial);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_states() const { return static_cast<int>(states_.size()); }
  StateId initial() const { return initial_; }

  const std::vector<std::string>& actions(PlayerId i) const { return actions_.at(i); }
  const std::vector<std::string>& observations(PlayerId i) const {
    return observations_.at(i);
  }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateId v) const { return states_.at(v); }

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<ActionId> find_action(PlayerId i, std::string_view name) const;
  std::optional<ObsId> find_observation(PlayerId i, std::string_view name) const;

  std::size_t num_profiles() const { return num_profiles_; }
  std::size_t profile_index(std::span<const ActionId> profile) const;
  Profile profile_at(std::size_t index) const;
  bool is_profile(std::span<const ActionId> profile) const;

  void set_transition(StateId from, std::span<const ActionId> profile, Transition t);
  void erase_transition(StateId from, std::span<const ActionId> profile);
  const std::optional<Transition>& row(StateId from, std::size_t profile_index) const {
    return table_[static_cast<std::size_t>(from) * num_profiles_ + profile_index];
  }

  /// The transition-table entry; throws UnknownState / UnknownAction for inputs
  /// outside the alphabets and MalformedInput for a missing row.
  const Transition& step(StateId from, std::span<const ActionId> profile) const;
  const Transition& step(StateId from, std::size_t profile_index) const;

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<std::string>> observations_;
  std::vector<std::string> states_;
  StateId initial_ = 0;
  std::size_t num_profiles_ = 0;
  std::vector<std::size_t> stride_;
  std::vector<std::optional<Transition>> table_;
};

enum class ViolationKind {
  TooFewPlayers,
  EmptyAlphabet,
  BadInitial,
  TotalityViolation,
  BadTarget,
  UnknownObservation,
  OwnActionMismatch,
  MonitorNotTotal,
  MarkedNotAbsorbing,
  MachineNotTotal,
  SelfAccusation,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string where;
};

using ValidationReport = std::vector<Violation>;

/// Empty iff every structural invariant holds.
ValidationReport validate_arena(const Arena& arena);

/// v0 a1 v1 ... at vt; states.size() == profiles.size() + 1.
struct History {
  std::vector<StateId> states;
  std::vector<Profile> profiles;

  std::size_t length() const { return profiles.size(); }
  bool operator==(const History&) const = default;
};

/// Throws InvalidHistory unless h starts at v0 and follows the table.
void check_history(const Arena& arena, const History& h);

std::vector<ObsId> observation_trace(const Arena& arena, const History& h, PlayerId i);

bool indistinguishable(const Arena& arena, const History& h1, const History& h2,
                       PlayerId i);

/// Ultimately periodic play: prefix ends where the cycle starts, and the cycle
/// returns to its own first state.
struct Lasso {
  History prefix;
  History cycle;
};

enum class MonitorKind { Safety, Reachability };

/// Deterministic automaton over (source state, action profile) symbols.
///
/// Safety: marked states are rejecting sinks. Reachability: marked states are
/// accepting and absorbing. The optional pending set adds a co-Buchi
/// component: a play whose monitor run visits a pending state infinitely often
/// is rejected regardless of kind.
struct MonitorAutomaton {
  MonitorKind kind = MonitorKind::Safety;
  std::vector<std::string> states;
  int initial = 0;
  int arena_states = 0;
  std::size_t arena_profiles = 0;
  std::vector<int> delta;  // [q * num_symbols() + symbol]
  std::vector<bool> marked;
  std::vector<bool> pending;

  std::size_t num_symbols() const {
    return static_cast<std::size_t>(arena_states) * arena_profiles;
  }
  std::size_t symbol(StateId v, std::size_t profile_index) const {
    return static_cast<std::size_t>(v) * arena_profiles + profile_index;
  }
  int next(int q, StateId v, std::size_t profile_index) const {
    return delta[static_cast<std::size_t>(q) * num_symbols() + symbol(v, profile_index)];
  }
  bool is_pending(int q) const { return !pending.empty() && pending[q]; }
};

/// Monitor with a single unmarked state looping on every symbol.
MonitorAutomaton trivial_monitor(const Arena& arena, MonitorKind kind = MonitorKind::Safety);

ValidationReport validate_monitor(const Arena& arena, const MonitorAutomaton& mon);

enum class Verdict { Accepting, Rejecting };

/// Throws AlphabetMismatch when the monitor was built for another alphabet.
Verdict monitor_verdict(const Arena& arena, const MonitorAutomaton& mon, const Lasso& lasso);

/// Finite-state strategy of one player: a Mealy-style transducer reading that
/// player's observations, with an optional accusation output per memory state.
struct StrategyMachine {
  std::vector<std::string> memory;
  int initial = 0;
  int num_observations = 0;
  std::vector<int> update;         // [m * num_observations + b]
  std::vector<ActionId> output;    // [m]
  std::vector<std::optional<PlayerId>> accusation;  // [m]

  int size() const { return static_cast<int>(memory.size()); }
  int next(int m, ObsId b) const {
    return update[static_cast<std::size_t>(m) * num_observations + b];
  }
  std::optional<PlayerId> accuses(int m) const {
    return accusation.empty() ? std::nullopt : accusation[m];
  }
};

using StrategyProfile = std::vector<StrategyMachine>;

ValidationReport validate_profile(const Arena& arena, const StrategyProfile& profile);

/// Simulates the joint configuration (state, memories) until it repeats.
Lasso outcome_lasso(const Arena& arena, const StrategyProfile& profile);

struct StateMonitoringCounterexample {
  History first;
  History second;
  PlayerId player = 0;
};

/// nullopt iff every pair of histories with equal observation traces for some
/// player ends in the same global state.
std::optional<StateMonitoringCounterexample> check_perfect_state_monitoring(
    const Arena& arena);

}  // namespace devdet
