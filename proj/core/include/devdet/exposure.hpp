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

#include <optional>
#include <string>
#include <vector>

#include "devdet/arena.hpp"

namespace devdet {

inline constexpr const char* kWinState = "__WIN__";
inline constexpr const char* kLoseState = "__LOSE__";
inline constexpr const char* kAccusePrefix = "accuse:";

/// The base game extended with a Nature player that may corrupt one player's
/// action for good, exposure actions for the coalition, and the sinks WIN and
/// LOSE. Players 0..n-1 keep their ids; Nature is player n.
///
/// Encodings:
///   state (v, local) has id v * (n + 1) + local + 1, local = -1 while Nature
///   is silent; WIN and LOSE follow the product states.
///   coalition action ids: base actions first, then accuse:j for j != i in
///   increasing j.
///   Nature action 0 is "silent", then corrupt:i:c for every i and c in A^i.
///   coalition observation ids: base observations first, then "<x>/sink" and
///   "<x>/corrupted" for every exposure action x.
struct ExposureArena {
  Arena base;
  Arena game;
  PlayerId nature = 0;
  StateId win = 0;
  StateId lose = 0;

  int num_base_players() const { return base.num_players(); }
  StateId state_of(StateId v, int local) const {
    return v * (num_base_players() + 1) + local + 1;
  }
  std::optional<PlayerId> accused(PlayerId i, ActionId a) const;
  ActionId accuse_action(PlayerId i, PlayerId j) const;
  ActionId corrupt_action(PlayerId i, ActionId c) const;
};

/// Exposure game plus the monitor for its winning condition: plays that stay
/// silent and satisfy the base monitor, or plays that reach WIN. The monitor
/// is of Safety kind with LOSE marked and a pending set for the liveness part.
struct ExposureGame {
  ExposureArena arena;
  MonitorAutomaton monitor;
};

inline constexpr std::size_t kDefaultExposureRowCap = 4'000'000;

/// Throws AlphabetClash if the base alphabets use reserved names.
ExposureGame build_exposure_game(const Arena& arena, const MonitorAutomaton& mon,
                                 std::size_t row_cap = kDefaultExposureRowCap);

/// Embeds a base profile: play the base action until the accusation output
/// is defined, then the matching accuse action.
struct ExposureEmbedding {
  StrategyProfile profile;
  std::vector<std::string> warnings;
};
ExposureEmbedding strategy_to_exposure(const ExposureArena& ea, const StrategyProfile& s);

/// Inverse embedding: accuse outputs become accusation annotations.
StrategyProfile strategy_from_exposure(const ExposureArena& ea, const StrategyProfile& s);

/// Exhaustive search of the product of the exposure game, the coalition
/// machines and the winning-condition monitor against every Nature behaviour.
bool exposure_wins(const ExposureGame& game, const StrategyProfile& coalition);

/// Component game k lets Nature stay silent or corrupt player k's action.
/// A positive corruption horizon T restricts first corruptions to the first
/// T rounds; such restricted games only weaken Nature.
struct RevelationGame {
  Arena base;
  MonitorAutomaton monitor;
  std::vector<PlayerId> candidates;
  int corruption_horizon = 0;
  // After corrupting, a deviator only plays actions that some node of the same
  // structure assigns to it as an honest player (any action if none).
  bool mimicking_deviators = false;

  int num_components() const { return static_cast<int>(candidates.size()); }
};

class NotStateMonitoredError : public Error {
 public:
  explicit NotStateMonitoredError(StateMonitoringCounterexample cex);
  const StateMonitoringCounterexample& counterexample() const { return cex_; }

 private:
  StateMonitoringCounterexample cex_;
};

/// Throws NotStateMonitoredError when the arena fails perfect state monitoring.
RevelationGame build_revelation_game(const Arena& arena, const MonitorAutomaton& mon);

struct NatureMove {
  bool corrupt = false;
  ActionId action = 0;  // replacement action when corrupt

  bool operator==(const NatureMove&) const = default;
};

/// Silent plus a corruption to every action of the candidate other than the
/// intended one.
std::vector<NatureMove> nature_moves(const RevelationGame& rev, int component,
                                     ActionId intended);

}  // namespace devdet
