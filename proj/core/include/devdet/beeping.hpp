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

#include <utility>
#include <vector>

#include "devdet/arena.hpp"

namespace devdet {

/// Simple undirected graph on vertices 0..n-1.
struct NetworkGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Throws InvalidArgument on self-loops, repeated edges, bad endpoints or n < 2.
void validate_graph(const NetworkGraph& g);

inline constexpr int kDefaultBeepingNodeCap = 12;

inline constexpr const char* kSilent = "silent";
inline constexpr const char* kBeep = "beep";

/// Synchronous beeping network with one global state. Every vertex is a
/// player choosing silent or beep; a silent vertex observes whether some
/// neighbour beeped ("silent/heard" vs "silent/quiet"), a beeping vertex
/// only observes its own beep.
Arena beeping_arena(const NetworkGraph& g, int max_nodes = kDefaultBeepingNodeCap);

/// Safety monitor rejecting any round in which more than num/den of the
/// vertices beep.
MonitorAutomaton fraction_monitor(const Arena& arena, const NetworkGraph& g, int num, int den);

std::vector<int> articulation_points(const NetworkGraph& g);
bool connected(const NetworkGraph& g);
// Connected with no articulation point; a single edge qualifies.
bool two_connected(const NetworkGraph& g);

}  // namespace devdet
