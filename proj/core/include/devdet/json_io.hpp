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

#include <string>
#include <string_view>

#include "devdet/arena.hpp"
#include "devdet/beeping.hpp"
#include "devdet/exposure.hpp"
#include "devdet/synthesis.hpp"
#include "devdet/verifier.hpp"

namespace devdet {

// Readers throw Error(MalformedInput) naming the line and column of a syntax
// error, or the JSON pointer of the offending field. Writers sort object keys
// and indent by two spaces, so equal values give identical text.

Arena parse_arena(std::string_view text);
std::string write_arena(const Arena& arena);

/// Rows may be omitted when "default" is "stay": missing symbols self-loop.
MonitorAutomaton parse_monitor(std::string_view text, const Arena& arena);
std::string write_monitor(const Arena& arena, const MonitorAutomaton& mon);

/// {"strategies": [machine per player]}.
StrategyProfile parse_profile(std::string_view text, const Arena& arena);
std::string write_profile(const Arena& arena, const StrategyProfile& profile);

NetworkGraph parse_graph(std::string_view text);
std::string write_graph(const NetworkGraph& g);

/// {"base": arena, "monitor": monitor}.
std::string write_revelation(const RevelationGame& rev);

std::string write_certificate(const RevelationGame& rev, const Certificate& cert);

std::string write_report(const Arena& arena, const VerifierReport& report);

}  // namespace devdet
