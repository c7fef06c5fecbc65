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

#include <iosfwd>
#include <string>
#include <vector>

namespace devdet::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFail = 1;
inline constexpr int kUnrealizable = 2;
inline constexpr int kNotTwoConnected = 2;
inline constexpr int kNotStateMonitored = 3;
inline constexpr int kExplosion = 4;
inline constexpr int kUsage = 64;
inline constexpr int kMalformed = 65;
inline constexpr int kNoInput = 66;
inline constexpr int kCantCreate = 73;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Graphviz rendering of any artifact this tool writes; throws
/// Error(MalformedInput) for unrecognised documents.
std::string artifact_to_dot(const std::string& json_text);

}  // namespace devdet::cli
