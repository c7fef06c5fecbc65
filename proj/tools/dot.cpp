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

#include "cli.hpp"
#include "devdet/error.hpp"
#include "json.hpp"

namespace devdet::cli {

namespace {

using nlohmann::json;

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string join(const json& arr, const char* sep = ",") {
  std::string out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (k) out += sep;
    out += arr[k].is_string() ? arr[k].get<std::string>() : arr[k].dump();
  }
  return out;
}

void arena_dot(const json& j, std::ostream& out) {
  out << "digraph arena {\n  rankdir=LR;\n";
  for (const auto& s : j.at("states")) {
    out << "  " << quote(s) << (s == j.at("initial") ? " [penwidth=2]" : "") << ";\n";
  }
  for (const auto& r : j.at("transitions"))
    out << "  " << quote(r.at("from")) << " -> " << quote(r.at("to"))
        << " [label=" << quote(join(r.at("actions")) + " / " + join(r.at("obs"), " ")) << "];\n";
  out << "}\n";
}

void monitor_dot(const json& j, std::ostream& out) {
  out << "digraph monitor {\n  rankdir=LR;\n";
  for (const auto& s : j.at("states")) {
    bool marked = false;
    for (const auto& m : j.at("marked")) marked = marked || m == s;
    out << "  " << quote(s) << " [shape=" << (marked ? "doublecircle" : "circle")
        << (s == j.at("initial") ? ", penwidth=2" : "") << "];\n";
  }
  for (const auto& r : j.at("delta")) {
    const json& sym = r.at("symbol");
    out << "  " << quote(r.at("from")) << " -> " << quote(r.at("to")) << " [label="
        << quote(sym.at("state").get<std::string>() + ": " + join(sym.at("actions"))) << "];\n";
  }
  out << "}\n";
}

void profile_dot(const json& j, std::ostream& out) {
  out << "digraph profile {\n  rankdir=LR;\n";
  const json& machines = j.at("strategies");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const json& m = machines[i];
    const std::string p = "p" + std::to_string(i) + ":";
    out << "  subgraph cluster_" << i << " {\n    label=\"player " << i << "\";\n";
    for (const auto& o : m.at("output")) {
      std::string label = o.at("state").get<std::string>() + "\\n" + o.at("action").get<std::string>();
      if (m.contains("accuse"))
        for (const auto& a : m.at("accuse"))
          if (a.at("state") == o.at("state")) label += "\\naccuse " + a.at("player").dump();
      out << "    " << quote(p + o.at("state").get<std::string>()) << " [label=\"" << label
          << "\"" << (o.at("state") == m.at("initial") ? ", penwidth=2" : "") << "];\n";
    }
    for (const auto& u : m.at("update"))
      out << "    " << quote(p + u.at("from").get<std::string>()) << " -> "
          << quote(p + u.at("to").get<std::string>()) << " [label=" << quote(u.at("obs"))
          << "];\n";
    out << "  }\n";
  }
  out << "}\n";
}

void graph_dot(const json& j, std::ostream& out) {
  out << "graph network {\n";
  for (int v = 0; v < j.at("n").get<int>(); ++v) out << "  " << v << ";\n";
  for (const auto& e : j.at("edges")) out << "  " << e.at(0) << " -- " << e.at(1) << ";\n";
  out << "}\n";
}

void certificate_dot(const json& j, std::ostream& out) {
  out << "digraph certificate {\n";
  for (const auto& s : j.at("structures")) {
    std::string label = "U" + s.at("id").dump() + " @ " + s.at("state").get<std::string>();
    for (const auto& n : s.at("nodes")) {
      label += "\\n" + n.at("candidate").dump() + ":" + n.at("monitor").get<std::string>() + ":" +
               n.at("status").get<std::string>();
      if (n.at("status") == "deviated")
        label += n.at("resolved").get<bool>() ? "+" : "/" + n.at("age").dump();
    }
    const json& l = s.at("labels");
    if (l.at("overage").get<bool>()) label += "\\noverage";
    if (!l.at("silent_safe").get<bool>()) label += "\\nunsafe";
    out << "  U" << s.at("id") << " [shape=box, label=\"" << label << "\""
        << (s.at("winning").get<bool>() ? ", penwidth=2" : ", style=dashed") << "];\n";
    if (!s.at("expanded").get<bool>()) out << "  U" << s.at("id") << " -> U" << s.at("id") << ";\n";
  }
  for (const auto& c : j.at("choices")) {
    std::string label;
    for (const auto& row : c.at("assignment")) label += (label.empty() ? "" : " | ") + join(row);
    out << "  C" << c.at("id") << " [shape=diamond, label=" << quote(label)
        << (c.at("winning").get<bool>() ? "" : ", style=dashed") << "];\n";
    out << "  U" << c.at("structure") << " -> C" << c.at("id") << ";\n";
    for (const auto& t : c.at("successors")) out << "  C" << c.at("id") << " -> U" << t << ";\n";
  }
  out << "}\n";
}

void report_dot(const json& j, std::ostream& out) {
  out << "digraph witness {\n  rankdir=LR;\n";
  const json* witness = nullptr;
  if (j.at("detection").contains("witness")) witness = &j.at("detection").at("witness");
  else if (j.at("accusations").contains("witness")) witness = &j.at("accusations").at("witness");
  if (witness) {
    for (std::size_t k = 0; k < witness->size(); ++k) {
      const json& s = (*witness)[k];
      const std::string who = s.at("deviator").is_null() ? "silent" : "dev " + s.at("deviator").dump();
      out << "  w" << k << " [label=" << quote(s.at("state").get<std::string>() + "\\n" + who + "\\n" +
                                               s.at("memories").dump())
          << "];\n";
      if (k + 1 < witness->size())
        out << "  w" << k << " -> w" << k + 1 << " [label=" << quote(join(s.at("actions")))
            << "];\n";
    }
  } else {
    out << "  pass [label=" << quote(j.at("verdict")) << "];\n";
  }
  out << "}\n";
}

}  // namespace

std::string artifact_to_dot(const std::string& json_text) {
  std::ostringstream out;
  try {
    const json j = json::parse(json_text);
    if (j.contains("transitions")) arena_dot(j, out);
    else if (j.contains("delta")) monitor_dot(j, out);
    else if (j.contains("strategies")) profile_dot(j, out);
    else if (j.contains("structures")) certificate_dot(j, out);
    else if (j.contains("detection")) report_dot(j, out);
    else if (j.contains("base")) arena_dot(j.at("base"), out);
    else if (j.contains("edges")) graph_dot(j, out);
    else throw Error(ErrorKind::MalformedInput, "unrecognised artifact");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  return out.str();
}

}  // namespace devdet::cli
