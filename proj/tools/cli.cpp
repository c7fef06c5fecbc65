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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "devdet/beeping.hpp"
#include "devdet/exposure.hpp"
#include "devdet/json_io.hpp"
#include "devdet/synthesis.hpp"
#include "devdet/verifier.hpp"

namespace devdet::cli {

namespace {

// Reported with its exit code by run().
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kNoInput, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Exit{kCantCreate, "cannot write " + path};
}

// Parsing errors are prefixed with the file they came from.
template <typename F>
auto parse_from(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedInput && e.kind() != ErrorKind::InvalidArgument) throw;
    throw Exit{kMalformed, path + ": " + e.what()};
  }
}

Arena load_arena(const std::string& path) {
  Arena arena = parse_from(path, [](const std::string& t) { return parse_arena(t); });
  const ValidationReport bad = validate_arena(arena);
  if (!bad.empty()) {
    std::string msg = path + ": invalid arena";
    for (const auto& v : bad) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.where;
    throw Exit{kMalformed, msg};
  }
  return arena;
}

MonitorAutomaton load_monitor(const std::string& path, const Arena& arena) {
  MonitorAutomaton mon =
      parse_from(path, [&](const std::string& t) { return parse_monitor(t, arena); });
  const ValidationReport bad = validate_monitor(arena, mon);
  if (!bad.empty()) {
    std::string msg = path + ": invalid monitor";
    for (const auto& v : bad) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.where;
    throw Exit{kMalformed, msg};
  }
  return mon;
}

StrategyProfile load_profile(const std::string& path, const Arena& arena) {
  StrategyProfile s =
      parse_from(path, [&](const std::string& t) { return parse_profile(t, arena); });
  const ValidationReport bad = validate_profile(arena, s);
  if (!bad.empty()) {
    std::string msg = path + ": invalid profile";
    for (const auto& v : bad) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.where;
    throw Exit{kMalformed, msg};
  }
  return s;
}

std::string trace_text(const Arena& arena, const History& h, PlayerId i) {
  std::string out;
  for (ObsId b : observation_trace(arena, h, i)) out += " " + arena.observations(i)[b];
  return out.empty() ? " (empty)" : out;
}

struct SynthArgs {
  std::string game, monitor, output, certificate;
  int deadline = 0, max_deadline = 8;
  std::size_t cap = kDefaultPositionCap;
  std::size_t refute_budget = SynthesisOptions{}.refute_budget;
  bool verbose = false;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  const Arena arena = load_arena(a.game);
  const MonitorAutomaton mon = load_monitor(a.monitor, arena);
  SynthesisOptions opts;
  opts.deadline = a.deadline;
  opts.max_deadline = a.max_deadline;
  opts.cap = a.cap;
  opts.refute = a.refute_budget > 0;
  opts.refute_budget = a.refute_budget;
  opts.verbosity = a.verbose ? 1 : 0;
  opts.log = &err;
  SynthesisResult r;
  try {
    r = synthesize(arena, mon, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Explosion) throw Exit{kExplosion, e.what()};
    if (e.kind() == ErrorKind::InvalidArgument) throw Exit{kMalformed, e.what()};
    throw;
  }
  switch (r.status) {
    case SynthesisStatus::NotStateMonitored: {
      const auto& cex = *r.counterexample;
      out << "not state monitored: player " << cex.player
          << " cannot tell two histories apart that end in "
          << arena.state_name(cex.first.states.back()) << " and "
          << arena.state_name(cex.second.states.back()) << "\n  observations:"
          << trace_text(arena, cex.first, cex.player) << "\n";
      return kNotStateMonitored;
    }
    case SynthesisStatus::Unrealizable:
      out << "no detection within deadline " << r.deadline << "\n";
      if (r.refutation) {
        out << "  already lost when only " << (r.refutation->candidates.size() == 1 ? "player" : "players");
        for (PlayerId k : r.refutation->candidates) out << " " << k;
        out << " may deviate";
        if (r.refutation->horizon > 0)
          out << ", within the first " << r.refutation->horizon << " round(s)";
        out << "\n";
      }
      return kUnrealizable;
    case SynthesisStatus::Solved:
      break;
  }
  const Solution& sol = *r.solution;
  if (!a.output.empty()) write_file(a.output, write_profile(arena, sol.profile));
  if (!a.certificate.empty()) {
    const RevelationGame rev = build_revelation_game(arena, mon);
    write_file(a.certificate, write_certificate(rev, sol.certificate));
  }
  out << "solution at deadline " << r.deadline << " (" << sol.certificate.arena.structures.size()
      << " structures, memory sizes";
  for (const auto& m : sol.profile) out << " " << m.size();
  out << ")\n";
  return kOk;
}

struct VerifyArgs {
  std::string game, monitor, profile, report;
  std::size_t cap = kDefaultProductCap;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  const Arena arena = load_arena(a.game);
  const MonitorAutomaton mon = load_monitor(a.monitor, arena);
  const StrategyProfile s = load_profile(a.profile, arena);
  VerifierReport r;
  try {
    r = verify(arena, mon, s, a.cap);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Explosion) throw Exit{kExplosion, e.what()};
    if (e.kind() == ErrorKind::InvalidArgument) throw Exit{kMalformed, e.what()};
    throw;
  }
  if (!a.report.empty()) write_file(a.report, write_report(arena, r));
  out << "outcome: " << (r.outcome.pass ? "pass" : "fail (OutcomeNotInW)") << "\n";
  out << "detection: "
      << (r.detection.pass ? "pass, delay " + std::to_string(r.detection.max_delay)
                           : "fail (DetectionCycle of length " +
                                 std::to_string(r.detection.witness.size() - 1) + ")")
      << "\n";
  out << "accusations: "
      << (r.accusations.pass ? std::string("pass")
                             : std::string("fail (") + to_string(*r.accusations.fault) + ")")
      << "\n";
  out << (r.pass() ? "PASS" : "FAIL") << " (" << r.product_size << " product states)\n";
  return r.pass() ? kOk : kFail;
}

int cmd_expose(const std::string& game, const std::string& monitor, const std::string& output,
               const std::string& monitor_out, std::ostream& out) {
  const Arena arena = load_arena(game);
  const MonitorAutomaton mon = load_monitor(monitor, arena);
  ExposureGame eg;
  try {
    eg = build_exposure_game(arena, mon);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AlphabetClash) throw Exit{kMalformed, e.what()};
    if (e.kind() == ErrorKind::TooLarge) throw Exit{kExplosion, e.what()};
    throw;
  }
  write_file(output, write_arena(eg.arena.game));
  if (!monitor_out.empty()) write_file(monitor_out, write_monitor(eg.arena.game, eg.monitor));
  out << "exposure game: " << eg.arena.game.num_states() << " states, "
      << eg.arena.game.num_players() << " players including nature\n";
  return kOk;
}

int cmd_beeping(const std::string& graph, const std::string& fraction, const std::string& output,
                const std::string& monitor_out, std::ostream& out) {
  const NetworkGraph g = parse_from(graph, [](const std::string& t) { return parse_graph(t); });
  Arena arena;
  try {
    arena = beeping_arena(g);
  } catch (const Error& e) {
    throw Exit{kMalformed, graph + ": " + e.what()};
  }
  MonitorAutomaton mon = trivial_monitor(arena);
  if (!fraction.empty()) {
    int num = 0, den = 0;
    char slash = 0;
    std::istringstream in(fraction);
    if (!(in >> num >> slash >> den) || slash != '/' || !in.eof() || den <= 0 || num < 0 ||
        num > den)
      throw Exit{kUsage, "--fraction expects num/den with 0 <= num <= den"};
    mon = fraction_monitor(arena, g, num, den);
  }
  write_file(output, write_arena(arena));
  if (!monitor_out.empty()) write_file(monitor_out, write_monitor(arena, mon));
  out << "beeping arena for " << g.n << " nodes, " << g.edges.size() << " edges\n";
  return kOk;
}

int cmd_check_2conn(const std::string& graph, std::ostream& out) {
  const NetworkGraph g = parse_from(graph, [](const std::string& t) { return parse_graph(t); });
  if (two_connected(g)) {
    out << "two-connected\n";
    return kOk;
  }
  out << "not two-connected";
  if (!connected(g)) out << ": disconnected";
  const std::vector<int> cut = articulation_points(g);
  if (!cut.empty()) {
    out << ": articulation vertices";
    for (int v : cut) out << " " << v;
  }
  out << "\n";
  return kNotTwoConnected;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deviator-detection synthesis and verification for games on graphs", "devdet"};
  app.require_subcommand(1, 1);
  int seed = 0;
  app.add_option("--seed", seed, "Reserved for randomized tests; the pipeline is deterministic");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Synthesize a deviator-detection profile");
  synth->add_option("game", sa.game, "Arena JSON")->required();
  synth->add_option("--monitor", sa.monitor, "Monitor JSON for the winning condition")->required();
  auto* fixed = synth->add_option("--deadline", sa.deadline, "Fixed revelation deadline")
                    ->check(CLI::PositiveNumber);
  auto* deepen = synth->add_option("--max-deadline", sa.max_deadline,
                                   "Last deadline for iterative deepening (default 8)")
                     ->check(CLI::PositiveNumber);
  fixed->excludes(deepen);
  synth->add_option("--cap", sa.cap, "Abstract position cap")->check(CLI::PositiveNumber);
  synth->add_option("--refute-budget", sa.refute_budget,
                    "Expansions per restricted game searched before the full game (0 skips)");
  synth->add_option("-o,--output", sa.output, "Profile JSON to write");
  synth->add_option("--certificate", sa.certificate, "Certificate JSON to write");
  synth->add_flag("-v,--verbose", sa.verbose, "Log each deadline tried");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check a profile for deviator detection");
  verify_cmd->add_option("game", va.game, "Arena JSON")->required();
  verify_cmd->add_option("monitor", va.monitor, "Monitor JSON")->required();
  verify_cmd->add_option("profile", va.profile, "Profile JSON")->required();
  verify_cmd->add_option("--report", va.report, "Report JSON to write");
  verify_cmd->add_option("--cap", va.cap, "Product state cap")->check(CLI::PositiveNumber);

  std::string eg_game, eg_mon, eg_out, eg_mon_out;
  auto* expose = app.add_subcommand("expose", "Build the exposure game");
  expose->add_option("game", eg_game, "Arena JSON")->required();
  expose->add_option("monitor", eg_mon, "Monitor JSON")->required();
  expose->add_option("-o,--output", eg_out, "Exposure arena JSON")->required();
  expose->add_option("--monitor-out", eg_mon_out, "Exposure winning-condition monitor JSON");

  std::string bg_graph, bg_fraction, bg_out, bg_mon_out;
  auto* beeping = app.add_subcommand("beeping-gen", "Generate a beeping-network arena");
  beeping->add_option("graph", bg_graph, "Graph JSON")->required();
  beeping->add_option("--fraction", bg_fraction, "Beep bound num/den for the monitor");
  beeping->add_option("-o,--output", bg_out, "Arena JSON")->required();
  beeping->add_option("--monitor-out", bg_mon_out, "Monitor JSON");

  std::string cc_graph;
  auto* check = app.add_subcommand("check-2conn", "Check a graph for two-connectivity");
  check->add_option("graph", cc_graph, "Graph JSON")->required();

  std::string dot_in, dot_out;
  auto* dot = app.add_subcommand("export-dot", "Render an artifact as Graphviz");
  dot->add_option("artifact", dot_in, "Any JSON artifact")->required();
  dot->add_option("-o,--output", dot_out, "DOT file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*synth) return cmd_synth(sa, out, err);
    if (*verify_cmd) return cmd_verify(va, out, err);
    if (*expose) return cmd_expose(eg_game, eg_mon, eg_out, eg_mon_out, out);
    if (*beeping) return cmd_beeping(bg_graph, bg_fraction, bg_out, bg_mon_out, out);
    if (*check) return cmd_check_2conn(cc_graph, out);
    if (*dot) {
      std::string text = read_file(dot_in);
      try {
        text = artifact_to_dot(text);
      } catch (const Error& e) {
        throw Exit{kMalformed, dot_in + ": " + e.what()};
      }
      write_file(dot_out, text);
      return kOk;
    }
  } catch (const Exit& e) {
    err << "devdet: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "devdet: " << e.what() << "\n";
    return kMalformed;
  }
  return kUsage;
}

}  // namespace devdet::cli
