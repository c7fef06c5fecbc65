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

#include "devdet/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "devdet/error.hpp"

namespace devdet {

const char* to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Solved: return "Solved";
    case SynthesisStatus::Unrealizable: return "Unrealizable";
    case SynthesisStatus::NotStateMonitored: return "NotStateMonitored";
  }
  return "?";
}

std::vector<int> deadline_schedule(const SynthesisOptions& opts) {
  if (opts.deadline > 0) return {opts.deadline};
  if (opts.max_deadline < 1) throw Error(ErrorKind::InvalidArgument, "max deadline must be >= 1");
  std::vector<int> out;
  for (int d = 1; d < opts.max_deadline; d *= 2) out.push_back(d);
  out.push_back(opts.max_deadline);
  return out;
}

std::optional<Certificate> solve_abstract(const RevelationGame& rev, AbstractArena arena) {
  const PIArena& game = arena.game;
  PositionSet safe(game.size(), true);
  PositionSet reach(game.size(), false);
  for (std::size_t s = 0; s < arena.structures.size(); ++s) {
    const StructureLabels& l = arena.labels[s];
    const int pos = arena.structure_position[s];
    safe[pos] = l.silent_safe && !l.overage;
    reach[pos] = l.silent_accepted;
  }
  GameSolution sol = rev.monitor.kind == MonitorKind::Safety
                         ? solve_safety(game, safe)
                         : solve_reach_and_safe(game, reach, safe);
  if (!sol.winning[game.initial]) return std::nullopt;
  return Certificate{std::move(arena), std::move(sol)};
}

StrategyProfile distribute(const Certificate& cert, const RevelationGame& rev) {
  const AbstractArena& a = cert.arena;
  const int n = rev.base.num_players();

  // Winning choice per structure, with its expansion.
  std::map<int, std::pair<int, Expansion>> chosen;
  auto choice_of = [&](int s) -> const std::pair<int, Expansion>& {
    auto it = chosen.find(s);
    if (it != chosen.end()) return it->second;
    const int pos = a.structure_position[s];
    const int move = cert.solution.strategy[pos];
    if (move < 0) throw std::logic_error("no strategy at a reachable structure");
    const int c = a.payload[a.game.moves(pos)[move]];
    Expansion e = expand(rev, a.structures[s], a.choices[c].assignment, a.deadline);
    return chosen.emplace(s, std::pair{c, std::move(e)}).first->second;
  };

  StrategyProfile profile(n);
  for (PlayerId i = 0; i < n; ++i) {
    StrategyMachine& m = profile[i];
    const int nb = static_cast<int>(rev.base.observations(i).size());
    m.num_observations = nb;
    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> memories;
    auto intern = [&](int s, int cls) {
      auto [it, fresh] = index.emplace(std::pair{s, cls}, static_cast<int>(memories.size()));
      if (fresh) memories.emplace_back(s, cls);
      return it->second;
    };
    m.initial = intern(0, 0);
    bool accuses = false;
    for (std::size_t k = 0; k < memories.size(); ++k) {
      const auto [s, cls] = memories[k];
      const EpistemicStructure& u = a.structures[s];
      m.memory.push_back("U" + std::to_string(s) + "/C" + std::to_string(cls));

      // Accuse once every node this player considers possible is a resolved
      // deviation of one and the same other player.
      const std::vector<int> members = u.class_members(i, cls);
      const PlayerId dev = deviator_of(rev, u.nodes[members.front()]);
      std::optional<PlayerId> accused;
      if (dev >= 0 && dev != i &&
          std::all_of(members.begin(), members.end(), [&](int x) {
            return deviator_of(rev, u.nodes[x]) == dev && u.nodes[x].resolved;
          }))
        accused = dev;
      m.accusation.push_back(accused);
      accuses = accuses || accused.has_value();

      std::vector<int> row(nb, static_cast<int>(k));
      if (!a.expanded[s]) {
        m.output.push_back(0);
      } else {
        const auto& [c, e] = choice_of(s);
        m.output.push_back(a.choices[c].assignment.actions[i][cls]);
        for (ObsId b = 0; b < nb; ++b) {
          std::optional<std::pair<int, int>> target;
          for (const ExpandedChild& child : e.children) {
            if (u.classes[i][child.parent] != cls || child.obs[i] != b) continue;
            const int t = a.choices[c].successors[child.structure];
            const EpistemicStructure& v = a.structures[t];
            if (deviator_of(rev, v.nodes[child.node]) == i) continue;
            const std::pair place{t, v.classes[i][child.node]};
            if (target && *target != place)
              throw Error(ErrorKind::NonUniqueSuccessor,
                          "player " + std::to_string(i) + " memory " + m.memory.back() +
                              " observation " + std::to_string(b));
            target = place;
          }
          if (target) row[b] = intern(target->first, target->second);
        }
      }
      m.update.insert(m.update.end(), row.begin(), row.end());
    }
    if (!accuses) m.accusation.clear();
  }
  return profile;
}

namespace {

struct BudgetExhausted {};

// Worlds a (k deviated) and b (l deviated, or l still free to start) that
// every player outside {k, l} confuses stay confused when each deviator copies
// the other world's honest action: the realized profiles then coincide. So a
// never resolves and outlives any deadline.
bool copycat_pair(const RevelationGame& rev, const EpistemicStructure& u) {
  const int n = rev.base.num_players();
  if (n < 3) return false;
  const int size = static_cast<int>(u.nodes.size());
  for (int a = 0; a < size; ++a) {
    const PlayerId k = deviator_of(rev, u.nodes[a]);
    if (k < 0 || u.nodes[a].resolved) continue;
    for (int b = 0; b < size; ++b) {
      PlayerId l = deviator_of(rev, u.nodes[b]);
      if (l < 0) {
        if (rev.corruption_horizon > 0) continue;
        l = rev.candidates[u.nodes[b].component];
      }
      if (l == k) continue;
      bool confused = true;
      for (PlayerId i = 0; i < n && confused; ++i)
        confused = i == k || i == l || u.related(i, a, b);
      if (confused) return true;
    }
  }
  return false;
}

// Memoized AND-OR search for an adversary win in a restricted game. A state
// counts as lost for the adversary when unsure (cycles, quiescent structures),
// so a positive answer is always sound.
class AdversarySearch {
 public:
  AdversarySearch(RevelationGame rev, int deadline)
      : rev_(std::move(rev)), deadline_(deadline) {}

  std::optional<bool> run(std::size_t budget) {
    budget_ = budget;
    on_path_.clear();
    try {
      return wins(initial_structure(rev_));
    } catch (const BudgetExhausted&) {
      return std::nullopt;
    }
  }

  const RevelationGame& game() const { return rev_; }
  std::size_t expansions() const { return expansions_; }

 private:
  bool wins(const EpistemicStructure& u) {
    if (auto it = memo_.find(u); it != memo_.end()) return it->second;
    if (!on_path_.insert(u).second) return false;
    const StructureLabels l = label_structure(rev_, u, deadline_);
    const bool active = std::any_of(u.nodes.begin(), u.nodes.end(),
                                    [](const EpistemicNode& n) { return !n.silent && !n.resolved; });
    bool result = true;
    if (l.overage || !l.silent_safe || (deadline_ > 0 && copycat_pair(rev_, u))) {
      result = true;
    } else if (l.revealed ||
               (!active && rev_.corruption_horizon > 0 && u.round >= rev_.corruption_horizon)) {
      result = false;
    } else {
      for_each_reduced_assignment(rev_, u, [&](const Assignment& f) {
        if (++expansions_ > budget_) throw BudgetExhausted{};
        const Expansion e = expand(rev_, u, f, deadline_);
        bool answered = std::any_of(e.successors.begin(), e.successors.end(), [&](const auto& v) {
          auto it = memo_.find(v);
          return it != memo_.end() && it->second;
        });
        for (std::size_t x = 0; !answered && x < e.successors.size(); ++x)
          answered = wins(e.successors[x]);
        result = answered;
        return answered;
      });
    }
    on_path_.erase(u);
    memo_.emplace(u, result);
    return result;
  }

  RevelationGame rev_;
  int deadline_;
  std::size_t budget_ = 0;
  std::size_t expansions_ = 0;
  std::map<EpistemicStructure, bool> memo_;
  std::set<EpistemicStructure> on_path_;
};

}  // namespace

std::optional<Refutation> find_refutation(const RevelationGame& rev,
                                         const SynthesisOptions& opts) {
  const std::vector<PlayerId>& all = rev.candidates;
  std::vector<std::pair<std::vector<PlayerId>, int>> restrictions;
  for (PlayerId k : all) restrictions.push_back({{k}, opts.refute_horizon});
  for (int horizon : {opts.refute_horizon, 0})
    for (std::size_t x = 0; x < all.size(); ++x)
      for (std::size_t y = x + 1; y < all.size(); ++y)
        restrictions.push_back({{all[x], all[y]}, horizon});

  // Losing at the largest deadline means losing at every smaller one.
  const int deadline = deadline_schedule(opts).back();
  std::vector<AdversarySearch> open;
  for (const auto& [candidates, horizon] : restrictions) {
    RevelationGame restricted = rev;
    restricted.candidates = candidates;
    restricted.corruption_horizon = horizon;
    restricted.mimicking_deviators = true;
    open.emplace_back(std::move(restricted), deadline);
  }
  for (std::size_t budget = std::min<std::size_t>(1000, opts.refute_budget); !open.empty();
       budget = std::min(budget * 10, opts.refute_budget)) {
    std::vector<AdversarySearch> undecided;
    for (AdversarySearch& search : open) {
      const std::optional<bool> won = search.run(budget);
      if (won && *won)
        return Refutation{search.game().candidates, search.game().corruption_horizon,
                          search.expansions()};
      if (!won && budget < opts.refute_budget) undecided.push_back(std::move(search));
    }
    open = std::move(undecided);
  }
  return std::nullopt;
}

SynthesisResult synthesize(const Arena& arena, const MonitorAutomaton& mon,
                           const SynthesisOptions& opts) {
  if (arena.num_players() < 2)
    throw Error(ErrorKind::InvalidArgument, "a coalition needs at least two players");
  if (auto bad = validate_arena(arena); !bad.empty())
    throw Error(ErrorKind::InvalidArgument,
                std::string("invalid arena: ") + to_string(bad.front().kind) + " at " +
                    bad.front().where);
  if (auto bad = validate_monitor(arena, mon); !bad.empty())
    throw Error(ErrorKind::InvalidArgument,
                std::string("invalid monitor: ") + to_string(bad.front().kind) + " at " +
                    bad.front().where);
  if (std::find(mon.pending.begin(), mon.pending.end(), true) != mon.pending.end())
    throw Error(ErrorKind::InvalidArgument, "synthesis does not support pending monitor states");

  SynthesisResult result;
  std::optional<RevelationGame> rev;
  try {
    rev = build_revelation_game(arena, mon);
  } catch (const NotStateMonitoredError& e) {
    result.status = SynthesisStatus::NotStateMonitored;
    result.counterexample = e.counterexample();
    return result;
  }

  const std::vector<int> schedule = deadline_schedule(opts);
  if (opts.refute && opts.refute_horizon > 0) {
    if (auto r = find_refutation(*rev, opts)) {
      if (opts.log && opts.verbosity > 0) {
        *opts.log << "refuted with Nature restricted to candidates";
        for (PlayerId k : r->candidates) *opts.log << " " << k;
        if (r->horizon > 0) *opts.log << " corrupting within " << r->horizon << " round(s)";
        *opts.log << ", " << r->expansions << " expansions\n";
      }
      result.status = SynthesisStatus::Unrealizable;
      result.deadline = schedule.back();
      result.refutation = std::move(r);
      return result;
    }
  }

  for (int d : schedule) {
    result.deadline = d;
    AbstractArena abstract = build_abstract_arena(*rev, d, opts.cap);
    const std::size_t positions = abstract.game.size();
    std::optional<Certificate> cert = solve_abstract(*rev, std::move(abstract));
    if (opts.log && opts.verbosity > 0)
      *opts.log << "deadline " << d << ": " << positions << " positions, "
                << (cert ? "winning" : "losing") << "\n";
    if (cert) {
      Solution sol;
      sol.profile = distribute(*cert, *rev);
      sol.certificate = std::move(*cert);
      result.status = SynthesisStatus::Solved;
      result.solution = std::move(sol);
      return result;
    }
  }
  result.status = SynthesisStatus::Unrealizable;
  return result;
}

VerifierReport certify(const Arena& arena, const MonitorAutomaton& mon, const Solution& sol,
                       std::size_t cap) {
  return verify(arena, mon, sol.profile, cap);
}

}  // namespace devdet
