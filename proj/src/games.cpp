#include "gamebridge/games.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "quotient.hpp"

namespace gb {

std::set<Id> Strategy::allowed(const Id& condition) const {
  auto it = decision.find(condition);
  if (it == decision.end()) return {};
  return it->second;
}

std::vector<Id> Controller::key_of(const std::vector<Id>& view_nf) const {
  if (memory < 0 || view_nf.size() <= static_cast<std::size_t>(memory)) return view_nf;
  return std::vector<Id>(view_nf.end() - memory, view_nf.end());
}

std::set<Id> Controller::lookup(const Id& process, const Trace& view) const {
  if (fn) return fn(process, view);
  auto it = table.find({process, key_of(view.normal_form)});
  if (it == table.end()) return {};
  return it->second;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::winning: return "winning";
    case Verdict::not_winning: return "not_winning";
    default: return "inconclusive";
  }
}

std::vector<std::string> validate_petri_game(const PetriGame& g) {
  std::vector<std::string> problems;
  for (const auto& q : g.net.places) {
    bool sys = g.system_places.count(q) != 0;
    bool env = g.environment_places.count(q) != 0;
    if (sys == env)
      problems.push_back("place " + q + (sys ? " is both system and environment"
                                             : " is neither system nor environment"));
  }
  for (const auto& q : g.system_places)
    if (!g.net.is_place(q)) problems.push_back("system place not in net: " + q);
  for (const auto& q : g.environment_places)
    if (!g.net.is_place(q)) problems.push_back("environment place not in net: " + q);
  for (const auto& q : g.special)
    if (!g.net.is_place(q)) problems.push_back("special place not in net: " + q);
  if (!has_setlike_flow(g.net)) problems.push_back("game net flow is not set-like");
  return problems;
}

std::vector<std::string> validate_control_game(const ControlGame& c) {
  std::vector<std::string> problems = validate_automaton(c.automaton);
  for (const auto& a : c.automaton.alphabet.actions) {
    bool ctl = c.controllable.count(a) != 0;
    bool env = c.uncontrollable.count(a) != 0;
    if (ctl == env)
      problems.push_back("action " + a + (ctl ? " is both controllable and uncontrollable"
                                              : " is neither controllable nor uncontrollable"));
  }
  for (const auto& [p, states] : c.special_states) {
    auto it = c.automaton.local_states.find(p);
    if (it == c.automaton.local_states.end()) {
      problems.push_back("special states for unknown process " + p);
      continue;
    }
    for (const auto& s : states)
      if (!it->second.count(s))
        problems.push_back("special state " + s + " not a state of process " + p);
  }
  return problems;
}

namespace {

// Per-node heights of a branching process: events sit one level above the
// deepest condition they consume, conditions inherit their producer's level.
std::vector<std::size_t> node_heights(const BpIndex& ix) {
  std::vector<std::size_t> h(ix.size(), 0);
  std::vector<char> done(ix.size(), 0);
  std::vector<int> stack;
  for (int n = 0; n < ix.size(); ++n) {
    if (done[n]) continue;
    stack.push_back(n);
    while (!stack.empty()) {
      int x = stack.back();
      if (done[x]) {
        stack.pop_back();
        continue;
      }
      bool ready = true;
      for (int y : ix.pre(x))
        if (!done[y]) {
          stack.push_back(y);
          ready = false;
        }
      if (!ready) continue;
      std::size_t v = 0;
      for (int y : ix.pre(x)) v = std::max(v, h[y]);
      h[x] = ix.is_event(x) ? v + 1 : v;
      done[x] = 1;
      stack.pop_back();
    }
  }
  return h;
}

std::string join_ids(const std::vector<Id>& ids) {
  std::string out;
  for (const auto& x : ids) {
    if (!out.empty()) out += " ";
    out += x;
  }
  return out;
}

// Enumerates every pairwise-concurrent set of conditions whose labels form
// exactly `places` (one condition per place), invoking `visit` on each.
void concurrent_matches(const BpIndex& ix,
                        const std::map<Id, std::vector<int>>& conds_by_label,
                        const std::vector<Id>& places,
                        const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == places.size()) {
      visit(chosen);
      return;
    }
    auto it = conds_by_label.find(places[i]);
    if (it == conds_by_label.end()) return;
    for (int cand : it->second) {
      bool ok = true;
      for (int prev : chosen)
        if (ix.relation(prev, cand) != Relation::concurrent) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(cand);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

struct StrategyView {
  const PetriGame* g;
  const Strategy* s;
  BpIndex ix;
  NetIndex base_ix;
  std::map<Id, std::vector<int>> conds_by_label;
  std::map<std::pair<Id, std::vector<int>>, int> events_by_footprint;
  std::vector<std::set<Id>> consumed_labels;  // per condition index

  StrategyView(const PetriGame& game, const Strategy& strat)
      : g(&game), s(&strat), ix(strat.bp), base_ix(game.net) {
    for (int n = 0; n < ix.size(); ++n) {
      if (ix.is_event(n)) {
        std::vector<int> pre = ix.pre(n);
        std::sort(pre.begin(), pre.end());
        events_by_footprint[{ix.label_of(n), pre}] = n;
      } else {
        conds_by_label[ix.label_of(n)].push_back(n);
      }
    }
    consumed_labels.resize(ix.size());
    for (int n = 0; n < ix.size(); ++n)
      if (ix.is_event(n))
        for (int q : ix.pre(n)) consumed_labels[q].insert(ix.label_of(n));
  }

  bool is_system_cond(int q) const { return g->is_system(ix.label_of(q)); }
};

}  // namespace

std::vector<std::string> validate_strategy(const PetriGame& g, const Strategy& s,
                                           std::size_t depth) {
  std::vector<std::string> problems = validate_branching_process(s.bp);
  if (!problems.empty()) return problems;

  StrategyView sv(g, s);
  for (const auto& [cond, allowed] : s.decision) {
    if (!s.bp.occ_net.is_place(cond)) {
      problems.push_back("decision keyed on unknown condition: " + cond);
      continue;
    }
    Id base_place = s.bp.lambda.at(cond);
    if (!g.is_system(base_place))
      problems.push_back("decision on non-system condition: " + cond);
    auto post_vec = g.net.post_p(base_place).support();
    std::set<Id> post(post_vec.begin(), post_vec.end());
    for (const auto& t : allowed)
      if (!post.count(t))
        problems.push_back("decision at " + cond + " allows " + t +
                           " which does not consume " + base_place);
  }

  // Events present must be permitted by every system condition they consume.
  for (int n = 0; n < sv.ix.size(); ++n) {
    if (!sv.ix.is_event(n)) continue;
    for (int q : sv.ix.pre(n))
      if (sv.is_system_cond(q) && !s.allowed(sv.ix.id_of(q)).count(sv.ix.label_of(n)))
        problems.push_back("event " + sv.ix.id_of(n) + " not allowed by decision at " +
                           sv.ix.id_of(q));
  }

  // Every extension all involved decisions permit must be present (depth-bounded).
  std::vector<std::size_t> heights = node_heights(sv.ix);
  for (const auto& t : g.net.transitions) {
    const std::vector<Id> pre_places = g.net.pre_t(t).support();
    concurrent_matches(sv.ix, sv.conds_by_label, pre_places, [&](const std::vector<int>& C) {
      std::size_t h = 0;
      for (int q : C) h = std::max(h, heights[q]);
      if (h + 1 > depth) return;
      for (int q : C)
        if (sv.is_system_cond(q) && !s.allowed(sv.ix.id_of(q)).count(t)) return;
      std::vector<int> key(C);
      std::sort(key.begin(), key.end());
      if (!sv.events_by_footprint.count({t, key})) {
        std::vector<Id> ids;
        for (int q : key) ids.push_back(sv.ix.id_of(q));
        problems.push_back("allowed transition " + t + " missing from {" + join_ids(ids) + "}");
      }
    });
  }
  return problems;
}

JrReport check_justified_refusal(const PetriGame& g, const Strategy& s, std::size_t depth) {
  JrReport report;
  StrategyView sv(g, s);
  std::vector<std::size_t> heights = node_heights(sv.ix);

  for (const auto& t : g.net.transitions) {
    const std::vector<Id> pre_places = g.net.pre_t(t).support();
    concurrent_matches(sv.ix, sv.conds_by_label, pre_places, [&](const std::vector<int>& C) {
      std::size_t h = 0;
      for (int q : C) h = std::max(h, heights[q]);
      if (h + 1 > depth) return;
      std::vector<int> key(C);
      std::sort(key.begin(), key.end());
      if (sv.events_by_footprint.count({t, key})) return;
      // The event is missing: some system condition must refuse t everywhere.
      for (int q : key)
        if (sv.is_system_cond(q) && !sv.consumed_labels[q].count(t)) return;
      std::vector<Id> ids;
      for (int q : key) ids.push_back(sv.ix.id_of(q));
      report.ok = false;
      report.violations.push_back("transition " + t + " unjustifiably missing from {" +
                                  join_ids(ids) + "}");
    });
  }
  return report;
}

namespace {

struct CutSearch {
  std::deque<std::pair<std::set<int>, std::size_t>> frontier;  // cut, events fired
  std::set<std::set<int>> seen;

  explicit CutSearch(const BpIndex& ix) {
    std::vector<int> init = ix.initial_cut();
    std::set<int> cut(init.begin(), init.end());
    seen.insert(cut);
    frontier.push_back({cut, 0});
  }
};

}  // namespace

bool check_deterministic(const PetriGame& g, const Strategy& s, std::size_t depth) {
  BpIndex ix(s.bp);
  CutSearch search(ix);
  while (!search.frontier.empty()) {
    auto [cut, steps] = search.frontier.front();
    search.frontier.pop_front();
    std::vector<int> enabled = ix.enabled_events(cut);
    for (int q : cut) {
      if (!g.is_system(s.bp.lambda.at(ix.id_of(q)))) continue;
      int consuming = 0;
      for (int e : enabled)
        for (int p : ix.pre(e))
          if (p == q) {
            ++consuming;
            break;
          }
      if (consuming > 1) return false;
    }
    if (steps >= depth) continue;
    for (int e : enabled) {
      std::set<int> next = ix.fire_event(cut, e);
      if (search.seen.insert(next).second) search.frontier.push_back({next, steps + 1});
    }
  }
  return true;
}

WinReport strategy_winning(const PetriGame& g, const Strategy& s, std::size_t depth,
                           std::size_t state_cap) {
  if (s.decision_memory >= 0 && !s.rule.empty()) {
    // Decisions factor through bounded-past classes: the class quotient is
    // exact and finite, so use it (it also sees lassos the prefix cannot).
    return detail::explore_quotient(g, s.decision_memory, nullptr, &s.rule, state_cap)
        .report;
  }
  BpIndex ix(s.bp);
  NetIndex base_ix(g.net);
  CutSearch search(ix);
  bool truncated = false;
  WinReport report;

  auto labels_of = [&](const std::set<int>& cut) {
    Marking m;
    for (int q : cut) m.add(s.bp.lambda.at(ix.id_of(q)));
    return m;
  };
  auto describe = [&](const std::set<int>& cut) {
    std::vector<Id> ids;
    for (int q : cut) ids.push_back(s.bp.lambda.at(ix.id_of(q)));
    return join_ids(ids);
  };

  while (!search.frontier.empty()) {
    auto [cut, steps] = search.frontier.front();
    search.frontier.pop_front();
    Marking image = labels_of(cut);

    if (g.objective == Objective::safety) {
      for (const auto& [q, k] : image.entries()) {
        (void)k;
        if (g.special.count(q)) {
          report.verdict = Verdict::not_winning;
          report.detail = "bad place " + q + " reached at {" + describe(cut) + "}";
          return report;
        }
      }
    }

    std::vector<int> enabled = ix.enabled_events(cut);
    if (enabled.empty()) {
      if (g.objective == Objective::reachability) {
        for (const auto& [q, k] : image.entries()) {
          (void)k;
          if (!g.special.count(q)) {
            report.verdict = Verdict::not_winning;
            report.detail = "final cut {" + describe(cut) + "} has non-winning place " + q;
            return report;
          }
        }
      } else if (!is_final(base_ix, image)) {
        report.verdict = Verdict::not_winning;
        report.detail = "deadlock: strategy is stuck at {" + describe(cut) +
                        "} where the game can still move";
        return report;
      }
      continue;
    }
    if (steps >= depth) {
      truncated = true;
      continue;
    }
    for (int e : enabled) {
      std::set<int> next = ix.fire_event(cut, e);
      if (search.seen.count(next)) continue;
      if (search.seen.size() >= state_cap) {
        truncated = true;
        continue;
      }
      search.seen.insert(next);
      search.frontier.push_back({next, steps + 1});
    }
  }

  if (!truncated) {
    report.verdict = Verdict::winning;
  } else if (g.objective == Objective::safety) {
    // Nothing bad happened anywhere in the explored prefix tree; report a
    // bounded win rather than punting, mirroring the controller check.
    report.verdict = Verdict::winning;
    report.detail = "verified up to the exploration bound";
  } else {
    report.verdict = Verdict::inconclusive;
    report.detail = "plays still alive at the exploration bound";
  }
  return report;
}

namespace {

struct PlayNode {
  std::vector<Id> nf;  // canonical linearization so far
  GlobalState state;
};

}  // namespace

std::set<Trace> controller_compatible_plays(const ControlGame& c, const Controller& ctrl,
                                            std::size_t bound) {
  const AsyncAutomaton& aut = c.automaton;
  std::set<Trace> out;
  std::set<std::vector<Id>> seen;
  std::deque<PlayNode> frontier;
  frontier.push_back({{}, aut.initial_state()});
  seen.insert({});

  while (!frontier.empty()) {
    PlayNode node = frontier.front();
    frontier.pop_front();
    Trace u{aut.alphabet, node.nf};
    out.insert(u);
    if (node.nf.size() >= bound) continue;
    for (const Id& a : aut.enabled_actions(node.state)) {
      if (c.is_controllable(a)) {
        bool allowed = true;
        for (const Id& p : aut.alphabet.domain_of(a))
          if (!ctrl.lookup(p, local_view(u, p)).count(a)) {
            allowed = false;
            break;
          }
        if (!allowed) continue;
      }
      std::vector<Id> word = node.nf;
      word.push_back(a);
      Trace next = normalize(aut.alphabet, word);
      if (!seen.insert(next.normal_form).second) continue;
      frontier.push_back({next.normal_form, step(aut, node.state, a)});
    }
  }
  return out;
}

WinReport controller_winning_bounded(const ControlGame& c, const Controller& ctrl,
                                     std::size_t bound, std::size_t state_cap) {
  const AsyncAutomaton& aut = c.automaton;
  std::set<std::vector<Id>> seen;
  std::deque<PlayNode> frontier;
  frontier.push_back({{}, aut.initial_state()});
  seen.insert({});
  bool truncated = false;
  WinReport report;

  while (!frontier.empty()) {
    PlayNode node = frontier.front();
    frontier.pop_front();
    Trace u{aut.alphabet, node.nf};

    if (c.objective == Objective::safety) {
      for (const auto& [p, s] : node.state) {
        auto it = c.special_states.find(p);
        if (it != c.special_states.end() && it->second.count(s)) {
          report.verdict = Verdict::not_winning;
          report.detail = "bad state " + s + " of " + p + " after: " + join_ids(node.nf);
          return report;
        }
      }
    }

    std::set<Id> enabled = aut.enabled_actions(node.state);
    std::vector<Id> compatible;
    for (const Id& a : enabled) {
      if (c.is_controllable(a)) {
        bool allowed = true;
        for (const Id& p : aut.alphabet.domain_of(a))
          if (!ctrl.lookup(p, local_view(u, p)).count(a)) {
            allowed = false;
            break;
          }
        if (!allowed) continue;
      }
      compatible.push_back(a);
    }

    if (compatible.empty()) {
      if (c.objective == Objective::reachability) {
        for (const auto& [p, s] : node.state) {
          auto it = c.special_states.find(p);
          if (it == c.special_states.end() || !it->second.count(s)) {
            report.verdict = Verdict::not_winning;
            report.detail =
                "maximal play ends with " + p + " in non-winning state " + s +
                " after: " + join_ids(node.nf);
            return report;
          }
        }
      } else if (!enabled.empty()) {
        report.verdict = Verdict::not_winning;
        report.detail = "deadlock: controller halts but the automaton can continue after: " +
                        join_ids(node.nf);
        return report;
      }
      continue;
    }
    if (node.nf.size() >= bound) {
      truncated = true;
      continue;
    }
    for (const Id& a : compatible) {
      std::vector<Id> word = node.nf;
      word.push_back(a);
      Trace next = normalize(aut.alphabet, word);
      if (seen.count(next.normal_form)) continue;
      if (seen.size() >= state_cap) {
        truncated = true;
        continue;
      }
      seen.insert(next.normal_form);
      frontier.push_back({next.normal_form, step(aut, node.state, a)});
    }
  }

  if (c.objective == Objective::reachability) {
    report.verdict = truncated ? Verdict::inconclusive : Verdict::winning;
    if (truncated) report.detail = "plays still alive at the exploration bound";
  } else {
    // Bounded-win semantics: no violation found anywhere in the explored
    // prefix tree counts as a win, with the truncation noted.
    report.verdict = Verdict::winning;
    if (truncated) report.detail = "verified up to the exploration bound";
  }
  return report;
}

}  // namespace gb
