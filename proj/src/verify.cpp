#include "gamebridge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

#include "gamebridge/automata.hpp"
#include "gamebridge/errors.hpp"
#include "gamebridge/unfolding.hpp"
#include "quotient.hpp"

namespace gb {

std::string to_string(BisimVerdict v) {
  switch (v) {
    case BisimVerdict::pass:
      return "pass";
    case BisimVerdict::fail:
      return "fail";
    case BisimVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// All subsets of `base`, ordered smallest-first so searches try refusing
// everything before committing to more.
std::vector<std::set<Id>> subsets_small_first(const std::set<Id>& base) {
  if (base.size() > 16)
    throw SizeLimit("subset enumeration over " + std::to_string(base.size()) + " alternatives");
  std::vector<Id> v(base.begin(), base.end());
  std::vector<std::set<Id>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
    std::set<Id> s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask >> i & 1) s.insert(v[i]);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const std::set<Id>& a, const std::set<Id>& b) { return a.size() < b.size(); });
  return out;
}

// Height of each node: number of events on its longest causal chain.
std::vector<std::size_t> bp_heights(const BpIndex& ix) {
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
      h[x] = v + (ix.is_event(x) ? 1 : 0);
      done[x] = 1;
      stack.pop_back();
    }
  }
  return h;
}

// Enumerates pairwise-concurrent condition tuples matching a place list.
void concurrent_tuples(const BpIndex& ix, const std::map<Id, std::vector<int>>& conds_by_label,
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

std::string join_labels(const std::vector<Id>& v) {
  std::string out;
  for (const Id& x : v) {
    if (!out.empty()) out += " ";
    out += x;
  }
  return out;
}

}  // namespace

BisimWitness weak_bisim_check(const PetriGame& g, const Strategy& s, const ControlGame& c,
                              const Controller& ctrl, const std::set<Id>& shared_actions,
                              std::size_t depth) {
  (void)g;
  BisimWitness w;
  w.depth = depth;
  const AsyncAutomaton& aut = c.automaton;
  const std::size_t tau_cap = std::max<std::size_t>(1, aut.processes.size());
  BpIndex ix(s.bp);

  // Observable image of a strategy event label: either a shared label itself,
  // or the action `a` of a synchronized move named act(a,...).
  auto obs_of = [&](const Id& label) -> std::optional<Id> {
    if (shared_actions.count(label)) return label;
    if (label.rfind("act(", 0) == 0) {
      auto pos = label.find(",[");
      if (pos != std::string::npos && pos > 4) {
        Id a = label.substr(4, pos - 4);
        if (shared_actions.count(a)) return a;
      }
    }
    return std::nullopt;
  };

  // Reachable cuts of the strategy, with their outgoing event edges.
  struct CutEdge {
    int to;
    Id label;
    std::optional<Id> obs;
  };
  std::vector<std::set<int>> cuts;
  std::map<std::set<int>, int> cut_ix;
  std::vector<std::vector<CutEdge>> cedges;
  bool truncated_cuts = false;
  {
    std::vector<int> ic = ix.initial_cut();
    std::set<int> c0(ic.begin(), ic.end());
    cut_ix.emplace(c0, 0);
    cuts.push_back(c0);
    for (std::size_t i = 0; i < cuts.size() && !truncated_cuts; ++i) {
      cedges.emplace_back();
      for (int e : ix.enabled_events(cuts[i])) {
        std::set<int> nxt = ix.fire_event(cuts[i], e);
        auto it = cut_ix.find(nxt);
        if (it == cut_ix.end()) {
          if (cuts.size() >= kDefaultStateCap) {
            truncated_cuts = true;
            break;
          }
          it = cut_ix.emplace(std::move(nxt), static_cast<int>(cuts.size())).first;
          cuts.push_back(it->first);
        }
        cedges[i].push_back({it->second, ix.label_of(e), obs_of(ix.label_of(e))});
      }
    }
  }
  if (truncated_cuts) {
    w.verdict = BisimVerdict::inconclusive;
    w.detail = "cut exploration hit the state cap";
    return w;
  }

  // Internal closure of each cut, bounded by the stuttering cap.
  std::vector<std::set<int>> cclo(cuts.size());
  for (std::size_t m = 0; m < cuts.size(); ++m) {
    std::map<int, std::size_t> dist{{static_cast<int>(m), 0}};
    std::deque<int> bfs{static_cast<int>(m)};
    std::set<int> mem{static_cast<int>(m)};
    while (!bfs.empty()) {
      int x = bfs.front();
      bfs.pop_front();
      if (dist[x] >= tau_cap) continue;
      for (const CutEdge& e : cedges[x]) {
        if (e.obs || dist.count(e.to)) continue;
        dist[e.to] = dist[x] + 1;
        mem.insert(e.to);
        bfs.push_back(e.to);
      }
    }
    cclo[m] = std::move(mem);
  }

  std::map<std::pair<int, Id>, std::set<int>> cresp_memo;
  auto cut_resp = [&](int m, const Id& a) -> const std::set<int>& {
    auto key = std::make_pair(m, a);
    auto it = cresp_memo.find(key);
    if (it != cresp_memo.end()) return it->second;
    std::set<int> out;
    for (int m1 : cclo[m])
      for (const CutEdge& e : cedges[m1])
        if (e.obs && *e.obs == a) out.insert(cclo[e.to].begin(), cclo[e.to].end());
    return cresp_memo.emplace(std::move(key), std::move(out)).first->second;
  };

  // Plays compatible with the controller, up to the horizon, with single-action
  // extensions. A play at the horizon has unknown successors.
  std::set<Trace> uset = controller_compatible_plays(c, ctrl, depth);
  std::vector<Trace> plays(uset.begin(), uset.end());
  const std::size_t P = plays.size();
  std::map<std::vector<Id>, int> play_ix;
  for (std::size_t i = 0; i < P; ++i) play_ix[plays[i].normal_form] = static_cast<int>(i);

  struct PlayEdges {
    std::map<Id, int> next;
    bool at_horizon = false;
  };
  std::vector<PlayEdges> pedges(P);
  for (std::size_t i = 0; i < P; ++i) {
    pedges[i].at_horizon = plays[i].length() >= depth;
    if (pedges[i].at_horizon) continue;
    for (const Id& a : aut.alphabet.actions) {
      std::vector<Id> word = plays[i].normal_form;
      word.push_back(a);
      Trace ext = normalize(aut.alphabet, word);
      auto jt = play_ix.find(ext.normal_form);
      if (jt != play_ix.end()) pedges[i].next[a] = jt->second;
    }
  }

  // Internal closure of each play; `doubt` marks closures the horizon may
  // have cut short, where absence of a response is not conclusive.
  std::vector<std::pair<std::set<int>, bool>> pclo(P);
  for (std::size_t i = 0; i < P; ++i) {
    std::map<int, std::size_t> dist{{static_cast<int>(i), 0}};
    std::deque<int> bfs{static_cast<int>(i)};
    std::set<int> mem{static_cast<int>(i)};
    bool doubt = false;
    while (!bfs.empty()) {
      int x = bfs.front();
      bfs.pop_front();
      if (dist[x] >= tau_cap) continue;
      if (pedges[x].at_horizon) {
        doubt = true;
        continue;
      }
      for (const auto& [a, k] : pedges[x].next) {
        if (shared_actions.count(a) || dist.count(k)) continue;
        dist[k] = dist[x] + 1;
        mem.insert(k);
        bfs.push_back(k);
      }
    }
    pclo[i] = {std::move(mem), doubt};
  }

  std::map<std::pair<int, Id>, std::pair<std::set<int>, bool>> presp_memo;
  auto play_resp = [&](int i, const Id& a) -> const std::pair<std::set<int>, bool>& {
    auto key = std::make_pair(i, a);
    auto it = presp_memo.find(key);
    if (it != presp_memo.end()) return it->second;
    std::set<int> out;
    bool doubt = pclo[i].second;
    for (int j : pclo[i].first) {
      if (pedges[j].at_horizon) {
        doubt = true;
        continue;
      }
      auto jt = pedges[j].next.find(a);
      if (jt == pedges[j].next.end()) continue;
      out.insert(pclo[jt->second].first.begin(), pclo[jt->second].first.end());
      doubt = doubt || pclo[jt->second].second;
    }
    return presp_memo.emplace(std::move(key), std::make_pair(std::move(out), doubt)).first->second;
  };

  // Greatest fixpoint: drop pairs with a definitely unanswerable move. Each
  // removal records the move and the (already dead) responses, so a failure
  // can be replayed as a chain of violations.
  auto pid = [&](std::size_t m, std::size_t i) { return m * P + i; };
  std::vector<char> alive(cuts.size() * P, 1);
  struct Viol {
    Id label;
    int clause;
    std::vector<std::size_t> succ;
  };
  std::map<std::size_t, Viol> removed;

  auto check_pair = [&](std::size_t m, std::size_t i) -> std::optional<Viol> {
    for (const CutEdge& e : cedges[m]) {
      if (e.obs) {
        const auto& [resp, doubt] = play_resp(static_cast<int>(i), *e.obs);
        bool ok = false;
        for (int j : resp)
          if (alive[pid(e.to, j)]) {
            ok = true;
            break;
          }
        if (!ok && !doubt) {
          Viol v{*e.obs, 1, {}};
          for (int j : resp) v.succ.push_back(pid(e.to, j));
          return v;
        }
      } else {
        const auto& [resp, doubt] = pclo[i];
        bool ok = false;
        for (int j : resp)
          if (alive[pid(e.to, j)]) {
            ok = true;
            break;
          }
        if (!ok && !doubt) {
          Viol v{e.label, 2, {}};
          for (int j : resp) v.succ.push_back(pid(e.to, j));
          return v;
        }
      }
    }
    if (!pedges[i].at_horizon) {
      for (const auto& [a, k] : pedges[i].next) {
        if (shared_actions.count(a)) {
          const std::set<int>& resp = cut_resp(static_cast<int>(m), a);
          bool ok = false;
          for (int m2 : resp)
            if (alive[pid(m2, k)]) {
              ok = true;
              break;
            }
          if (!ok) {
            Viol v{a, 3, {}};
            for (int m2 : resp) v.succ.push_back(pid(m2, k));
            return v;
          }
        } else {
          bool ok = false;
          for (int m2 : cclo[m])
            if (alive[pid(m2, k)]) {
              ok = true;
              break;
            }
          if (!ok) {
            Viol v{a, 4, {}};
            for (int m2 : cclo[m]) v.succ.push_back(pid(m2, k));
            return v;
          }
        }
      }
    }
    return std::nullopt;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t m = 0; m < cuts.size(); ++m)
      for (std::size_t i = 0; i < P; ++i) {
        if (!alive[pid(m, i)]) continue;
        if (auto v = check_pair(m, i)) {
          alive[pid(m, i)] = 0;
          removed.emplace(pid(m, i), std::move(*v));
          changed = true;
        }
      }
  }

  const std::size_t init_pair = pid(0, static_cast<std::size_t>(play_ix.at({})));
  if (alive[init_pair]) {
    w.verdict = BisimVerdict::pass;
    w.detail = "bisimilar on all moves within the horizon";
    std::set<std::size_t> reach{init_pair};
    std::deque<std::size_t> bfs{init_pair};
    while (!bfs.empty()) {
      std::size_t x = bfs.front();
      bfs.pop_front();
      std::size_t m = x / P, i = x % P;
      auto push = [&](std::size_t y) {
        if (alive[y] && reach.insert(y).second) bfs.push_back(y);
      };
      for (const CutEdge& e : cedges[m]) {
        if (e.obs)
          for (int j : play_resp(static_cast<int>(i), *e.obs).first) push(pid(e.to, j));
        else
          for (int j : pclo[i].first) push(pid(e.to, j));
      }
      if (!pedges[i].at_horizon)
        for (const auto& [a, k] : pedges[i].next) {
          if (shared_actions.count(a))
            for (int m2 : cut_resp(static_cast<int>(m), a)) push(pid(m2, k));
          else
            for (int m2 : cclo[m]) push(pid(m2, k));
        }
    }
    for (std::size_t x : reach) {
      std::size_t m = x / P, i = x % P;
      Marking mk;
      for (int n : cuts[m]) mk.add(ix.id_of(n));
      w.relation.insert({std::move(mk), plays[i]});
    }
    return w;
  }

  w.verdict = BisimVerdict::fail;
  std::set<std::size_t> seen{init_pair};
  std::deque<std::pair<std::size_t, std::vector<Id>>> bfs;
  bfs.push_back({init_pair, {}});
  while (!bfs.empty()) {
    auto [x, path] = bfs.front();
    bfs.pop_front();
    const Viol& v = removed.at(x);
    std::vector<Id> ext = path;
    ext.push_back(v.label);
    if (v.succ.empty()) {
      w.counterexample = ext;
      w.detail = "clause " + std::to_string(v.clause) + " violated: no response to " + v.label +
                 (path.empty() ? std::string() : " after [" + join_labels(path) + "]");
      return w;
    }
    for (std::size_t y : v.succ)
      if (seen.insert(y).second) bfs.push_back({y, ext});
  }
  // Unreachable in practice: every removal chain bottoms out at a move with
  // no recorded responses. Report the first step defensively.
  w.counterexample = {removed.at(init_pair).label};
  w.detail = "initial pair eliminated (clause " +
             std::to_string(removed.at(init_pair).clause) + ")";
  return w;
}

namespace {

// Builds the strategy a decision rule induces: the unfolding keeping exactly
// the events every system condition in their precondition allows, with the
// causal-past hashes computed the same way the quotient engine computes them.
std::optional<Strategy> materialize_rule(const PetriGame& g, const detail::Rule& rule, int memory,
                                         const std::map<Id, Id>* alias, std::size_t depth,
                                         std::size_t node_cap) {
  auto al = [&](const Id& x) -> Id {
    if (!alias) return x;
    auto it = alias->find(x);
    return it == alias->end() ? x : it->second;
  };
  BpBuilder b(g.net);
  std::map<int, std::vector<std::uint64_t>> lv;
  std::function<const std::vector<std::uint64_t>&(int)> levels =
      [&](int n) -> const std::vector<std::uint64_t>& {
    auto it = lv.find(n);
    if (it != lv.end()) return it->second;
    std::vector<std::uint64_t> v(static_cast<std::size_t>(memory) + 1);
    const Id q = al(b.label_of(n));
    v[0] = detail::seed_level(q);
    if (b.pre(n).empty()) {
      std::uint64_t seed = detail::init_level(q);
      for (int j = 1; j <= memory; ++j) v[j] = seed;
    } else {
      int e = b.pre(n).front();
      const Id t = al(b.label_of(e));
      for (int j = 1; j <= memory; ++j) {
        std::vector<std::uint64_t> prev;
        for (int c2 : b.pre(e)) prev.push_back(levels(c2)[j - 1]);
        v[j] = detail::step_level(q, t, std::move(prev));
      }
    }
    return lv.emplace(n, std::move(v)).first->second;
  };

  auto allow = [&](const Id& t, const std::vector<int>& cut) {
    for (int n : cut) {
      const Id& q = b.label_of(n);
      if (!g.is_system(q)) continue;
      detail::RuleKey key{al(q), levels(n)[memory]};
      auto it = rule.find(key);
      if (it == rule.end() || !it->second.count(al(t))) return false;
    }
    return true;
  };
  try {
    b.saturate(depth, allow, node_cap);
  } catch (const BoundExceeded&) {
    return std::nullopt;
  }

  Strategy out;
  out.decision_memory = memory;
  out.rule = rule;
  for (int n = 0; n < b.num_nodes(); ++n) {
    if (b.is_event(n)) continue;
    const Id& q = b.label_of(n);
    if (!g.is_system(q)) continue;
    detail::RuleKey key{al(q), levels(n)[memory]};
    std::set<Id> dec;
    auto it = rule.find(key);
    if (it != rule.end())
      for (const Id& t : g.net.post_p(q).support())
        if (it->second.count(al(t))) dec.insert(t);
    out.decision[b.id_of(n)] = std::move(dec);
  }
  out.bp = b.finish();
  return out;
}

// Depth-first search over decision rules with keys discovered on demand: a
// key missing from the rule refuses everything, so freshly reached keys are
// first pinned to the empty choice (same semantics) and then advanced
// chronologically. Reached keys shrink monotonically under refusal, keeping
// the tree finite.
std::optional<Strategy> solve_rules(const PetriGame& g, const std::map<Id, Id>* alias,
                                    std::size_t depth, int memory, std::size_t state_cap) {
  if (memory < 0) throw std::invalid_argument("decision memory must be non-negative");
  auto disc = detail::explore_quotient(g, memory, alias, nullptr, state_cap);
  if (!disc.complete) throw SizeLimit("decision-key discovery exceeded the state cap");

  auto al = [&](const Id& x) -> Id {
    if (!alias) return x;
    auto it = alias->find(x);
    return it == alias->end() ? x : it->second;
  };
  std::map<Id, std::set<Id>> post_labels;
  for (const Id& q : g.net.places)
    for (const Id& t : g.net.post_p(q).support()) post_labels[al(q)].insert(al(t));

  std::map<detail::RuleKey, std::vector<std::set<Id>>> key_opts;
  auto opts_of = [&](const detail::RuleKey& k) -> const std::vector<std::set<Id>>& {
    auto it = key_opts.find(k);
    if (it != key_opts.end()) return it->second;
    return key_opts.emplace(k, subsets_small_first(post_labels[k.first])).first->second;
  };

  std::vector<std::pair<detail::RuleKey, std::size_t>> stack;
  std::size_t probes = 0;
  while (true) {
    if (++probes > 200000)
      throw SizeLimit("rule search exceeded 200000 candidate evaluations");
    detail::Rule rule;
    std::set<detail::RuleKey> on_stack;
    for (const auto& [k, oi] : stack) {
      rule[k] = opts_of(k)[oi];
      on_stack.insert(k);
    }
    auto qr = detail::explore_quotient(g, memory, alias, &rule, state_cap);
    if (qr.complete && qr.report.verdict == Verdict::winning) {
      auto strat = materialize_rule(g, rule, memory, alias, depth, state_cap);
      if (strat) {
        bool ok = strategy_winning(g, *strat, depth, state_cap).verdict == Verdict::winning &&
                  check_justified_refusal(g, *strat, depth).ok;
        if (ok && alias) ok = check_pi_insensitive(g, *alias, *strat, depth).ok;
        if (ok) return strat;
      }
      // The quotient claimed a win the materialized strategy could not
      // confirm within the depth; keep searching.
    }
    std::vector<detail::RuleKey> fresh;
    for (const auto& k : qr.keys)
      if (!on_stack.count(k)) fresh.push_back(k);
    std::sort(fresh.begin(), fresh.end());
    for (const auto& k : fresh) stack.push_back({k, 0});
    bool advanced = false;
    while (!stack.empty()) {
      auto& [k, oi] = stack.back();
      if (oi + 1 < opts_of(k).size()) {
        ++oi;
        advanced = true;
        break;
      }
      stack.pop_back();
    }
    if (!advanced) return std::nullopt;
  }
}

}  // namespace

std::optional<Strategy> solve_pg(const PetriGame& g, std::size_t depth, int decision_memory,
                                 std::size_t state_cap) {
  return solve_rules(g, nullptr, depth, decision_memory, state_cap);
}

std::optional<Strategy> solve_pg_pi_insensitive(const PetriGame& comp_game,
                                                const std::map<Id, Id>& pi, std::size_t depth,
                                                int decision_memory, std::size_t state_cap) {
  return solve_rules(comp_game, &pi, depth, decision_memory, state_cap);
}

JrReport check_pi_insensitive(const PetriGame& comp_game, const std::map<Id, Id>& pi,
                              const Strategy& s, std::size_t depth) {
  JrReport report;
  BpIndex ix(s.bp);
  auto im = [&](const Id& x) -> Id {
    auto it = pi.find(x);
    return it == pi.end() ? x : it->second;
  };
  std::vector<std::size_t> heights = bp_heights(ix);
  std::map<Id, std::vector<int>> conds_by_label;
  std::map<std::pair<Id, std::vector<int>>, int> events_by_footprint;
  std::vector<std::set<Id>> consumed_classes(ix.size());
  for (int n = 0; n < ix.size(); ++n) {
    if (ix.is_event(n)) {
      std::vector<int> pre = ix.pre(n);
      std::sort(pre.begin(), pre.end());
      events_by_footprint[{ix.label_of(n), pre}] = n;
      for (int q : ix.pre(n)) consumed_classes[q].insert(im(ix.label_of(n)));
    } else {
      conds_by_label[ix.label_of(n)].push_back(n);
    }
  }

  for (const Id& t : comp_game.net.transitions) {
    const std::vector<Id> pre_places = comp_game.net.pre_t(t).support();
    concurrent_tuples(ix, conds_by_label, pre_places, [&](const std::vector<int>& C) {
      std::size_t h = 0;
      for (int q : C) h = std::max(h, heights[q]);
      if (h + 1 > depth) return;
      std::vector<int> key(C);
      std::sort(key.begin(), key.end());
      if (events_by_footprint.count({t, key})) return;
      // Missing event: some system condition must refuse the whole class.
      for (int q : key)
        if (comp_game.is_system(ix.label_of(q)) && !consumed_classes[q].count(im(t))) return;
      std::vector<Id> ids;
      for (int q : key) ids.push_back(ix.id_of(q));
      report.ok = false;
      report.violations.push_back("transition " + t + " (class " + im(t) +
                                  ") unjustifiably missing from {" + join_labels(ids) + "}");
    });
  }
  return report;
}

std::optional<Controller> solve_cg(const ControlGame& c, std::size_t bound, int view_memory,
                                   std::size_t state_cap) {
  const AsyncAutomaton& aut = c.automaton;
  using Key = std::pair<Id, std::vector<Id>>;

  std::map<Id, std::vector<std::set<Id>>> proc_opts;
  for (const Id& p : aut.processes) {
    std::set<Id> base;
    for (const Id& a : aut.alphabet.actions_of(p))
      if (c.is_controllable(a)) base.insert(a);
    proc_opts.emplace(p, subsets_small_first(base));
  }

  // Same on-demand scheme as the rule search: an unassigned view answers the
  // empty set, so fresh views enter at the empty choice and are advanced
  // chronologically until a winning table emerges or the tree is exhausted.
  std::vector<std::pair<Key, std::size_t>> stack;
  std::size_t probes = 0;
  while (true) {
    if (++probes > 100000)
      throw SizeLimit("controller search exceeded 100000 candidate evaluations");
    Controller cand;
    cand.memory = view_memory;
    for (const auto& [k, oi] : stack) cand.table[k] = proc_opts.at(k.first)[oi];
    std::set<Key> visited;
    Controller probe;
    probe.memory = view_memory;
    probe.fn = [&](const Id& p, const Trace& u) -> std::set<Id> {
      Key k{p, cand.key_of(u.normal_form)};
      visited.insert(k);
      auto it = cand.table.find(k);
      if (it == cand.table.end()) return {};
      return it->second;
    };
    WinReport rep = controller_winning_bounded(c, probe, bound, state_cap);
    if (rep.verdict == Verdict::winning) {
      WinReport confirm = controller_winning_bounded(c, cand, bound, state_cap);
      if (confirm.verdict == Verdict::winning) return cand;
    }
    std::vector<Key> fresh;
    for (const auto& k : visited)
      if (!cand.table.count(k)) fresh.push_back(k);
    std::sort(fresh.begin(), fresh.end());
    for (const auto& k : fresh) stack.push_back({k, 0});
    bool advanced = false;
    while (!stack.empty()) {
      auto& [k, oi] = stack.back();
      if (oi + 1 < proc_opts.at(k.first).size()) {
        ++oi;
        advanced = true;
        break;
      }
      stack.pop_back();
    }
    if (!advanced) return std::nullopt;
  }
}

}  // namespace gb
