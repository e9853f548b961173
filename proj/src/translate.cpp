#include "gamebridge/translate.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gamebridge/errors.hpp"
#include "gamebridge/unfolding.hpp"
#include "quotient.hpp"

namespace gb {

// ---------------------------------------------------------------------------
// naming

std::string show_id_set(const std::set<Id>& xs) {
  std::string out = "{";
  for (const Id& x : xs) {
    if (out.size() > 1) out += ',';
    out += x;
  }
  return out + "}";
}

Id tau_name(const Id& state, const std::set<Id>& commitment) {
  return "tau(" + state + "," + show_id_set(commitment) + ")";
}

Id com_name(const Id& state, const std::set<Id>& commitment) {
  return "com(" + state + "," + show_id_set(commitment) + ")";
}

Id zap_name(const Id& state, const std::set<Id>& commitment, const Id& t1, const Id& t2) {
  return "zap(" + state + "," + show_id_set(commitment) + "," + t1 + "," + t2 + ")";
}

Id act_name(const Id& action, const std::vector<Id>& states,
            const std::vector<std::set<Id>>& commitments) {
  std::string ss = "[", cs = "[";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) {
      ss += ',';
      cs += ',';
    }
    ss += states[i];
    cs += show_id_set(commitments[i]);
  }
  return "act(" + action + "," + ss + "]," + cs + "])";
}

Id bot_name(const Id& process) { return "bot(" + process + ")"; }
Id dl_name(const Id& process) { return "dl(" + process + ")"; }
Id top_name(const Id& process) { return "top(" + process + ")"; }

Id tch_name(const Id& state, const std::set<Id>& commitment) {
  return "tch(" + state + "," + show_id_set(commitment) + ")";
}

Id tdl_name(const Marking& m) {
  std::string key;
  for (const Id& q : m.expand()) {
    if (!key.empty()) key += '|';
    key += q;
  }
  return "tdl(" + detail::hex12(detail::fnv64(key)) + ")";
}

// ---------------------------------------------------------------------------
// shared helpers

namespace {

// All subsets of `base` in deterministic (bitmask over sorted elements) order.
std::vector<std::set<Id>> subsets_of(const std::set<Id>& base, const std::string& what) {
  if (base.size() > 16)
    throw SizeLimit(what + " would range over 2^" + std::to_string(base.size()) +
                    " alternatives");
  std::vector<Id> elems(base.begin(), base.end());
  std::vector<std::set<Id>> out;
  out.reserve(std::size_t{1} << elems.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << elems.size()); ++mask) {
    std::set<Id> s;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.insert(elems[i]);
    out.push_back(std::move(s));
  }
  return out;
}

// Odometer over one option list per position; does nothing when a position
// has no options.
template <typename T, typename F>
void for_each_combination(const std::vector<std::vector<T>>& options, F&& f) {
  for (const auto& opts : options)
    if (opts.empty()) return;
  std::vector<std::size_t> idx(options.size(), 0);
  std::vector<T> pick(options.size());
  while (true) {
    for (std::size_t i = 0; i < options.size(); ++i) pick[i] = options[i][idx[i]];
    f(pick);
    std::size_t i = 0;
    for (; i < options.size(); ++i) {
      if (++idx[i] < options[i].size()) break;
      idx[i] = 0;
    }
    if (i == options.size()) break;
  }
}

// Local stepping tables of an automaton: process -> (state, action) -> successor.
std::map<Id, std::map<std::pair<Id, Id>, Id>> local_tables(const AsyncAutomaton& aut) {
  std::map<Id, std::map<std::pair<Id, Id>, Id>> out;
  for (const Id& p : aut.processes) out[p];
  for (const DeltaEntry& e : aut.delta)
    for (const auto& [p, s] : e.from) out[p][{s, e.action}] = e.to.at(p);
  return out;
}

// Chooser actions of the control game built from `g`, mapped back to the
// (place, committed set) pair each one stands for.
std::map<Id, std::pair<Id, std::set<Id>>> chooser_index(const PetriGame& g) {
  std::map<Id, std::pair<Id, std::set<Id>>> out;
  for (const Id& q : g.system_places) {
    auto post = g.net.post_p(q).support();
    for (auto& A : subsets_of(std::set<Id>(post.begin(), post.end()),
                              "commitment of place " + q))
      out[tau_name(q, A)] = {q, A};
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Petri game -> control game

namespace {

// One sequential component of the game: a subnet holding a single token that
// its transitions move between local places. Covers both distribution kinds;
// the label maps translate local nodes back to the game (the identity for
// slices, the folding for transition copies).
struct Component {
  Id process;
  std::set<Id> places;
  Id init;
  std::set<Id> transitions;
  std::map<Id, Id> pre_of, post_of;  // local transition -> the place it leaves/enters
};

struct ComponentSystem {
  const PetriGame* game = nullptr;
  std::vector<Component> comps;
  std::map<Id, Id> place_label;
  std::map<Id, Id> trans_label;
};

PgToCgResult build_commitment_game(const ComponentSystem& sys, PgToCgVariant variant) {
  const PetriGame& g = *sys.game;
  const std::size_t k = sys.comps.size();

  auto label_p = [&](const Id& q) -> const Id& { return sys.place_label.at(q); };
  auto label_t = [&](const Id& t) -> const Id& { return sys.trans_label.at(t); };
  auto sys_place = [&](const Id& q) { return g.is_system(label_p(q)); };

  // Commitment alternatives of a local system place range over the game
  // transitions consuming the place it stands for, so a component cannot
  // distinguish copies of the same transition.
  std::map<Id, std::vector<std::set<Id>>> subs;
  for (const auto& comp : sys.comps)
    for (const Id& q : comp.places)
      if (sys_place(q)) {
        auto post = g.net.post_p(label_p(q)).support();
        subs[q] = subsets_of(std::set<Id>(post.begin(), post.end()),
                             "commitment of place " + q);
      }

  std::map<Id, std::vector<std::size_t>> comps_of_trans;  // ascending indices
  std::map<Id, std::vector<std::size_t>> comps_of_label;
  for (std::size_t i = 0; i < k; ++i)
    for (const Id& t : sys.comps[i].transitions) {
      comps_of_trans[t].push_back(i);
      auto& v = comps_of_label[label_t(t)];
      if (v.empty() || v.back() != i) v.push_back(i);
    }

  AsyncAutomaton aut;
  std::map<Id, std::set<Id>> special;
  for (std::size_t i = 0; i < k; ++i) {
    const Component& comp = sys.comps[i];
    aut.processes.insert(comp.process);
    aut.initial[comp.process] = comp.init;
    auto& states = aut.local_states[comp.process];
    auto& win = special[comp.process];
    for (const Id& q : comp.places) {
      states.insert(q);
      bool winning = g.special.count(label_p(q)) != 0;
      if (winning) win.insert(q);
      if (sys_place(q))
        for (const auto& A : subs.at(q)) {
          states.insert(com_name(q, A));
          if (winning) win.insert(com_name(q, A));
        }
    }
    if (variant == PgToCgVariant::hatted) states.insert(bot_name(comp.process));
  }

  // States from which a component takes one of its transitions: the source
  // place directly when it is an environment place, otherwise any commitment
  // that includes the transition's label.
  auto sources = [&](std::size_t ci, const Id& t) {
    const Id& q = sys.comps[ci].pre_of.at(t);
    std::vector<Id> out;
    if (!sys_place(q)) {
      out.push_back(q);
    } else {
      for (const auto& A : subs.at(q))
        if (A.count(label_t(t))) out.push_back(com_name(q, A));
    }
    return out;
  };

  // Synchronized moves of the game transitions.
  for (const auto& [t, cs] : comps_of_trans) {
    aut.alphabet.actions.insert(t);
    for (std::size_t ci : cs) aut.alphabet.dom[t].insert(sys.comps[ci].process);
    std::vector<std::vector<Id>> opts;
    for (std::size_t ci : cs) opts.push_back(sources(ci, t));
    for_each_combination(opts, [&](const std::vector<Id>& pick) {
      DeltaEntry e;
      e.action = t;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const Component& comp = sys.comps[cs[j]];
        e.from[comp.process] = pick[j];
        e.to[comp.process] = comp.post_of.at(t);
      }
      aut.delta.push_back(std::move(e));
    });
  }

  // Commitment choosers: the only controllable actions.
  std::set<Id> taus;
  for (std::size_t i = 0; i < k; ++i) {
    const Component& comp = sys.comps[i];
    for (const Id& q : comp.places) {
      if (!sys_place(q)) continue;
      for (const auto& A : subs.at(q)) {
        Id a = tau_name(q, A);
        taus.insert(a);
        aut.alphabet.actions.insert(a);
        aut.alphabet.dom[a].insert(comp.process);
        DeltaEntry e;
        e.action = a;
        e.from[comp.process] = q;
        e.to[comp.process] = com_name(q, A);
        aut.delta.push_back(std::move(e));
      }
    }
  }

  if (variant == PgToCgVariant::hatted) {
    // Clash actions: once a component committed to two transitions that both
    // remain possible, the environment may call the bluff and send every
    // component that hosts one of them to its failure state.
    std::vector<std::map<Id, std::set<Id>>> labels_from(k);  // env place -> labels
    std::vector<std::set<Id>> has_label(k);
    for (std::size_t i = 0; i < k; ++i)
      for (const Id& t : sys.comps[i].transitions) {
        has_label[i].insert(label_t(t));
        const Id& r = sys.comps[i].pre_of.at(t);
        if (!sys_place(r)) labels_from[i][r].insert(label_t(t));
      }

    for (std::size_t ci = 0; ci < k; ++ci) {
      const Component& owner = sys.comps[ci];
      for (const Id& q : owner.places) {
        if (!sys_place(q)) continue;
        for (const auto& A : subs.at(q)) {
          std::vector<Id> as(A.begin(), A.end());
          for (std::size_t x = 0; x < as.size(); ++x)
            for (std::size_t y = x + 1; y < as.size(); ++y) {
              const Id& t1 = as[x];
              const Id& t2 = as[y];
              Id action = zap_name(q, A, t1, t2);
              std::set<std::size_t> jset{ci};
              for (const Id& t : {t1, t2})
                if (auto it = comps_of_label.find(t); it != comps_of_label.end())
                  jset.insert(it->second.begin(), it->second.end());
              std::vector<std::size_t> J(jset.begin(), jset.end());
              aut.alphabet.actions.insert(action);
              for (std::size_t cj : J)
                aut.alphabet.dom[action].insert(sys.comps[cj].process);
              std::vector<std::vector<Id>> opts;
              for (std::size_t cj : J) {
                std::vector<Id> from;
                if (cj == ci) {
                  from.push_back(com_name(q, A));
                } else {
                  // A bystander joins from any state that could still take
                  // part in every clashing transition it hosts.
                  const Component& comp = sys.comps[cj];
                  auto hosts = [&](const Id& t) { return has_label[cj].count(t) != 0; };
                  for (const Id& r : comp.places) {
                    if (sys_place(r)) continue;
                    bool ok = true;
                    for (const Id& t : {t1, t2}) {
                      if (!hosts(t)) continue;
                      auto itr = labels_from[cj].find(r);
                      if (itr == labels_from[cj].end() || itr->second.count(t) == 0)
                        ok = false;
                    }
                    if (ok) from.push_back(r);
                  }
                  for (const Id& r : comp.places) {
                    if (!sys_place(r)) continue;
                    for (const auto& B : subs.at(r)) {
                      bool ok = true;
                      for (const Id& t : {t1, t2})
                        if (hosts(t) && B.count(t) == 0) ok = false;
                      if (ok) from.push_back(com_name(r, B));
                    }
                  }
                }
                opts.push_back(std::move(from));
              }
              for_each_combination(opts, [&](const std::vector<Id>& pick) {
                DeltaEntry e;
                e.action = action;
                for (std::size_t j = 0; j < J.size(); ++j) {
                  const Id& p = sys.comps[J[j]].process;
                  e.from[p] = pick[j];
                  e.to[p] = bot_name(p);
                }
                aut.delta.push_back(std::move(e));
              });
            }
        }
      }
    }
  }

  ControlGame cg;
  cg.automaton = std::move(aut);
  cg.controllable = taus;
  for (const Id& a : cg.automaton.alphabet.actions)
    if (taus.count(a) == 0) cg.uncontrollable.insert(a);
  cg.special_states = std::move(special);
  cg.objective = Objective::reachability;

  PgToCgResult res;
  res.control_game = std::move(cg);
  res.variant = variant;
  for (std::size_t i = 0; i < k; ++i) {
    res.process_of_slice.push_back(sys.comps[i].process);
    res.slice_of_process[sys.comps[i].process] = i;
  }
  return res;
}

}  // namespace

PgToCgResult pg_to_cg(const PetriGame& g, const SliceDistribution& d,
                      PgToCgVariant variant) {
  if (g.objective != Objective::reachability) throw NonReachabilityObjective();
  auto problems = validate_slice_distribution(g.net, d);
  if (!problems.empty()) throw InvalidDistribution(problems.front());

  ComponentSystem sys;
  sys.game = &g;
  for (std::size_t i = 0; i < d.slices.size(); ++i) {
    const PetriNet& sl = d.slices[i];
    Component comp;
    comp.process = "p" + std::to_string(i + 1);
    comp.places = sl.places;
    comp.init = sl.initial_marking.support().front();
    comp.transitions = sl.transitions;
    for (const Id& t : sl.transitions) {
      Marking pre = sl.pre_t(t);
      Marking post = sl.post_t(t);
      if (pre.size() != 1 || post.size() != 1)
        throw InvalidDistribution("transition " + t + " moves " +
                                  std::to_string(pre.size()) +
                                  " tokens of one slice; a sequential process "
                                  "can follow exactly one");
      comp.pre_of[t] = pre.support().front();
      comp.post_of[t] = post.support().front();
    }
    for (const Id& q : sl.places) sys.place_label[q] = q;
    for (const Id& t : sl.transitions) sys.trans_label[t] = t;
    sys.comps.push_back(std::move(comp));
  }
  return build_commitment_game(sys, variant);
}

PgToCgResult pg_to_cg(const PetriGame& g, const SingularNetDistribution& snd,
                      PgToCgVariant variant) {
  if (g.objective != Objective::reachability) throw NonReachabilityObjective();
  for (const auto& sn : snd.nets) {
    auto problems = validate_singular_net(g.net, sn);
    if (!problems.empty()) throw InvalidDistribution(problems.front());
  }
  auto report = validate_snd(g.net, snd);
  if (!report.problems.empty()) throw InvalidDistribution(report.problems.front());

  ComponentSystem sys;
  sys.game = &g;
  for (std::size_t i = 0; i < snd.nets.size(); ++i) {
    const PetriNet& m = snd.nets[i].net;
    Component comp;
    comp.process = "p" + std::to_string(i + 1);
    comp.places = m.places;
    comp.init = m.initial_marking.support().front();
    comp.transitions = m.transitions;
    for (const Id& t : m.transitions) {
      comp.pre_of[t] = m.pre_t(t).support().front();
      comp.post_of[t] = m.post_t(t).support().front();
    }
    for (const Id& q : m.places) sys.place_label[q] = snd.pi.at(q);
    for (const Id& t : m.transitions) sys.trans_label[t] = snd.pi.at(t);
    sys.comps.push_back(std::move(comp));
  }
  return build_commitment_game(sys, variant);
}

// ---------------------------------------------------------------------------
// control game -> Petri game

CgToPgResult cg_to_pg(const ControlGame& c, CgToPgVariant variant,
                      std::size_t state_cap) {
  if (c.objective != Objective::safety) throw NonSafetyObjective();
  const AsyncAutomaton& aut = c.automaton;

  std::map<Id, Id> owner;  // local state -> its process
  for (const Id& p : aut.processes) {
    auto it = aut.local_states.find(p);
    if (it == aut.local_states.end()) continue;
    for (const Id& s : it->second)
      if (!owner.emplace(s, p).second)
        throw std::invalid_argument("cg_to_pg: state " + s +
                                    " belongs to two processes");
  }

  // Commitment alternatives of a state: subsets of its locally enabled
  // controllable actions.
  std::map<Id, std::vector<std::set<Id>>> subs;
  for (const auto& [s, p] : owner) {
    std::set<Id> en;
    for (const Id& a : aut.locally_enabled(p, s))
      if (c.is_controllable(a)) en.insert(a);
    subs[s] = subsets_of(en, "commitment of state " + s);
  }

  CgToPgResult res;
  res.variant = variant;
  PetriGame game;
  game.objective = Objective::safety;

  for (const auto& [s, p] : owner) {
    game.net.add_place(s, aut.initial.at(p) == s ? 1 : 0);
    game.system_places.insert(s);
    res.zeta[s] = s;
    for (const auto& A : subs.at(s)) {
      Id cp = com_name(s, A);
      game.net.add_place(cp, 0);
      game.environment_places.insert(cp);
      res.zeta[cp] = s;
      Id tau = tau_name(s, A);
      game.net.add_transition(tau);
      game.net.arc(s, tau);
      game.net.arc(tau, cp);
    }
  }
  for (const Id& p : aut.processes) {
    auto it = c.special_states.find(p);
    if (it == c.special_states.end()) continue;
    for (const Id& s : it->second) game.special.insert(s);
  }

  // One transition per synchronized move and combination of commitments;
  // controllable moves only where every participant committed to them.
  for (const DeltaEntry& e : aut.delta) {
    std::vector<Id> procs, states;
    for (const auto& [p, s] : e.from) {
      procs.push_back(p);
      states.push_back(s);
    }
    bool ctrl = c.is_controllable(e.action);
    std::vector<std::vector<const std::set<Id>*>> opts;
    for (std::size_t j = 0; j < states.size(); ++j) {
      std::vector<const std::set<Id>*> o;
      for (const auto& A : subs.at(states[j]))
        if (!ctrl || A.count(e.action) != 0) o.push_back(&A);
      opts.push_back(std::move(o));
    }
    for_each_combination(opts, [&](const std::vector<const std::set<Id>*>& pick) {
      std::vector<std::set<Id>> commits;
      commits.reserve(pick.size());
      for (auto* A : pick) commits.push_back(*A);
      Id t = act_name(e.action, states, commits);
      game.net.add_transition(t);
      res.action_of[t] = e.action;
      for (std::size_t j = 0; j < states.size(); ++j)
        game.net.arc(com_name(states[j], commits[j]), t);
      for (const auto& kv : e.to) game.net.arc(t, kv.second);
    });
  }

  // Final markings of this bare net whose underlying states could still
  // move: every component idles in a commitment, yet the committed sets just
  // fail to intersect on any action.
  try {
    auto reach = reachable_markings(game.net, ReachMode::fixpoint, 0, state_cap);
    NetIndex ix(game.net);
    for (const Marking& m : reach.markings) {
      if (!is_final(ix, m)) continue;
      GlobalState gs;
      for (const auto& [q, cnt] : m.entries()) {
        const Id& s = res.zeta.at(q);
        gs[owner.at(s)] = s;
        (void)cnt;
      }
      if (!aut.enabled_actions(gs).empty()) res.artificial_deadlocks.insert(m);
    }
  } catch (const BoundExceeded&) {
    throw StateCapExceeded("deadlock analysis of the translated net passed " +
                           std::to_string(state_cap) + " markings");
  }

  if (variant == CgToPgVariant::with_deadlock_detection) {
    for (const Id& p : aut.processes) {
      game.net.add_place(dl_name(p), 0);
      game.environment_places.insert(dl_name(p));
      game.special.insert(dl_name(p));
    }
    for (const Marking& m : res.artificial_deadlocks) {
      Id t = tdl_name(m);
      game.net.add_transition(t);
      for (const auto& [q, cnt] : m.entries()) game.net.arc(q, t, cnt);
      for (const Id& p : aut.processes) game.net.arc(t, dl_name(p));
    }
  } else if (variant == CgToPgVariant::with_challenge) {
    for (const Id& p : aut.processes) {
      game.net.add_place(top_name(p), 0);
      game.environment_places.insert(top_name(p));
    }
    for (const auto& [s, p] : owner)
      for (const auto& A : subs.at(s)) {
        Id t = tch_name(s, A);
        game.net.add_transition(t);
        game.net.arc(com_name(s, A), t);
        game.net.arc(t, top_name(p));
      }
  }

  res.petri_game = std::move(game);
  return res;
}

// ---------------------------------------------------------------------------
// strategy -> controller (game into control game)

Controller strategy_to_controller_pg2cg(const PetriGame& g, const SliceDistribution& d,
                                        const PgToCgResult& res, const Strategy& s) {
  auto ix = std::make_shared<BpIndex>(s.bp);
  auto steps =
      std::make_shared<std::map<Id, std::map<std::pair<Id, Id>, Id>>>(
          local_tables(res.control_game.automaton));
  std::map<Id, std::set<Id>> dom = res.control_game.automaton.alphabet.dom;
  std::map<Id, Id> init = res.control_game.automaton.initial;
  std::map<Id, std::set<Id>> slice_places;
  for (std::size_t i = 0; i < d.slices.size(); ++i)
    slice_places[res.process_of_slice.at(i)] = d.slices[i].places;
  std::set<Id> net_trans = g.net.transitions;
  std::set<Id> sys_places = g.system_places;

  Controller ctrl;
  ctrl.memory = -1;
  ctrl.fn = [=](const Id& p, const Trace& u) -> std::set<Id> {
    auto itp = steps->find(p);
    auto iti = init.find(p);
    if (itp == steps->end() || iti == init.end()) return {};
    // Local state after the view: only this process's actions move it.
    Id state = iti->second;
    for (const Id& a : u.normal_form) {
      auto itd = dom.find(a);
      if (itd == dom.end() || itd->second.count(p) == 0) continue;
      auto it = itp->second.find({state, a});
      if (it == itp->second.end()) return {};
      state = it->second;
    }
    // Only an uncommitted token on a system place gets an answer.
    if (sys_places.count(state) == 0) return {};
    // Replay the net projection of the view inside the strategy and read the
    // decision of the token's condition there.
    std::vector<Id> labels;
    for (const Id& a : u.normal_form)
      if (net_trans.count(a) != 0) labels.push_back(a);
    auto cut = ix->simulate(labels);
    if (!cut) return {};
    auto itm = slice_places.find(p);
    if (itm == slice_places.end()) return {};
    int cond = -1;
    for (int n : *cut) {
      if (itm->second.count(ix->label_of(n)) == 0) continue;
      if (cond != -1) return {};
      cond = n;
    }
    if (cond < 0 || ix->label_of(cond) != state) return {};
    std::set<Id> allowed;
    for (int e : ix->post(cond)) allowed.insert(ix->label_of(e));
    return {tau_name(state, allowed)};
  };
  return ctrl;
}

// ---------------------------------------------------------------------------
// controller -> strategy (control game built from a Petri game)

Strategy controller_to_strategy_pg2cg(const PetriGame& g, const SliceDistribution& d,
                                      const PgToCgResult& res, const Controller& ctrl,
                                      std::size_t depth, std::size_t node_cap) {
  const AsyncAutomaton& aut = res.control_game.automaton;
  auto choosers = chooser_index(g);
  std::map<Id, Id> proc_of_place;
  for (std::size_t i = 0; i < d.slices.size(); ++i)
    for (const Id& q : d.slices[i].places)
      proc_of_place[q] = res.process_of_slice.at(i);
  // What each place allows when nobody restricts it.
  std::map<Id, std::set<Id>> full_post;
  for (const Id& q : g.net.places) {
    auto v = g.net.post_p(q).support();
    full_post[q] = std::set<Id>(v.begin(), v.end());
  }

  BpBuilder b(g.net);

  auto cond_height = [&](int n) -> std::size_t {
    return b.pre(n).empty() ? 0 : b.height_of_event(b.pre(n).front());
  };
  // Events of the causal past in (height, index) order: a linearization
  // compatible with causality.
  auto past_events = [&](int n) {
    std::set<int> seen{n};
    std::vector<int> stack{n}, events;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (b.is_event(x)) events.push_back(x);
      for (int y : b.pre(x))
        if (seen.insert(y).second) stack.push_back(y);
    }
    std::sort(events.begin(), events.end(), [&](int e1, int e2) {
      return std::pair(b.height_of_event(e1), e1) <
             std::pair(b.height_of_event(e2), e2);
    });
    return events;
  };

  // Appends, in process order, the chooser answer of every process whose
  // token sits uncommitted on a system place. Multiple permitted choosers
  // collapse to the union of their sets; no answer means committing to
  // nothing.
  auto extend = [&](std::vector<Id>& word, GlobalState& gs,
                    std::map<Id, std::set<Id>>& committed,
                    std::map<Id, Id>& committed_at) {
    for (auto& [p, st] : gs) {
      if (!g.net.is_place(st) || !g.is_system(st)) continue;
      Trace u = normalize(aut.alphabet, word);
      std::set<Id> answer = ctrl.lookup(p, local_view(u, p));
      std::set<Id> chosen;
      for (const Id& a : answer) {
        auto it = choosers.find(a);
        if (it != choosers.end() && it->second.first == st)
          chosen.insert(it->second.second.begin(), it->second.second.end());
      }
      word.push_back(tau_name(st, chosen));
      committed[p] = chosen;
      committed_at[p] = st;
      st = com_name(st, chosen);
    }
  };

  // The set of transitions each condition lets its token take part in.
  std::map<int, std::set<Id>> allowance;
  std::function<const std::set<Id>&(int)> allowed_of = [&](int n) -> const std::set<Id>& {
    auto hit = allowance.find(n);
    if (hit != allowance.end()) return hit->second;
    const Id& q = b.label_of(n);
    if (!g.is_system(q))
      return allowance.emplace(n, full_post.at(q)).first->second;
    // Reconstruct the control-game play of the condition's past and read the
    // commitment its process ends in.
    std::vector<Id> word;
    GlobalState gs = aut.initial_state();
    std::map<Id, std::set<Id>> committed;
    std::map<Id, Id> committed_at;
    extend(word, gs, committed, committed_at);
    for (int e : past_events(n)) {
      const Id& t = b.label_of(e);
      const DeltaEntry* de = aut.match(gs, t);
      if (!de)
        throw ReconstructionAssertionFailed("transition " + t +
                                            " is not available in the "
                                            "reconstructed play");
      for (const auto& [p, s2] : de->to) gs[p] = s2;
      word.push_back(t);
      extend(word, gs, committed, committed_at);
    }
    const Id& p = proc_of_place.at(q);
    auto itc = committed_at.find(p);
    if (itc == committed_at.end() || itc->second != q)
      throw ReconstructionAssertionFailed(
          "the past of a condition on " + q + " does not leave its process there");
    return allowance.emplace(n, committed.at(p)).first->second;
  };

  // Breadth-first closure over reachable cuts: every transition all involved
  // conditions allow is added, so each refusal traces back to a commitment.
  std::set<std::pair<Id, std::vector<int>>> added;
  std::set<std::set<int>> seen;
  std::vector<std::set<int>> queue;
  {
    auto ic = b.initial_cut();
    std::set<int> cut(ic.begin(), ic.end());
    seen.insert(cut);
    queue.push_back(std::move(cut));
  }
  while (!queue.empty()) {
    std::set<int> cut = std::move(queue.back());
    queue.pop_back();
    std::map<Id, int> at;  // the base is safe, so labels are unique per cut
    for (int n : cut) at[b.label_of(n)] = n;
    for (const Id& t : g.net.transitions) {
      std::vector<int> conds;
      std::size_t h = 0;
      bool match = true;
      const Marking pre_m = g.net.pre_t(t);
      for (const auto& [q, cnt] : pre_m.entries()) {
        auto itq = at.find(q);
        if (cnt != 1 || itq == at.end()) {
          match = false;
          break;
        }
        conds.push_back(itq->second);
        h = std::max(h, cond_height(itq->second));
      }
      if (!match || conds.empty() || h + 1 > depth) continue;
      std::sort(conds.begin(), conds.end());
      if (added.count({t, conds}) == 0) {
        bool permitted = true;
        for (int n : conds)
          if (allowed_of(n).count(t) == 0) {
            permitted = false;
            break;
          }
        if (!permitted) continue;
        b.add_event({t, conds});
        added.insert({t, conds});
        if (static_cast<std::size_t>(b.num_nodes()) > node_cap)
          throw SizeLimit("reconstructed strategy over " +
                          std::to_string(node_cap) + " nodes");
      }
    }
    for (int n : cut)
      for (int e : b.post(n)) {
        bool enabled = true;
        for (int c2 : b.pre(e))
          if (cut.count(c2) == 0) {
            enabled = false;
            break;
          }
        if (!enabled) continue;
        std::set<int> nxt = cut;
        for (int c2 : b.pre(e)) nxt.erase(c2);
        for (int c2 : b.post(e)) nxt.insert(c2);
        if (seen.insert(nxt).second) queue.push_back(std::move(nxt));
      }
  }

  Strategy out;
  for (int n = 0; n < b.num_nodes(); ++n)
    if (!b.is_event(n) && g.is_system(b.label_of(n)))
      out.decision[b.id_of(n)] = allowed_of(n);
  out.bp = b.finish();
  return out;
}

// ---------------------------------------------------------------------------
// controller -> strategy (Petri game built from a control game)

Strategy controller_to_strategy_cg2pg(const ControlGame& c, const CgToPgResult& res,
                                      const Controller& ctrl, std::size_t depth,
                                      std::size_t node_cap) {
  const PetriGame& g = res.petri_game;
  const AsyncAutomaton& aut = c.automaton;
  auto steps = local_tables(aut);
  std::map<Id, Id> owner_state;
  for (const Id& p : aut.processes) {
    auto it = aut.local_states.find(p);
    if (it == aut.local_states.end()) continue;
    for (const Id& s : it->second) owner_state[s] = p;
  }
  std::map<Id, std::set<Id>> en_ctrl;
  for (const auto& [s, p] : owner_state) {
    std::set<Id> en;
    for (const Id& a : aut.locally_enabled(p, s))
      if (c.is_controllable(a)) en.insert(a);
    en_ctrl[s] = std::move(en);
  }
  // Only choosers consume system places in the translated net.
  std::set<Id> chooser_trans;
  for (const Id& t : g.net.transitions)
    for (const Id& q : g.net.pre_t(t).support()) {
      if (g.system_places.count(q) != 0) {
        chooser_trans.insert(t);
        break;
      }
    }

  BpBuilder b(g.net);
  std::map<int, Id> chosen;  // system condition -> its chooser

  auto past_events = [&](int n) {
    std::set<int> seen{n};
    std::vector<int> stack{n}, events;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (b.is_event(x)) events.push_back(x);
      for (int y : b.pre(x))
        if (seen.insert(y).second) stack.push_back(y);
    }
    std::sort(events.begin(), events.end(), [&](int e1, int e2) {
      return std::pair(b.height_of_event(e1), e1) <
             std::pair(b.height_of_event(e2), e2);
    });
    return events;
  };

  // The chooser a fresh system condition fires: erase its past down to the
  // automaton actions, ask the controller on the local view, and commit to
  // the answer (trimmed to the alternatives the state really has).
  auto choose = [&](int n) -> const Id& {
    auto hit = chosen.find(n);
    if (hit != chosen.end()) return hit->second;
    const Id& s = b.label_of(n);
    const Id& p = owner_state.at(s);
    std::vector<Id> word;
    for (int e : past_events(n)) {
      auto ita = res.action_of.find(b.label_of(e));
      if (ita != res.action_of.end()) word.push_back(ita->second);
    }
    Trace u = normalize(aut.alphabet, word);
    Id st = aut.initial.at(p);
    for (const Id& a : u.normal_form) {
      auto itd = aut.alphabet.dom.find(a);
      if (itd == aut.alphabet.dom.end() || itd->second.count(p) == 0) continue;
      auto its = steps.at(p).find({st, a});
      if (its == steps.at(p).end())
        throw AssumptionViolated("the erased past of a condition on " + s +
                                 " takes " + a + " from state " + st +
                                 " where it is undefined");
      st = its->second;
    }
    if (st != s)
      throw AssumptionViolated("the erased past of a condition on " + s +
                               " replays to state " + st);
    std::set<Id> answer = ctrl.lookup(p, local_view(u, p));
    std::set<Id> commit;
    for (const Id& a : answer)
      if (en_ctrl.at(s).count(a) != 0) commit.insert(a);
    return chosen.emplace(n, tau_name(s, commit)).first->second;
  };

  try {
    b.saturate(
        depth,
        [&](const Id& t, const std::vector<int>& cut) {
          if (chooser_trans.count(t) == 0) return true;
          return t == choose(cut.front());
        },
        node_cap);
  } catch (const BoundExceeded& e) {
    throw SizeLimit(e.what());
  }

  // Frontier system conditions still need a decision even though their
  // chooser lies beyond the depth bound.
  for (int n = 0; n < b.num_nodes(); ++n)
    if (!b.is_event(n) && g.system_places.count(b.label_of(n)) != 0) choose(n);

  Strategy out;
  out.bp = b.finish();
  for (const auto& [n, tau] : chosen) out.decision[b.id_of(n)] = {tau};
  return out;
}

// ---------------------------------------------------------------------------
// strategy -> controller (control game back from the translated Petri game)

Controller strategy_to_controller_cg2pg(const ControlGame& c, const CgToPgResult& res,
                                        const Strategy& s) {
  auto ix = std::make_shared<BpIndex>(s.bp);
  const PetriGame& g = res.petri_game;
  const AsyncAutomaton& aut = c.automaton;
  std::map<Id, Id> act_of = res.action_of;
  std::set<Id> chooser_trans;
  for (const Id& t : g.net.transitions)
    for (const Id& q : g.net.pre_t(t).support()) {
      if (g.system_places.count(q) != 0) {
        chooser_trans.insert(t);
        break;
      }
    }
  std::map<Id, Id> owner_state;
  for (const Id& p : aut.processes) {
    auto it = aut.local_states.find(p);
    if (it == aut.local_states.end()) continue;
    for (const Id& st : it->second) owner_state[st] = p;
  }
  std::map<Id, Id> place_proc;
  for (const auto& [q, st] : res.zeta) place_proc[q] = owner_state.at(st);
  std::map<Id, std::set<Id>> commit_of;  // commitment place -> committed actions
  for (const auto& [st, p] : owner_state) {
    std::set<Id> en;
    for (const Id& a : aut.locally_enabled(p, st))
      if (c.is_controllable(a)) en.insert(a);
    for (auto& A : subsets_of(en, "commitment of state " + st))
      commit_of[com_name(st, A)] = A;
  }

  Controller out;
  out.memory = -1;
  out.fn = [=](const Id& p, const Trace& u) -> std::set<Id> {
    // Run the strategy along the view, closing under choosers in between,
    // then read the commitment this process's token sits in.
    auto close = [&](std::set<int>& cut) {
      bool again = true;
      while (again) {
        again = false;
        for (int e : ix->enabled_events(cut))
          if (chooser_trans.count(ix->label_of(e)) != 0) {
            cut = ix->fire_event(cut, e);
            again = true;
            break;
          }
      }
    };
    auto ic = ix->initial_cut();
    std::set<int> cut(ic.begin(), ic.end());
    close(cut);
    for (const Id& a : u.normal_form) {
      int hit = -1;
      for (int e : ix->enabled_events(cut)) {
        auto ita = act_of.find(ix->label_of(e));
        if (ita != act_of.end() && ita->second == a) {
          hit = e;
          break;
        }
      }
      if (hit < 0) return {};
      cut = ix->fire_event(cut, hit);
      close(cut);
    }
    for (int n : cut) {
      auto itp = place_proc.find(ix->label_of(n));
      if (itp == place_proc.end() || itp->second != p) continue;
      auto itc = commit_of.find(ix->label_of(n));
      return itc == commit_of.end() ? std::set<Id>{} : itc->second;
    }
    return {};
  };
  return out;
}

// ---------------------------------------------------------------------------
// lower-bound families

PetriGame gen_lower_bound_pg(int n) {
  if (n < 1) throw std::invalid_argument("gen_lower_bound_pg: n must be positive");
  PetriGame g;
  g.net.add_place("A", 1);
  g.net.add_place("B", 0);
  g.net.add_place("C", 0);
  g.net.add_place("D", 1);
  g.environment_places = {"A", "B", "C"};
  g.system_places = {"D"};
  for (const Id& t : {Id("a"), Id("b")}) {
    g.net.add_transition(t);
    g.net.arc("A", t);
    g.net.arc(t, "B");
  }
  for (int i = 1; i <= n; ++i) {
    Id t = "t" + std::to_string(i);
    g.net.add_transition(t);
    g.net.arc("B", t);
    g.net.arc("D", t);
    g.net.arc(t, "C");
    g.net.arc(t, "D");
  }
  g.special = {"C", "D"};
  g.objective = Objective::reachability;
  return g;
}

ControlGame gen_lower_bound_cg(int n) {
  if (n < 1) throw std::invalid_argument("gen_lower_bound_cg: n must be positive");
  ControlGame c;
  AsyncAutomaton& aut = c.automaton;
  aut.processes = {"p1"};
  aut.local_states["p1"] = {"s1", "s2"};
  aut.initial["p1"] = "s1";
  auto add_action = [&](const Id& a) {
    aut.alphabet.actions.insert(a);
    aut.alphabet.dom[a] = {"p1"};
    DeltaEntry e;
    e.action = a;
    e.from["p1"] = "s1";
    e.to["p1"] = "s2";
    aut.delta.push_back(std::move(e));
  };
  add_action("x");
  c.uncontrollable.insert("x");
  for (int i = 1; i <= n; ++i) {
    Id a = "a" + std::to_string(i);
    add_action(a);
    c.controllable.insert(a);
  }
  c.special_states["p1"] = {};
  c.objective = Objective::safety;
  return c;
}

}  // namespace gb
