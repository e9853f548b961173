#include "gamebridge/automata.hpp"

#include <algorithm>
#include <functional>

namespace gb {

void LocalProcess::add(const Id& from, const Id& action, const Id& to) {
  states.insert(from);
  states.insert(to);
  auto [it, fresh] = trans.insert({{from, action}, to});
  if (!fresh && it->second != to)
    throw error("local automaton not deterministic at (" + from + "," + action + ")");
}

const DeltaEntry* AsyncAutomaton::match(const GlobalState& global, const Id& a) const {
  for (const auto& e : delta) {
    if (e.action != a) continue;
    bool ok = true;
    for (const auto& [p, s] : e.from) {
      auto it = global.find(p);
      if (it == global.end() || it->second != s) {
        ok = false;
        break;
      }
    }
    if (ok) return &e;
  }
  return nullptr;
}

std::set<Id> AsyncAutomaton::enabled_actions(const GlobalState& global) const {
  std::set<Id> out;
  for (const auto& e : delta) {
    if (out.count(e.action)) continue;
    bool ok = true;
    for (const auto& [p, s] : e.from) {
      auto it = global.find(p);
      if (it == global.end() || it->second != s) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(e.action);
  }
  return out;
}

std::set<Id> AsyncAutomaton::locally_enabled(const Id& p, const Id& s) const {
  std::set<Id> out;
  for (const auto& e : delta) {
    auto it = e.from.find(p);
    if (it != e.from.end() && it->second == s) out.insert(e.action);
  }
  return out;
}

GlobalState step(const AsyncAutomaton& aut, const GlobalState& global, const Id& a) {
  if (!aut.alphabet.contains(a)) throw UnknownAction(a);
  const DeltaEntry* e = aut.match(global, a);
  if (!e) throw NotDefined(a);
  GlobalState next = global;
  for (const auto& [p, s] : e->to) next[p] = s;
  return next;
}

AsyncAutomaton compose_local(const std::map<Id, LocalProcess>& procs,
                             const DistributedAlphabet& alphabet) {
  AsyncAutomaton aut;
  aut.alphabet = alphabet;
  for (const auto& [p, lp] : procs) {
    aut.processes.insert(p);
    aut.local_states[p] = lp.states;
    aut.initial[p] = lp.initial;
    for (const auto& [key, to] : lp.trans) {
      const auto& a = key.second;
      if (!alphabet.contains(a)) throw ActionOutsideAlphabet(a);
      if (!alphabet.domain_of(a).count(p))
        throw ActionOutsideAlphabet(a + " used by process " + p);
    }
  }
  // For each action, an entry per combination of local a-transitions of the
  // domain processes; actions whose domain has an idle process get none.
  for (const auto& a : alphabet.actions) {
    const auto& d = alphabet.domain_of(a);
    std::vector<Id> ps(d.begin(), d.end());
    std::vector<std::vector<std::pair<Id, Id>>> moves;  // per process: (from,to)
    bool possible = true;
    for (const auto& p : ps) {
      auto it = procs.find(p);
      std::vector<std::pair<Id, Id>> mv;
      if (it != procs.end())
        for (const auto& [key, to] : it->second.trans)
          if (key.second == a) mv.push_back({key.first, to});
      if (mv.empty()) {
        possible = false;
        break;
      }
      std::sort(mv.begin(), mv.end());
      moves.push_back(std::move(mv));
    }
    if (!possible) continue;
    std::vector<std::size_t> pick(ps.size(), 0);
    while (true) {
      DeltaEntry e;
      e.action = a;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        e.from[ps[i]] = moves[i][pick[i]].first;
        e.to[ps[i]] = moves[i][pick[i]].second;
      }
      aut.delta.push_back(std::move(e));
      std::size_t i = 0;
      for (; i < ps.size(); ++i) {
        if (++pick[i] < moves[i].size()) break;
        pick[i] = 0;
      }
      if (i == ps.size()) break;
    }
  }
  return aut;
}

std::set<Trace> plays_upto(const AsyncAutomaton& aut, std::size_t bound) {
  std::set<Trace> out;
  std::vector<Id> word;
  std::function<void(const GlobalState&)> go = [&](const GlobalState& g) {
    out.insert(normalize(aut.alphabet, word));
    if (word.size() >= bound) return;
    for (const auto& a : aut.enabled_actions(g)) {
      word.push_back(a);
      go(step(aut, g, a));
      word.pop_back();
    }
  };
  go(aut.initial_state());
  return out;
}

std::vector<std::string> validate_automaton(const AsyncAutomaton& aut) {
  std::vector<std::string> problems;
  for (const auto& p : aut.processes) {
    auto it = aut.initial.find(p);
    if (it == aut.initial.end())
      problems.push_back("no initial state for process " + p);
    else if (!aut.local_states.count(p) || !aut.local_states.at(p).count(it->second))
      problems.push_back("initial state of " + p + " not declared");
  }
  std::map<std::pair<Id, std::string>, std::string> seen;  // (action, from-key) -> to-key
  for (const auto& e : aut.delta) {
    if (!aut.alphabet.contains(e.action)) {
      problems.push_back("delta entry for unknown action " + e.action);
      continue;
    }
    const auto& d = aut.alphabet.domain_of(e.action);
    auto touches = [&](const std::map<Id, Id>& part) {
      if (part.size() != d.size()) return false;
      for (const auto& [p, s] : part)
        if (!d.count(p)) return false;
      return true;
    };
    if (!touches(e.from) || !touches(e.to))
      problems.push_back("delta entry for " + e.action + " does not match dom");
    for (const auto& [p, s] : e.from)
      if (!aut.local_states.count(p) || !aut.local_states.at(p).count(s))
        problems.push_back("delta source state " + s + " undeclared for " + p);
    for (const auto& [p, s] : e.to)
      if (!aut.local_states.count(p) || !aut.local_states.at(p).count(s))
        problems.push_back("delta target state " + s + " undeclared for " + p);
    std::string fk, tk;
    for (const auto& [p, s] : e.from) fk += p + "=" + s + ";";
    for (const auto& [p, s] : e.to) tk += p + "=" + s + ";";
    auto [it, fresh] = seen.insert({{e.action, fk}, tk});
    if (!fresh && it->second != tk)
      problems.push_back("delta not deterministic for " + e.action + " at " + fk);
  }
  return problems;
}

}  // namespace gb
