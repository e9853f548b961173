#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/traces.hpp"

namespace gb {

// One sequential component: a deterministic partial automaton over the
// actions of its process.
struct LocalProcess {
  std::set<Id> states;
  Id initial;
  std::map<std::pair<Id, Id>, Id> trans;  // (state, action) -> successor

  void add(const Id& from, const Id& action, const Id& to);
};

// A sparse entry of one synchronized transition: `from` and `to` assign local
// states to exactly the processes in dom(action).
struct DeltaEntry {
  Id action;
  std::map<Id, Id> from;
  std::map<Id, Id> to;
};

using GlobalState = std::map<Id, Id>;  // process -> local state, canonical order

struct AsyncAutomaton {
  std::set<Id> processes;
  std::map<Id, std::set<Id>> local_states;
  std::map<Id, Id> initial;
  std::vector<DeltaEntry> delta;
  DistributedAlphabet alphabet;

  GlobalState initial_state() const { return initial; }

  // Entry applying to `global` restricted to dom(a), if any.
  const DeltaEntry* match(const GlobalState& global, const Id& a) const;

  // Actions with a matching entry at `global`.
  std::set<Id> enabled_actions(const GlobalState& global) const;

  // Local enabledness: actions that have some entry with p's component = s.
  std::set<Id> locally_enabled(const Id& p, const Id& s) const;
};

// Apply one action; components outside dom(a) are unchanged.
GlobalState step(const AsyncAutomaton& aut, const GlobalState& global, const Id& a);

// Parallel composition of deterministic local automata: an action is enabled
// exactly when every process in its domain can take it, and the domains move
// in lock-step.
AsyncAutomaton compose_local(const std::map<Id, LocalProcess>& procs,
                             const DistributedAlphabet& alphabet);

// All traces of length <= bound realizable from the initial state.
std::set<Trace> plays_upto(const AsyncAutomaton& aut, std::size_t bound);

// Structural sanity: initial states declared, delta entries shaped by dom,
// determinism per (action, source assignment).
std::vector<std::string> validate_automaton(const AsyncAutomaton& aut);

}  // namespace gb
