#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/automata.hpp"
#include "gamebridge/nets.hpp"
#include "gamebridge/traces.hpp"
#include "gamebridge/unfolding.hpp"

namespace gb {

enum class Objective { reachability, safety };

// Petri net with a system/environment partition of its places. `special` is
// the winning set for reachability objectives and the bad set for safety.
struct PetriGame {
  PetriNet net;
  std::set<Id> system_places;
  std::set<Id> environment_places;
  std::set<Id> special;
  Objective objective = Objective::safety;

  bool is_system(const Id& q) const { return system_places.count(q) != 0; }
};

// Asynchronous automaton with a controllable/uncontrollable partition of its
// actions. `special_states` maps each process to its winning (reachability)
// or bad (safety) local states.
struct ControlGame {
  AsyncAutomaton automaton;
  std::set<Id> controllable;
  std::set<Id> uncontrollable;
  std::map<Id, std::set<Id>> special_states;
  Objective objective = Objective::safety;

  bool is_controllable(const Id& a) const { return controllable.count(a) != 0; }
};

// A strategy is a branching process of the game together with, for every
// system-labelled condition, the set of base transitions that condition
// allows. The branching process must contain exactly the events these
// decisions permit (which makes every refusal justified by construction).
struct Strategy {
  BranchingProcess bp;
  std::map<Id, std::set<Id>> decision;  // condition id -> allowed base transitions

  // Optional intensional form: decisions factor through (place, class) keys
  // where the class hashes the causal past truncated at `decision_memory`
  // transitions. Solvers fill these in; winning checks use them for exact
  // lasso detection on looping safety games. decision_memory < 0 means the
  // strategy is extensional only.
  int decision_memory = -1;
  std::map<std::pair<Id, std::uint64_t>, std::set<Id>> rule;

  std::set<Id> allowed(const Id& condition) const;
};

// Family of local controllers f_p, keyed by the canonical normal form of the
// local view. `memory` < 0 keys on the full view; otherwise lookups truncate
// the view to its last `memory` actions first (the table must then be keyed
// by such suffixes). A functional backend, when present, replaces the table;
// translations use it so controllers defined by simulation need not be
// materialized eagerly.
struct Controller {
  std::map<std::pair<Id, std::vector<Id>>, std::set<Id>> table;
  int memory = -1;
  std::function<std::set<Id>(const Id&, const Trace&)> fn;

  std::set<Id> lookup(const Id& process, const Trace& view) const;
  std::vector<Id> key_of(const std::vector<Id>& view_nf) const;
};

struct JrReport {
  bool ok = true;
  std::vector<std::string> violations;
};

enum class Verdict { winning, not_winning, inconclusive };

std::string to_string(Verdict v);

struct WinReport {
  Verdict verdict = Verdict::inconclusive;
  std::string detail;  // witness / counterexample description
};

// Structural consistency of a strategy object: branching-process clauses,
// decision domain and range, and agreement between decisions and the events
// present (both directions, up to `depth`).
std::vector<std::string> validate_strategy(const PetriGame& g, const Strategy& s,
                                           std::size_t depth);

// Justified refusal on the branching process itself: every concurrent
// condition set matching a transition's precondition either has the event or
// contains a system condition that consumes no such event anywhere.
JrReport check_justified_refusal(const PetriGame& g, const Strategy& s,
                                 std::size_t depth);

// No reachable cut of the strategy enables two events consuming the same
// system condition.
bool check_deterministic(const PetriGame& g, const Strategy& s, std::size_t depth);

// Explores the strategy's reachable cuts breadth-first. Reachability: every
// maximal cut must carry winning places only; hitting the depth bound with
// live branches is inconclusive. Safety: a bad place or a deadlock (strategy
// stuck where the base game is not) loses; otherwise the verdict is winning,
// reported as verified up to the bound when exploration was truncated. When
// the strategy carries an intensional rule, verdicts come from the exact
// class-quotient instead, which detects lassos and so decides looping games.
WinReport strategy_winning(const PetriGame& g, const Strategy& s, std::size_t depth,
                           std::size_t state_cap = kDefaultStateCap);

// Smallest prefix-closed set of plays compatible with the controller:
// uncontrollable actions are always possible, controllable ones need the
// consent of every involved process on its local view.
std::set<Trace> controller_compatible_plays(const ControlGame& c, const Controller& ctrl,
                                            std::size_t bound);

WinReport controller_winning_bounded(const ControlGame& c, const Controller& ctrl,
                                     std::size_t bound,
                                     std::size_t state_cap = kDefaultStateCap);

std::vector<std::string> validate_petri_game(const PetriGame& g);
std::vector<std::string> validate_control_game(const ControlGame& c);

}  // namespace gb
