#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/distribution.hpp"
#include "gamebridge/games.hpp"

namespace gb {

// The control game built from a Petri game either stops at the faithful
// construction (plain) or adds per-process failure states reached by clash
// actions that fire when two committed transitions compete (hatted).
enum class PgToCgVariant { plain, hatted };

// The Petri game built from a control game comes in three flavors: the bare
// construction, one that routes artificial deadlocks into losing sink places,
// and one that lets the environment challenge a commitment and park every
// process in a safe haven.
enum class CgToPgVariant { base, with_deadlock_detection, with_challenge };

// --- deterministic naming ---------------------------------------------------
// Constructed nodes and actions have schema-fixed names so that golden files
// and trace normal forms are stable: sets render sorted inside braces, lists
// keep process order.
std::string show_id_set(const std::set<Id>& xs);                   // {a,b}
Id tau_name(const Id& state, const std::set<Id>& commitment);      // tau(s,{a,b})
Id com_name(const Id& state, const std::set<Id>& commitment);      // com(s,{a,b})
Id zap_name(const Id& state, const std::set<Id>& commitment, const Id& t1,
            const Id& t2);                                         // zap(s,{a,b},t1,t2)
Id act_name(const Id& action, const std::vector<Id>& states,
            const std::vector<std::set<Id>>& commitments);  // act(a,[s,..],[{..},..])
Id bot_name(const Id& process);                             // bot(p)
Id dl_name(const Id& process);                              // dl(p)
Id top_name(const Id& process);                             // top(p)
Id tch_name(const Id& state, const std::set<Id>& commitment);  // tch(s,{a,b})
Id tdl_name(const Marking& m);                                 // tdl(<12 hex digest>)

struct PgToCgResult {
  ControlGame control_game;
  std::vector<Id> process_of_slice;            // slice index -> process id
  std::map<Id, std::size_t> slice_of_process;  // inverse of the above
  PgToCgVariant variant = PgToCgVariant::plain;
};

struct CgToPgResult {
  PetriGame petri_game;
  std::map<Id, Id> zeta;                   // place -> the local state it stands for
  std::set<Marking> artificial_deadlocks;  // final markings whose state image is not final
  std::map<Id, Id> action_of;              // synchronized transition -> automaton action
  CgToPgVariant variant = CgToPgVariant::base;
};

// Petri game -> control game. One process per slice; a system place commits
// to a subset of its outgoing transitions before any of them can fire, and
// the alphabet consists of the net transitions plus these commitment
// choosers (the only controllable actions). The hatted variant adds clash
// actions leading to per-process failure states.
// Requires a reachability objective and a distribution where every
// transition consumes at most one place per slice.
PgToCgResult pg_to_cg(const PetriGame& g, const SliceDistribution& d, PgToCgVariant variant);

// Same construction over a singular-net distribution: one process per
// member, commitment sets range over labels of the base game so a controller
// cannot distinguish transition copies.
PgToCgResult pg_to_cg(const PetriGame& g, const SingularNetDistribution& snd,
                      PgToCgVariant variant);

// Control game -> Petri game. Local states become system places that commit
// to a subset of their enabled controllable actions; synchronized actions
// become one transition per combination of commitments (controllable ones
// only where every participant consented). `artificial_deadlocks` collects
// the final markings of the bare net whose underlying states could still
// move; the deadlock-detection variant wires them to losing sinks, the
// challenge variant adds safe-haven places instead.
// Requires a safety objective; throws StateCapExceeded if the deadlock
// fixpoint outgrows `state_cap`.
CgToPgResult cg_to_pg(const ControlGame& c, CgToPgVariant variant,
                      std::size_t state_cap = kDefaultStateCap);

// Reads a controller off a strategy: on a system-place state the local view
// is projected to net transitions and replayed in the strategy's branching
// process; the answer is the chooser of the decision found there. Elsewhere
// the controller stays silent.
Controller strategy_to_controller_pg2cg(const PetriGame& g, const SliceDistribution& d,
                                        const PgToCgResult& res, const Strategy& s);

// Rebuilds a strategy from a controller by reconstructing, for every system
// condition, the control-game play of its causal past (chooser actions
// re-inserted in process order), reading the committed set there, and adding
// exactly the transitions all involved conditions allow.
// Throws ReconstructionAssertionFailed when a reconstructed play leaves the
// game, which signals a controller outside the expected shape.
Strategy controller_to_strategy_pg2cg(const PetriGame& g, const SliceDistribution& d,
                                      const PgToCgResult& res, const Controller& ctrl,
                                      std::size_t depth, std::size_t node_cap = 4000);

// Builds a strategy on the translated Petri game: each fresh system
// condition asks the controller on the view of its erased past and commits
// to exactly that answer; environment conditions impose nothing.
// Throws AssumptionViolated when an erased past does not replay to the
// condition's state in the automaton (diagnostic; unreachable for
// controller-compatible inputs).
Strategy controller_to_strategy_cg2pg(const ControlGame& c, const CgToPgResult& res,
                                      const Controller& ctrl, std::size_t depth,
                                      std::size_t node_cap = 4000);

// Reads a controller off a strategy for the translated game: the view is
// replayed event by event with chooser closure in between; the answer is the
// commitment the process's token sits in afterwards.
Controller strategy_to_controller_cg2pg(const ControlGame& c, const CgToPgResult& res,
                                        const Strategy& s);

// Two-slice family whose translated control game needs exponentially many
// commitment states: an environment choice between a and b, then n
// system-restricted transitions.
PetriGame gen_lower_bound_pg(int n);

// One-process family whose translated Petri game needs exponentially many
// commitment places: an uncontrollable x next to controllable a_1..a_n from
// the initial state.
ControlGame gen_lower_bound_cg(int n);

}  // namespace gb
