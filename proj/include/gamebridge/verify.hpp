#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gamebridge/games.hpp"
#include "gamebridge/traces.hpp"

namespace gb {

// Outcome of a weak-bisimulation check. `pass` and `fail` are definite within
// the explored horizon; `inconclusive` means a size cap cut exploration short
// before any definite answer emerged.
enum class BisimVerdict { pass, fail, inconclusive };

std::string to_string(BisimVerdict v);

// Result of comparing a strategy against a controller up to weak bisimulation.
// `relation` holds the surviving pairs reachable from the initial pair, each a
// strategy-side marking (condition ids of a reachable cut) together with the
// matched play. On `fail`, `counterexample` is a short run of move labels
// ending with the label neither side could answer, and `detail` names the
// violated transfer clause.
struct BisimWitness {
  std::set<std::pair<Marking, Trace>> relation;
  std::size_t depth = 0;
  BisimVerdict verdict = BisimVerdict::inconclusive;
  std::vector<Id> counterexample;
  std::string detail;
};

// Checks that the behaviours of strategy `s` (over game `g`) and controller
// `ctrl` (over game `c`) are weakly bisimilar up to plays/runs of length
// `depth`. Labels in `shared_actions` are observable and must be matched
// exactly; every other move is internal and may be absorbed. A strategy event
// whose label has the synchronized shape `act(a,...)` counts as an observable
// occurrence of `a` whenever `a` is shared. Internal stuttering between
// observables is bounded by the number of processes of `c`.
BisimWitness weak_bisim_check(const PetriGame& g, const Strategy& s, const ControlGame& c,
                              const Controller& ctrl, const std::set<Id>& shared_actions,
                              std::size_t depth);

// Exhaustive strategy search for a 1-bounded Petri game: enumerates decision
// rules keyed on place plus a depth-`decision_memory` abstraction of each
// token's causal past, checks each rule on the finite quotient, and
// materializes the first rule that wins within `depth`. Returns nullopt when
// no such rule exists within the bounds; throws SizeLimit when the search
// space or the quotient itself is too large to enumerate.
std::optional<Strategy> solve_pg(const PetriGame& g, std::size_t depth, int decision_memory,
                                 std::size_t state_cap = kDefaultStateCap);

// Exhaustive controller search for a control game: backtracks over answers to
// local views (truncated to the last `view_memory` actions), evaluating each
// candidate on plays of length at most `bound`. Returns nullopt when no
// assignment of the discovered views wins within the bounds; throws SizeLimit
// when the number of evaluations explodes.
std::optional<Controller> solve_cg(const ControlGame& c, std::size_t bound, int view_memory,
                                   std::size_t state_cap = kDefaultStateCap);

// Justified-refusal check for strategies over a composed net whose places and
// transitions carry original names via `pi`: a missing event is justified
// only when some system condition in its precondition set refuses the whole
// pi-class of the transition, i.e. never consumes any transition with the
// same pi-image. Violations are reported up to event height `depth`.
JrReport check_pi_insensitive(const PetriGame& comp_game, const std::map<Id, Id>& pi,
                              const Strategy& s, std::size_t depth);

// Variant of solve_pg for composed nets: decision keys and decision values
// range over pi-images, so the found strategy treats pi-equal places and
// transitions identically. The result additionally satisfies
// check_pi_insensitive.
std::optional<Strategy> solve_pg_pi_insensitive(const PetriGame& comp_game,
                                                const std::map<Id, Id>& pi, std::size_t depth,
                                                int decision_memory,
                                                std::size_t state_cap = kDefaultStateCap);

}  // namespace gb
