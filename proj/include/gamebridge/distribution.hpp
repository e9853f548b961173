#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gamebridge/nets.hpp"

namespace gb {

// A slice is a subnet describing the course of exactly one token: it holds
// one initial token, and every transition touching it consumes exactly as
// many tokens of the slice as it produces there, so the token count per
// slice is invariant. A slice distribution partitions the places of the base
// net into slices; composing the slices in parallel gives the base net back.
struct SliceDistribution {
  std::vector<PetriNet> slices;
};

// The subnet induced by a set of places: keeps the transitions touching the
// set, with flow and initial marking restricted to it.
PetriNet induced_subnet(const PetriNet& base, const std::set<Id>& places);

std::vector<std::string> validate_slice_distribution(const PetriNet& base,
                                                     const SliceDistribution& d);

// Searches for a slice distribution by backtracking over place-to-slice
// assignments (slice count = token count). Returns nothing when the net is
// not concurrency-preserving, not 1-bounded, or simply not sliceable.
// Throws SizeLimit when the net exceeds `place_cap` places.
std::optional<SliceDistribution> find_slice_distribution(const PetriNet& base,
                                                         std::size_t place_cap = 24);

// Singular nets generalize slices: a one-token net paired with a labelling
// map into the base net. Places may be duplicated across members, and a
// member may hold copies of transitions; compatibility and the composition
// rules below make the family jointly simulate the base net.
struct SingularNet {
  PetriNet net;
  std::map<Id, Id> pi;  // member node -> base node
};

struct SingularNetDistribution {
  std::vector<SingularNet> nets;
  PetriNet composition;
  std::map<Id, Id> pi;  // composition node -> base node
};

// Member-local requirements: one initial token, all transitions 1-in/1-out,
// pi maps places to places and transitions to transitions, injectively on
// places, initial place onto an initial base place, every base transition
// consuming the image of a place has a copy at that place, and member flow
// maps into base flow.
std::vector<std::string> validate_singular_net(const PetriNet& base, const SingularNet& sn);

struct SndReport {
  std::vector<std::string> problems;
  bool complete = true;  // false when the reachability check hit the state cap
};

// Whole-family requirements on the composition: the initial marking maps
// onto the base initial marking, pre/post sets of every transition map onto
// the base pre/post sets, equally-labelled transitions with equal
// preconditions coincide, and every reachable way of assembling a base
// precondition is served by some transition copy.
SndReport validate_snd(const PetriNet& base, const SingularNetDistribution& snd,
                       std::size_t state_cap = kDefaultStateCap);

// Disjoint union of places, flows and initial markings; union of shared
// transitions. Throws IncompatibleFamily on overlapping place ids or on a
// shared transition with disagreeing labels.
std::pair<PetriNet, std::map<Id, Id>> compose_snd(const std::vector<SingularNet>& family);

// One member per initial token, each holding a copy of every base place.
// Transition copies are added by fixpoint: whenever a reachable marking of
// the growing composition assembles the precondition of a base transition in
// a new way, a fresh shared copy is added, with its postset placed on the
// lexicographically least choice among the involved members.
// Throws NotConcurrencyPreserving.
SingularNetDistribution build_snd(const PetriNet& base,
                                  std::size_t state_cap = kDefaultStateCap);

// A slice distribution is an SND with injective labellings.
SingularNetDistribution snd_from_slices(const PetriNet& base, const SliceDistribution& d);

// Undirected graph with one vertex per member ("s0", "s1", ...) and an edge
// between members sharing a transition.
struct CommunicationGraph {
  std::vector<Id> vertices;
  std::set<std::pair<Id, Id>> edges;
};

CommunicationGraph communication_graph(const SliceDistribution& d);
CommunicationGraph communication_graph(const SingularNetDistribution& snd);

bool is_acyclic(const CommunicationGraph& g);

// Exhaustively searches the slice distributions of `base` for one whose
// communication graph is a forest. Throws SizeLimit past `place_cap`.
bool acyclic_distribution_exists(const PetriNet& base, std::size_t place_cap = 24);

// 3-CNF with 1-based variable indices; negative literals are negated.
struct ThreeSatFormula {
  int variables = 0;
  std::vector<std::array<int, 3>> clauses;
};

// Net whose slice distributions encode satisfying assignments: deciding
// whether an acyclic distribution exists is thereby NP-hard. For n variables
// and m clauses the net has 2n+4m+1 places and n+4m-3 transitions.
// Throws MalformedFormula on out-of-range literals or m = 0.
PetriNet gen_3sat_net(const ThreeSatFormula& formula);

}  // namespace gb
