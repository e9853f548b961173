#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/errors.hpp"
#include "gamebridge/multiset.hpp"

namespace gb {

using Id = std::string;
using Marking = Multiset<Id>;

// Arc of the flow relation. Direction is encoded by which endpoint is a place:
// (place, transition) arcs feed the transition, (transition, place) arcs feed
// the place. Multiplicities live in the surrounding multiset.
using Arc = std::pair<Id, Id>;

struct PetriNet {
  std::set<Id> places;
  std::set<Id> transitions;
  Multiset<Arc> flow;
  Marking initial_marking;

  bool is_place(const Id& x) const { return places.count(x) != 0; }
  bool is_transition(const Id& x) const { return transitions.count(x) != 0; }

  // Pre- and post-multisets, computed from the flow relation on demand.
  Marking pre_t(const Id& t) const;
  Marking post_t(const Id& t) const;
  Multiset<Id> pre_p(const Id& q) const;   // transitions producing on q
  Multiset<Id> post_p(const Id& q) const;  // transitions consuming from q

  void add_place(const Id& q, long long tokens = 0);
  void add_transition(const Id& t);
  void arc(const Id& from, const Id& to, long long k = 1);
};

// Cached pre/post sets for the firing loops. Built once from a net; the net
// must not change while the index is in use.
struct NetIndex {
  explicit NetIndex(const PetriNet& net);
  const PetriNet* net;
  std::map<Id, Marking> tpre, tpost;
  std::map<Id, Multiset<Id>> ppre, ppost;
};

bool is_enabled(const NetIndex& ix, const Marking& m, const Id& t);
std::vector<Id> enabled_transitions(const NetIndex& ix, const Marking& m);

// Successor marking m - pre(t) + post(t).
Marking fire(const PetriNet& net, const Marking& m, const Id& t);
Marking fire(const NetIndex& ix, const Marking& m, const Id& t);

// A marking is final when no transition is enabled in it.
bool is_final(const PetriNet& net, const Marking& m);
bool is_final(const NetIndex& ix, const Marking& m);

enum class ReachMode { bounded, fixpoint };

struct ReachResult {
  std::vector<Marking> markings;  // sorted, deterministic
  bool complete;                  // true when the result is all of R(N)
};

inline constexpr std::size_t kDefaultStateCap = 100000;

// Breadth-first marking exploration. In fixpoint mode the search runs to
// closure and throws BoundExceeded when the state cap is hit; in bounded mode
// it stops after `bound` firing steps and reports whether closure was reached.
ReachResult reachable_markings(const PetriNet& net, ReachMode mode,
                               std::size_t bound = 0,
                               std::size_t state_cap = kDefaultStateCap);

struct NetReport {
  bool wellformed = true;
  std::vector<std::string> problems;      // structural violations, human-readable
  bool concurrency_preserving = false;    // |pre(t)| = |post(t)| for every t
  bool one_bounded = false;               // no reachable marking puts 2 tokens on a place
  bool one_bounded_known = true;          // false when exploration hit the cap
};

NetReport validate_net(const PetriNet& net,
                       std::size_t state_cap = kDefaultStateCap);

// True when every transition moves exactly as many tokens in as out.
bool is_concurrency_preserving(const PetriNet& net);

// Flow multiplicities all 1 and pre/post of transitions are sets.
bool has_setlike_flow(const PetriNet& net);

}  // namespace gb
