#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/errors.hpp"
#include "gamebridge/nets.hpp"

namespace gb {

// Alphabet where every action is associated with the set of processes that
// take part in it. Two actions are independent exactly when their domains are
// disjoint.
struct DistributedAlphabet {
  std::set<Id> actions;
  std::map<Id, std::set<Id>> dom;

  bool contains(const Id& a) const { return actions.count(a) != 0; }
  const std::set<Id>& domain_of(const Id& a) const;
  bool dependent(const Id& a, const Id& b) const;
  std::set<Id> processes() const;
  // Σ_p: all actions involving process p.
  std::set<Id> actions_of(const Id& p) const;
};

// Equivalence class of words modulo swapping adjacent independent actions,
// represented by its lexicographically least linearization.
struct Trace {
  DistributedAlphabet alphabet;
  std::vector<Id> normal_form;

  bool operator==(const Trace& o) const { return normal_form == o.normal_form; }
  bool operator!=(const Trace& o) const { return normal_form != o.normal_form; }
  bool operator<(const Trace& o) const { return normal_form < o.normal_form; }
  std::size_t length() const { return normal_form.size(); }
};

// Finite labelled partial order. Elements are 0..labels.size()-1; `leq` holds
// the full reflexive-transitive relation.
struct LabelledPoset {
  std::vector<Id> labels;
  std::vector<int> occurrence;  // k-th occurrence of its label, 0-based
  std::set<std::pair<int, int>> leq;

  bool le(int x, int y) const { return leq.count({x, y}) != 0; }
  std::size_t size() const { return labels.size(); }

  // Greedy lexicographically-least topological order (element indices).
  std::vector<int> canonical_linearization() const;
};

// Label-preserving order isomorphism, decided via canonical linearizations.
// Complete for posets induced by trace dependence.
bool isomorphic(const LabelledPoset& a, const LabelledPoset& b);

Trace normalize(const DistributedAlphabet& alphabet, const std::vector<Id>& word);

// view_p(u): least downward-closed part of u containing every Σ_p action.
Trace local_view(const Trace& trace, const Id& p);

LabelledPoset poset_of(const Trace& trace);

// u ⊑ w: u is a trace prefix of w (some linearization of w starts with a
// linearization of u).
bool trace_prefix(const Trace& u, const Trace& w);

}  // namespace gb
