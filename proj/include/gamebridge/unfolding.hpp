#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gamebridge/nets.hpp"
#include "gamebridge/traces.hpp"

namespace gb {

// A branching process: an occurrence net together with the labelling onto its
// base net. Node ids are deterministic hashes of (label, precondition), so
// structurally equal processes get byte-equal ids.
struct BranchingProcess {
  PetriNet occ_net;
  std::map<Id, Id> lambda;
  PetriNet base;
};

enum class Relation { causal, conflict, concurrent };

// Derived views over a BranchingProcess: integer node indexing, causality and
// conflict queries, marking simulation. Build once, query often.
class BpIndex {
 public:
  explicit BpIndex(const BranchingProcess& bp);

  int index_of(const Id& node) const;  // throws UnknownNode
  bool is_event(int n) const { return event_[n]; }
  const Id& id_of(int n) const { return ids_[n]; }
  const Id& label_of(int n) const { return labels_[n]; }
  int size() const { return static_cast<int>(ids_.size()); }

  const std::vector<int>& pre(int n) const { return pre_[n]; }
  const std::vector<int>& post(int n) const { return post_[n]; }

  bool le(int x, int y) const;  // x ≤ y in the causal order
  bool in_conflict(int x, int y) const;
  Relation relation(int x, int y) const;

  // Conditions with no producing event (the initial cut).
  std::vector<int> initial_cut() const;

  // Events enabled at a cut (set of condition indices).
  std::vector<int> enabled_events(const std::set<int>& cut) const;
  std::set<int> fire_event(const std::set<int>& cut, int e) const;

  // Fire a sequence of base-net transition labels from the initial cut,
  // resolving each label to the unique enabled event with that λ-label.
  // Ambiguity or a missing event yields nullopt (resp. throws if `strict`).
  std::optional<std::set<int>> simulate(const std::vector<Id>& labels,
                                        bool strict = false) const;

 private:
  std::vector<Id> ids_, labels_;
  std::vector<char> event_;
  std::vector<std::vector<int>> pre_, post_;
  std::map<Id, int> by_id_;
  std::vector<std::set<int>> anc_;  // ancestors incl. self
};

// Incremental construction of branching processes over a base net. The base
// may be bounded but unsafe; equally-labelled sibling conditions are told
// apart by an occurrence index baked into their ids.
class BpBuilder {
 public:
  explicit BpBuilder(const PetriNet& base);

  struct Extension {
    Id transition;            // base transition
    std::vector<int> cut;     // sorted condition indices, λ-image = pre
  };

  // All extensions not yet present, in deterministic order.
  std::vector<Extension> possible_extensions(std::size_t max_height) const;

  // Adds the event and its output conditions; returns the event index.
  int add_event(const Extension& ext);

  // Saturate with every extension `allow` admits, up to the height bound.
  // `allow` sees the base transition and the cut's condition ids.
  void saturate(
      std::size_t max_height,
      const std::function<bool(const Id&, const std::vector<int>&)>& allow,
      std::size_t node_cap = kDefaultStateCap);

  BranchingProcess finish() const;

  // Node accessors mirroring BpIndex (valid during construction).
  int num_nodes() const { return static_cast<int>(ids_.size()); }
  bool is_event(int n) const { return event_[n]; }
  const Id& id_of(int n) const { return ids_[n]; }
  const Id& label_of(int n) const { return labels_[n]; }
  const std::vector<int>& pre(int n) const { return pre_[n]; }
  const std::vector<int>& post(int n) const { return post_[n]; }
  std::size_t height_of_event(int e) const { return height_[e]; }
  std::vector<int> initial_cut() const;
  bool concurrent(int x, int y) const;

 private:
  bool le(int x, int y) const;
  bool in_conflict(int x, int y) const;
  int add_condition(const Id& base_place, int producer, int k);

  PetriNet base_;
  NetIndex base_ix_;
  std::vector<Id> ids_, labels_;
  std::vector<char> event_;
  std::vector<std::vector<int>> pre_, post_;
  std::vector<std::size_t> height_;  // per node; conditions inherit producer's
  std::vector<std::set<int>> anc_;
  std::map<Id, int> by_id_;
  std::set<std::pair<Id, std::vector<int>>> events_present_;  // (label, cut)
};

// Depth-bounded unfolding of a 1-bounded net; depth counts the longest chain
// of events.
BranchingProcess unfold(const PetriNet& base, std::size_t depth,
                        std::size_t node_cap = kDefaultStateCap);

// Causal past of a node as a labelled poset over the events ≤ x.
LabelledPoset causal_past(const BranchingProcess& bp, const Id& node);

Relation node_relation(const BranchingProcess& bp, const Id& x, const Id& y);

std::vector<std::string> validate_branching_process(const BranchingProcess& bp);

}  // namespace gb
