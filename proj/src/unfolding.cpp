#include "gamebridge/unfolding.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

namespace gb {

namespace {

std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string short_hex(std::uint64_t v) {
  char buf[14];
  std::snprintf(buf, sizeof buf, "%012llx",
                static_cast<unsigned long long>(v & 0xffffffffffffull));
  return buf;
}

// Deterministic node ids: a condition is identified by its base place, its
// producing event and its index among equally-labelled outputs; an event by
// its base transition and its precondition.
std::string condition_id(const Id& place, const std::string& producer, int k) {
  std::string seed = place;
  seed.push_back('\x1f');
  seed += producer;
  seed.push_back('\x1f');
  seed += std::to_string(k);
  return place + "#" + short_hex(fnv64(seed));
}

std::string event_id(const Id& transition, const std::vector<Id>& cut_ids) {
  std::string seed = transition;
  for (const auto& c : cut_ids) {
    seed.push_back('\x1f');
    seed += c;
  }
  return transition + "#" + short_hex(fnv64(seed));
}

bool sorted_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else
      return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// BpBuilder

BpBuilder::BpBuilder(const PetriNet& base) : base_(base), base_ix_(base_) {
  for (const auto& [q, k] : base_.initial_marking)
    for (long long i = 0; i < k; ++i) add_condition(q, -1, static_cast<int>(i));
}

int BpBuilder::add_condition(const Id& base_place, int producer, int k) {
  Id id = condition_id(base_place, producer < 0 ? "init" : ids_[producer], k);
  if (auto it = by_id_.find(id); it != by_id_.end())
    throw error("node id collision: " + id);
  int n = static_cast<int>(ids_.size());
  ids_.push_back(id);
  labels_.push_back(base_place);
  event_.push_back(0);
  pre_.push_back(producer < 0 ? std::vector<int>{} : std::vector<int>{producer});
  post_.push_back({});
  height_.push_back(producer < 0 ? 0 : height_[producer]);
  std::set<int> anc;
  if (producer >= 0) anc = anc_[producer];
  anc.insert(n);
  anc_.push_back(std::move(anc));
  by_id_[id] = n;
  if (producer >= 0) post_[producer].push_back(n);
  return n;
}

bool BpBuilder::le(int x, int y) const { return anc_[y].count(x) != 0; }

bool BpBuilder::in_conflict(int x, int y) const {
  for (int e1 : anc_[x]) {
    if (!event_[e1]) continue;
    for (int e2 : anc_[y]) {
      if (!event_[e2] || e1 == e2) continue;
      if (sorted_intersect(pre_[e1], pre_[e2])) return true;
    }
  }
  return false;
}

bool BpBuilder::concurrent(int x, int y) const {
  return !le(x, y) && !le(y, x) && !in_conflict(x, y);
}

std::vector<int> BpBuilder::initial_cut() const {
  std::vector<int> cut;
  for (int n = 0; n < num_nodes(); ++n)
    if (!event_[n] && pre_[n].empty()) cut.push_back(n);
  return cut;
}

std::vector<BpBuilder::Extension> BpBuilder::possible_extensions(
    std::size_t max_height) const {
  std::vector<Extension> out;
  // Conditions grouped by base place, in index order.
  std::map<Id, std::vector<int>> by_place;
  for (int n = 0; n < num_nodes(); ++n)
    if (!event_[n]) by_place[labels_[n]].push_back(n);

  for (const auto& t : base_.transitions) {
    const Marking& pre = base_ix_.tpre.at(t);
    if (pre.empty()) continue;  // tokenless transitions never instantiate
    std::vector<std::pair<Id, long long>> need(pre.begin(), pre.end());
    // Choose a multiplicity-sized subset of conditions per place, then check
    // the union is a concurrent set not yet consumed by an equal event.
    std::vector<int> chosen;
    std::function<void(std::size_t)> pick = [&](std::size_t gi) {
      if (gi == need.size()) {
        std::vector<int> cut = chosen;
        std::sort(cut.begin(), cut.end());
        std::size_t h = 1;
        for (int c : cut) h = std::max(h, height_[c] + 1);
        if (h > max_height) return;
        if (events_present_.count({t, cut})) return;
        for (std::size_t i = 0; i < cut.size(); ++i)
          for (std::size_t j = i + 1; j < cut.size(); ++j)
            if (!concurrent(cut[i], cut[j])) return;
        out.push_back({t, std::move(cut)});
        return;
      }
      const auto& [place, k] = need[gi];
      auto it = by_place.find(place);
      if (it == by_place.end()) return;
      const auto& cands = it->second;
      if (static_cast<long long>(cands.size()) < k) return;
      // k-subsets of the candidate conditions for this place.
      std::function<void(std::size_t, std::size_t)> comb = [&](std::size_t left,
                                                               std::size_t from) {
        if (left == 0) {
          pick(gi + 1);
          return;
        }
        for (std::size_t i = from; i + left <= cands.size(); ++i) {
          chosen.push_back(cands[i]);
          comb(left - 1, i + 1);
          chosen.pop_back();
        }
      };
      comb(static_cast<std::size_t>(k), 0);
    };
    pick(0);
  }
  std::sort(out.begin(), out.end(), [](const Extension& a, const Extension& b) {
    if (a.transition != b.transition) return a.transition < b.transition;
    return a.cut < b.cut;
  });
  return out;
}

int BpBuilder::add_event(const Extension& ext) {
  std::vector<Id> cut_ids;
  cut_ids.reserve(ext.cut.size());
  for (int c : ext.cut) cut_ids.push_back(ids_[c]);
  Id id = event_id(ext.transition, cut_ids);
  if (by_id_.count(id)) throw error("node id collision: " + id);
  int e = static_cast<int>(ids_.size());
  ids_.push_back(id);
  labels_.push_back(ext.transition);
  event_.push_back(1);
  pre_.push_back(ext.cut);
  post_.push_back({});
  std::size_t h = 1;
  std::set<int> anc;
  for (int c : ext.cut) {
    h = std::max(h, height_[c] + 1);
    anc.insert(anc_[c].begin(), anc_[c].end());
    post_[c].push_back(e);
  }
  anc.insert(e);
  height_.push_back(h);
  anc_.push_back(std::move(anc));
  by_id_[id] = e;
  events_present_.insert({ext.transition, ext.cut});
  // Output conditions, one per token produced, indexed within equal labels.
  for (const auto& [q, k] : base_ix_.tpost.at(ext.transition))
    for (long long i = 0; i < k; ++i) add_condition(q, e, static_cast<int>(i));
  return e;
}

void BpBuilder::saturate(
    std::size_t max_height,
    const std::function<bool(const Id&, const std::vector<int>&)>& allow,
    std::size_t node_cap) {
  while (true) {
    bool grew = false;
    for (const auto& ext : possible_extensions(max_height)) {
      if (!allow(ext.transition, ext.cut)) continue;
      add_event(ext);
      grew = true;
      if (ids_.size() > node_cap)
        throw BoundExceeded("branching process over " + std::to_string(node_cap) +
                            " nodes");
    }
    if (!grew) break;
  }
}

BranchingProcess BpBuilder::finish() const {
  BranchingProcess bp;
  bp.base = base_;
  for (int n = 0; n < num_nodes(); ++n) {
    bp.lambda[ids_[n]] = labels_[n];
    if (event_[n]) {
      bp.occ_net.transitions.insert(ids_[n]);
      for (int c : pre_[n]) bp.occ_net.flow.add({ids_[c], ids_[n]});
      for (int c : post_[n]) bp.occ_net.flow.add({ids_[n], ids_[c]});
    } else {
      bp.occ_net.places.insert(ids_[n]);
      if (pre_[n].empty()) bp.occ_net.initial_marking.add(ids_[n]);
    }
  }
  return bp;
}

// ---------------------------------------------------------------------------
// BpIndex

BpIndex::BpIndex(const BranchingProcess& bp) {
  for (const auto& q : bp.occ_net.places) {
    by_id_[q] = static_cast<int>(ids_.size());
    ids_.push_back(q);
    event_.push_back(0);
  }
  for (const auto& t : bp.occ_net.transitions) {
    by_id_[t] = static_cast<int>(ids_.size());
    ids_.push_back(t);
    event_.push_back(1);
  }
  labels_.resize(ids_.size());
  for (std::size_t n = 0; n < ids_.size(); ++n) {
    auto it = bp.lambda.find(ids_[n]);
    labels_[n] = it == bp.lambda.end() ? Id{} : it->second;
  }
  pre_.assign(ids_.size(), {});
  post_.assign(ids_.size(), {});
  for (const auto& [arc, k] : bp.occ_net.flow) {
    auto a = by_id_.find(arc.first);
    auto b = by_id_.find(arc.second);
    if (a == by_id_.end() || b == by_id_.end()) continue;
    post_[a->second].push_back(b->second);
    pre_[b->second].push_back(a->second);
  }
  for (auto& v : pre_) std::sort(v.begin(), v.end());
  for (auto& v : post_) std::sort(v.begin(), v.end());
  // Ancestor sets in topological order; a cycle leaves nodes unprocessed.
  anc_.assign(ids_.size(), {});
  std::vector<int> indeg(ids_.size(), 0);
  for (std::size_t n = 0; n < ids_.size(); ++n)
    indeg[n] = static_cast<int>(pre_[n].size());
  std::vector<int> queue;
  for (std::size_t n = 0; n < ids_.size(); ++n)
    if (indeg[n] == 0) queue.push_back(static_cast<int>(n));
  std::size_t done = 0;
  while (!queue.empty()) {
    int n = queue.back();
    queue.pop_back();
    ++done;
    std::set<int> anc;
    for (int p : pre_[n]) anc.insert(anc_[p].begin(), anc_[p].end());
    anc.insert(n);
    anc_[n] = std::move(anc);
    for (int s : post_[n])
      if (--indeg[s] == 0) queue.push_back(s);
  }
  if (done != ids_.size()) throw error("branching process has a causal cycle");
}

int BpIndex::index_of(const Id& node) const {
  auto it = by_id_.find(node);
  if (it == by_id_.end()) throw UnknownNode(node);
  return it->second;
}

bool BpIndex::le(int x, int y) const { return anc_[y].count(x) != 0; }

bool BpIndex::in_conflict(int x, int y) const {
  for (int e1 : anc_[x]) {
    if (!event_[e1]) continue;
    for (int e2 : anc_[y]) {
      if (!event_[e2] || e1 == e2) continue;
      if (sorted_intersect(pre_[e1], pre_[e2])) return true;
    }
  }
  return false;
}

Relation BpIndex::relation(int x, int y) const {
  if (le(x, y) || le(y, x)) return Relation::causal;
  if (in_conflict(x, y)) return Relation::conflict;
  return Relation::concurrent;
}

std::vector<int> BpIndex::initial_cut() const {
  std::vector<int> cut;
  for (int n = 0; n < size(); ++n)
    if (!event_[n] && pre_[n].empty()) cut.push_back(n);
  return cut;
}

std::vector<int> BpIndex::enabled_events(const std::set<int>& cut) const {
  std::vector<int> out;
  for (int n = 0; n < size(); ++n) {
    if (!event_[n]) continue;
    bool ok = true;
    for (int c : pre_[n])
      if (!cut.count(c)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(n);
  }
  return out;
}

std::set<int> BpIndex::fire_event(const std::set<int>& cut, int e) const {
  std::set<int> next = cut;
  for (int c : pre_[e]) {
    if (!next.erase(c)) throw NotEnabled(ids_[e]);
  }
  for (int c : post_[e]) next.insert(c);
  return next;
}

std::optional<std::set<int>> BpIndex::simulate(const std::vector<Id>& labels,
                                               bool strict) const {
  auto ic = initial_cut();
  std::set<int> cut(ic.begin(), ic.end());
  for (const auto& lab : labels) {
    int found = -1;
    bool ambiguous = false;
    for (int e : enabled_events(cut)) {
      if (labels_[e] != lab) continue;
      if (found >= 0) {
        ambiguous = true;
        break;
      }
      found = e;
    }
    if (ambiguous) {
      if (strict) throw error("ambiguous label simulation at " + lab);
      return std::nullopt;
    }
    if (found < 0) {
      if (strict) throw NotEnabled(lab);
      return std::nullopt;
    }
    cut = fire_event(cut, found);
  }
  return cut;
}

// ---------------------------------------------------------------------------
// Free functions

BranchingProcess unfold(const PetriNet& base, std::size_t depth,
                        std::size_t node_cap) {
  NetReport rep = validate_net(base, node_cap);
  if (!rep.wellformed) throw error("malformed net: " + rep.problems.front());
  if (!rep.one_bounded_known)
    throw BoundExceeded("could not establish 1-boundedness within the state cap");
  if (!rep.one_bounded) throw NotOneBounded("unfold requires a 1-bounded base");
  BpBuilder b(base);
  b.saturate(depth, [](const Id&, const std::vector<int>&) { return true; },
             node_cap);
  return b.finish();
}

LabelledPoset causal_past(const BranchingProcess& bp, const Id& node) {
  BpIndex ix(bp);
  int x = ix.index_of(node);
  std::vector<int> events;
  for (int n = 0; n < ix.size(); ++n)
    if (ix.is_event(n) && ix.le(n, x)) events.push_back(n);
  // Element order: topological, ties by (label, id) for determinism.
  std::vector<int> order;
  std::set<int> left(events.begin(), events.end());
  while (!left.empty()) {
    std::vector<std::pair<std::pair<Id, Id>, int>> ready;
    for (int e : left) {
      bool min = true;
      for (int f : left)
        if (f != e && ix.le(f, e)) {
          min = false;
          break;
        }
      if (min) ready.push_back({{ix.label_of(e), ix.id_of(e)}, e});
    }
    std::sort(ready.begin(), ready.end());
    left.erase(ready.front().second);
    order.push_back(ready.front().second);
  }
  LabelledPoset ps;
  std::map<Id, int> occ;
  std::map<int, int> pos;
  for (int e : order) {
    pos[e] = static_cast<int>(ps.labels.size());
    ps.labels.push_back(ix.label_of(e));
    ps.occurrence.push_back(occ[ix.label_of(e)]++);
  }
  for (int a : order)
    for (int b : order)
      if (ix.le(a, b)) ps.leq.insert({pos[a], pos[b]});
  return ps;
}

Relation node_relation(const BranchingProcess& bp, const Id& x, const Id& y) {
  BpIndex ix(bp);
  return ix.relation(ix.index_of(x), ix.index_of(y));
}

std::vector<std::string> validate_branching_process(const BranchingProcess& bp) {
  std::vector<std::string> problems;
  const PetriNet& on = bp.occ_net;

  for (const auto& [arc, k] : on.flow) {
    if (k != 1) problems.push_back("flow multiplicity over (" + arc.first + "," +
                                   arc.second + ")");
    bool p1 = on.is_place(arc.first), t1 = on.is_transition(arc.first);
    bool p2 = on.is_place(arc.second), t2 = on.is_transition(arc.second);
    if ((!p1 && !t1) || (!p2 && !t2) || p1 == p2)
      problems.push_back("ill-typed arc (" + arc.first + "," + arc.second + ")");
  }

  // Every condition has at most one producing event; the tokenless ones are
  // exactly the initial marking.
  for (const auto& q : on.places) {
    long long producers = on.pre_p(q).size();
    if (producers > 1) problems.push_back("place with two producers: " + q);
    bool initial = on.initial_marking.contains(q);
    if (producers == 0 && !initial)
      problems.push_back("tokenless place outside the initial marking: " + q);
    if (producers > 0 && initial)
      problems.push_back("produced place marked initially: " + q);
    if (on.initial_marking.count(q) > 1)
      problems.push_back("initial multiplicity over 1 on: " + q);
  }

  // Type-respecting labelling.
  for (const auto& q : on.places) {
    auto it = bp.lambda.find(q);
    if (it == bp.lambda.end())
      problems.push_back("unlabelled place: " + q);
    else if (!bp.base.is_place(it->second))
      problems.push_back("place labelled by non-place: " + q);
  }
  for (const auto& t : on.transitions) {
    auto it = bp.lambda.find(t);
    if (it == bp.lambda.end())
      problems.push_back("unlabelled transition: " + t);
    else if (!bp.base.is_transition(it->second))
      problems.push_back("transition labelled by non-transition: " + t);
  }
  if (!problems.empty()) return problems;

  std::optional<BpIndex> ix;
  try {
    ix.emplace(bp);
  } catch (const error& e) {
    problems.push_back(e.what());
    return problems;
  }

  auto lam = [&](const Id& n) { return bp.lambda.at(n); };

  // Homomorphism on transitions and on the initial cut.
  for (const auto& t : on.transitions) {
    Marking pre_img, post_img;
    for (int c : ix->pre(ix->index_of(t))) pre_img.add(lam(ix->id_of(c)));
    for (int c : ix->post(ix->index_of(t))) post_img.add(lam(ix->id_of(c)));
    if (pre_img != bp.base.pre_t(lam(t)))
      problems.push_back("λ breaks precondition of " + t);
    if (post_img != bp.base.post_t(lam(t)))
      problems.push_back("λ breaks postcondition of " + t);
  }
  Marking in_img;
  for (const auto& [q, k] : on.initial_marking) in_img.add(lam(q), k);
  if (in_img != bp.base.initial_marking)
    problems.push_back("λ breaks the initial marking");

  // Injectivity on (label, precondition).
  std::map<std::pair<Id, std::vector<Id>>, Id> seen;
  for (const auto& t : on.transitions) {
    std::vector<Id> pre_ids;
    for (int c : ix->pre(ix->index_of(t))) pre_ids.push_back(ix->id_of(c));
    std::sort(pre_ids.begin(), pre_ids.end());
    auto [it, fresh] = seen.insert({{lam(t), pre_ids}, t});
    if (!fresh)
      problems.push_back("duplicate transition (same label and precondition): " +
                         t + " vs " + it->second);
  }

  // No node may be in self-conflict.
  for (int n = 0; n < ix->size(); ++n)
    if (ix->in_conflict(n, n))
      problems.push_back("node in self-conflict: " + ix->id_of(n));

  return problems;
}

}  // namespace gb
