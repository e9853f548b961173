#include "gamebridge/nets.hpp"

#include <algorithm>
#include <deque>

namespace gb {

Marking PetriNet::pre_t(const Id& t) const {
  Marking m;
  for (const auto& [arc, k] : flow)
    if (arc.second == t) m.add(arc.first, k);
  return m;
}

Marking PetriNet::post_t(const Id& t) const {
  Marking m;
  for (const auto& [arc, k] : flow)
    if (arc.first == t) m.add(arc.second, k);
  return m;
}

Multiset<Id> PetriNet::pre_p(const Id& q) const {
  Multiset<Id> m;
  for (const auto& [arc, k] : flow)
    if (arc.second == q) m.add(arc.first, k);
  return m;
}

Multiset<Id> PetriNet::post_p(const Id& q) const {
  Multiset<Id> m;
  for (const auto& [arc, k] : flow)
    if (arc.first == q) m.add(arc.second, k);
  return m;
}

void PetriNet::add_place(const Id& q, long long tokens) {
  places.insert(q);
  if (tokens > 0) initial_marking.add(q, tokens);
}

void PetriNet::add_transition(const Id& t) { transitions.insert(t); }

void PetriNet::arc(const Id& from, const Id& to, long long k) {
  flow.add({from, to}, k);
}

NetIndex::NetIndex(const PetriNet& n) : net(&n) {
  for (const auto& t : n.transitions) {
    tpre[t] = {};
    tpost[t] = {};
  }
  for (const auto& q : n.places) {
    ppre[q] = {};
    ppost[q] = {};
  }
  for (const auto& [arc, k] : n.flow) {
    if (n.is_place(arc.first)) {
      tpre[arc.second].add(arc.first, k);
      ppost[arc.first].add(arc.second, k);
    } else {
      tpost[arc.first].add(arc.second, k);
      ppre[arc.second].add(arc.first, k);
    }
  }
}

bool is_enabled(const NetIndex& ix, const Marking& m, const Id& t) {
  auto it = ix.tpre.find(t);
  if (it == ix.tpre.end()) throw UnknownTransition(t);
  return it->second.leq(m);
}

std::vector<Id> enabled_transitions(const NetIndex& ix, const Marking& m) {
  std::vector<Id> out;
  for (const auto& [t, pre] : ix.tpre)
    if (pre.leq(m)) out.push_back(t);
  return out;
}

Marking fire(const NetIndex& ix, const Marking& m, const Id& t) {
  auto pre = ix.tpre.find(t);
  if (pre == ix.tpre.end()) throw UnknownTransition(t);
  if (!pre->second.leq(m)) throw NotEnabled(t);
  return m - pre->second + ix.tpost.at(t);
}

Marking fire(const PetriNet& net, const Marking& m, const Id& t) {
  if (!net.is_transition(t)) throw UnknownTransition(t);
  Marking pre = net.pre_t(t);
  if (!pre.leq(m)) throw NotEnabled(t);
  return m - pre + net.post_t(t);
}

bool is_final(const NetIndex& ix, const Marking& m) {
  for (const auto& [t, pre] : ix.tpre)
    if (pre.leq(m)) return false;
  return true;
}

bool is_final(const PetriNet& net, const Marking& m) {
  NetIndex ix(net);
  return is_final(ix, m);
}

ReachResult reachable_markings(const PetriNet& net, ReachMode mode,
                               std::size_t bound, std::size_t state_cap) {
  NetIndex ix(net);
  std::set<Marking> seen{net.initial_marking};
  std::deque<Marking> frontier{net.initial_marking};
  std::size_t depth = 0;
  bool complete = true;
  while (!frontier.empty()) {
    if (mode == ReachMode::bounded && depth >= bound) {
      // Anything still on the frontier may have unexplored successors.
      complete = false;
      for (const auto& m : frontier)
        if (!is_final(ix, m)) goto done;
      complete = true;
      goto done;
    }
    {
      std::deque<Marking> next;
      for (const auto& m : frontier) {
        for (const auto& [t, pre] : ix.tpre) {
          if (!pre.leq(m)) continue;
          Marking succ = m - pre + ix.tpost.at(t);
          if (seen.insert(succ).second) {
            if (seen.size() > state_cap) {
              if (mode == ReachMode::fixpoint)
                throw BoundExceeded("reachable markings over " +
                                    std::to_string(state_cap));
              complete = false;
              goto done;
            }
            next.push_back(std::move(succ));
          }
        }
      }
      frontier = std::move(next);
    }
    ++depth;
  }
done:
  ReachResult r;
  r.markings.assign(seen.begin(), seen.end());
  r.complete = complete;
  return r;
}

bool is_concurrency_preserving(const PetriNet& net) {
  for (const auto& t : net.transitions)
    if (net.pre_t(t).size() != net.post_t(t).size()) return false;
  return true;
}

bool has_setlike_flow(const PetriNet& net) {
  for (const auto& [arc, k] : net.flow)
    if (k != 1) return false;
  return true;
}

NetReport validate_net(const PetriNet& net, std::size_t state_cap) {
  NetReport rep;
  for (const auto& q : net.places)
    if (net.transitions.count(q))
      rep.problems.push_back("id used as place and transition: " + q);
  for (const auto& [arc, k] : net.flow) {
    bool p1 = net.is_place(arc.first), t1 = net.is_transition(arc.first);
    bool p2 = net.is_place(arc.second), t2 = net.is_transition(arc.second);
    if (!(p1 || t1) || !(p2 || t2))
      rep.problems.push_back("flow endpoint undeclared: (" + arc.first + "," +
                             arc.second + ")");
    else if (p1 == p2)
      rep.problems.push_back("flow must connect a place and a transition: (" +
                             arc.first + "," + arc.second + ")");
  }
  for (const auto& [q, k] : net.initial_marking)
    if (!net.is_place(q))
      rep.problems.push_back("initial marking on undeclared place: " + q);
  rep.wellformed = rep.problems.empty();
  rep.concurrency_preserving = rep.wellformed && is_concurrency_preserving(net);
  rep.one_bounded = false;
  rep.one_bounded_known = false;
  if (rep.wellformed) {
    try {
      ReachResult r = reachable_markings(net, ReachMode::fixpoint, 0, state_cap);
      rep.one_bounded_known = true;
      rep.one_bounded =
          std::all_of(r.markings.begin(), r.markings.end(), [](const Marking& m) {
            for (const auto& [q, k] : m)
              if (k > 1) return false;
            return true;
          });
    } catch (const BoundExceeded&) {
      // leave one_bounded unknown
    }
  }
  return rep;
}

}  // namespace gb
