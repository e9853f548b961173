#include "gamebridge/distribution.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

#include "gamebridge/errors.hpp"

namespace gb {

namespace {

std::string join_ids(const std::vector<Id>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += xs[i];
  }
  return out;
}

std::string show_marking(const Marking& m) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [q, k] : m.entries()) {
    if (!first) os << ",";
    first = false;
    os << q;
    if (k > 1) os << ":" << k;
  }
  os << "}";
  return os.str();
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Returns false when x and y were already connected.
  bool unite(int x, int y) {
    int a = find(x), b = find(y);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Backtracking assignment of places to token blocks. Each block is seeded by
// one initially marked place; the remaining places are placed one by one with
// forward checking on the per-transition balance counts, so that a block can
// never end up consuming more from a transition than it gets back.
struct SliceSearch {
  const PetriNet& base;
  std::vector<Id> seeds;            // marked places, one block each
  std::vector<Id> order;            // unmarked places in assignment order
  std::vector<Id> trans;            // all transitions, indexed
  std::vector<Marking> tpre, tpost;
  std::map<Id, std::vector<std::pair<int, long long>>> consumes, produces;
  std::vector<std::vector<long long>> pre_assigned, post_assigned;  // [trans][block]
  std::vector<long long> pre_open, post_open;                       // [trans]
  std::map<Id, int> block_of;
  std::size_t steps = 0;
  static constexpr std::size_t kStepBudget = 5'000'000;

  explicit SliceSearch(const PetriNet& net) : base(net) {
    for (const auto& t : base.transitions) {
      trans.push_back(t);
      tpre.push_back(base.pre_t(t));
      tpost.push_back(base.post_t(t));
    }
    for (std::size_t i = 0; i < trans.size(); ++i) {
      for (const auto& [q, k] : tpre[i].entries()) consumes[q].push_back({(int)i, k});
      for (const auto& [q, k] : tpost[i].entries()) produces[q].push_back({(int)i, k});
      pre_open.push_back(tpre[i].size());
      post_open.push_back(tpost[i].size());
    }
    for (const auto& q : base.places)
      if (base.initial_marking.count(q) > 0) seeds.push_back(q);
    pre_assigned.assign(trans.size(), std::vector<long long>(seeds.size(), 0));
    post_assigned.assign(trans.size(), std::vector<long long>(seeds.size(), 0));

    // Assign places close to the seeds first so the balance counts bind early.
    std::set<Id> visited(seeds.begin(), seeds.end());
    std::queue<Id> bfs;
    for (const auto& q : seeds) bfs.push(q);
    while (!bfs.empty()) {
      Id q = bfs.front();
      bfs.pop();
      std::set<int> adj;
      auto collect = [&](const std::map<Id, std::vector<std::pair<int, long long>>>& side) {
        auto it = side.find(q);
        if (it != side.end())
          for (const auto& [ti, k] : it->second) adj.insert(ti);
      };
      collect(consumes);
      collect(produces);
      for (int ti : adj) {
        auto reach = [&](const Marking& m) {
          for (const auto& [p, k] : m.entries())
            if (visited.insert(p).second) {
              order.push_back(p);
              bfs.push(p);
            }
        };
        reach(tpre[ti]);
        reach(tpost[ti]);
      }
    }
    for (const auto& q : base.places)
      if (!visited.count(q)) order.push_back(q);  // disconnected from every token
  }

  bool balanced(int ti) const {
    if (pre_open[ti] == 0 && post_open[ti] == 0) {
      for (std::size_t b = 0; b < seeds.size(); ++b)
        if (pre_assigned[ti][b] != post_assigned[ti][b]) return false;
      return true;
    }
    for (std::size_t b = 0; b < seeds.size(); ++b) {
      if (pre_assigned[ti][b] > post_assigned[ti][b] + post_open[ti]) return false;
      if (post_assigned[ti][b] > pre_assigned[ti][b] + pre_open[ti]) return false;
    }
    return true;
  }

  // Applies q -> b and reports whether all touched transitions stay feasible.
  bool apply(const Id& q, int b) {
    block_of[q] = b;
    bool ok = true;
    std::set<int> touched;
    if (auto it = consumes.find(q); it != consumes.end())
      for (const auto& [ti, k] : it->second) {
        pre_assigned[ti][b] += k;
        pre_open[ti] -= k;
        touched.insert(ti);
      }
    if (auto it = produces.find(q); it != produces.end())
      for (const auto& [ti, k] : it->second) {
        post_assigned[ti][b] += k;
        post_open[ti] -= k;
        touched.insert(ti);
      }
    for (int ti : touched)
      if (!balanced(ti)) ok = false;
    return ok;
  }

  void undo(const Id& q, int b) {
    block_of.erase(q);
    if (auto it = consumes.find(q); it != consumes.end())
      for (const auto& [ti, k] : it->second) {
        pre_assigned[ti][b] -= k;
        pre_open[ti] += k;
      }
    if (auto it = produces.find(q); it != produces.end())
      for (const auto& [ti, k] : it->second) {
        post_assigned[ti][b] -= k;
        post_open[ti] += k;
      }
  }

  // Runs the search; `found` gets each complete balanced assignment and stops
  // the search by returning true.
  bool run(const std::function<bool(const std::map<Id, int>&)>& found) {
    for (std::size_t b = 0; b < seeds.size(); ++b)
      if (!apply(seeds[b], (int)b)) return false;
    return descend(0, found);
  }

  bool descend(std::size_t pos, const std::function<bool(const std::map<Id, int>&)>& found) {
    if (++steps > kStepBudget) throw SizeLimit("slice search exceeded its step budget");
    if (pos == order.size()) return found(block_of);
    const Id& q = order[pos];
    for (std::size_t b = 0; b < seeds.size(); ++b) {
      bool feasible = apply(q, (int)b);
      if (feasible && descend(pos + 1, found)) return true;
      undo(q, (int)b);
    }
    return false;
  }
};

// Shared front end of the slice searches. Returns false when the net can have
// no slice distribution for an immediate structural reason.
bool slice_search_possible(const PetriNet& base, std::size_t place_cap) {
  if (base.places.size() > place_cap)
    throw SizeLimit("net has " + std::to_string(base.places.size()) +
                    " places, search is capped at " + std::to_string(place_cap));
  for (const auto& [q, k] : base.initial_marking.entries())
    if (k > 1) return false;  // the slice of q would hold several tokens
  if (base.initial_marking.empty() && !base.places.empty()) return false;
  for (const auto& t : base.transitions) {
    if (base.pre_t(t).size() != base.post_t(t).size()) return false;  // not concurrency-preserving
    if (base.pre_t(t).empty() && base.post_t(t).empty()) return false;  // belongs to no slice
  }
  return true;
}

SliceDistribution distribution_from_blocks(const PetriNet& base, std::size_t blocks,
                                           const std::map<Id, int>& block_of) {
  std::vector<std::set<Id>> parts(blocks);
  for (const auto& [q, b] : block_of) parts[b].insert(q);
  SliceDistribution d;
  for (const auto& part : parts) d.slices.push_back(induced_subnet(base, part));
  return d;
}

// Blocks touched by transition `ti`, read off a complete assignment.
std::set<int> touched_blocks(const SliceSearch& s, std::size_t ti,
                             const std::map<Id, int>& block_of) {
  std::set<int> blocks;
  for (const auto& [q, k] : s.tpre[ti].entries()) blocks.insert(block_of.at(q));
  for (const auto& [q, k] : s.tpost[ti].entries()) blocks.insert(block_of.at(q));
  return blocks;
}

bool blocks_acyclic(const SliceSearch& s, const std::map<Id, int>& block_of) {
  std::set<std::pair<int, int>> edges;
  for (std::size_t ti = 0; ti < s.trans.size(); ++ti) {
    std::set<int> blocks = touched_blocks(s, ti, block_of);
    for (auto a = blocks.begin(); a != blocks.end(); ++a)
      for (auto b = std::next(a); b != blocks.end(); ++b) edges.insert({*a, *b});
  }
  UnionFind uf((int)s.seeds.size());
  for (const auto& [a, b] : edges)
    if (!uf.unite(a, b)) return false;
  return true;
}

}  // namespace

PetriNet induced_subnet(const PetriNet& base, const std::set<Id>& places) {
  PetriNet sub;
  for (const auto& q : places) {
    if (!base.is_place(q)) throw UnknownNode(q);
    sub.add_place(q, base.initial_marking.count(q));
  }
  for (const auto& t : base.transitions) {
    Marking pre = base.pre_t(t), post = base.post_t(t);
    bool touches = false;
    for (const auto& [q, k] : pre.entries())
      if (places.count(q)) touches = true;
    for (const auto& [q, k] : post.entries())
      if (places.count(q)) touches = true;
    if (!touches) continue;
    sub.add_transition(t);
    for (const auto& [q, k] : pre.entries())
      if (places.count(q)) sub.arc(q, t, k);
    for (const auto& [q, k] : post.entries())
      if (places.count(q)) sub.arc(t, q, k);
  }
  return sub;
}

std::vector<std::string> validate_slice_distribution(const PetriNet& base,
                                                     const SliceDistribution& d) {
  std::vector<std::string> problems;
  Multiset<Id> covered;
  for (const auto& s : d.slices)
    for (const auto& q : s.places) covered.add(q);
  for (const auto& q : base.places)
    if (covered.count(q) == 0) problems.push_back("place " + q + " belongs to no slice");
  for (const auto& [q, k] : covered.entries()) {
    if (!base.is_place(q))
      problems.push_back("slice place " + q + " does not exist in the base net");
    else if (k > 1)
      problems.push_back("place " + q + " belongs to " + std::to_string(k) + " slices");
  }
  std::set<Id> trans_covered;
  for (std::size_t i = 0; i < d.slices.size(); ++i) {
    const PetriNet& s = d.slices[i];
    std::string tag = "slice " + std::to_string(i);
    if (s.initial_marking.size() != 1)
      problems.push_back(tag + " carries " + std::to_string(s.initial_marking.size()) +
                         " initial tokens, expected exactly 1");
    bool in_base = true;
    for (const auto& q : s.places)
      if (!base.is_place(q)) in_base = false;
    if (!in_base) continue;  // reported above, the induced comparison is moot
    PetriNet want = induced_subnet(base, s.places);
    if (s.transitions != want.transitions)
      problems.push_back(tag + " does not carry exactly the transitions touching its places");
    if (s.flow != want.flow)
      problems.push_back(tag + " flow differs from the restriction of the base flow");
    if (s.initial_marking != want.initial_marking)
      problems.push_back(tag + " initial marking differs from the restriction of the base marking");
    for (const auto& t : s.transitions) {
      long long in = s.pre_t(t).size(), out = s.post_t(t).size();
      if (in != out)
        problems.push_back(tag + " is unbalanced at transition " + t + " (consumes " +
                           std::to_string(in) + ", produces " + std::to_string(out) + ")");
    }
    for (const auto& t : s.transitions) trans_covered.insert(t);
  }
  for (const auto& t : base.transitions)
    if (!trans_covered.count(t)) problems.push_back("transition " + t + " belongs to no slice");
  return problems;
}

std::optional<SliceDistribution> find_slice_distribution(const PetriNet& base,
                                                         std::size_t place_cap) {
  if (base.places.empty() && base.transitions.empty()) return SliceDistribution{};
  if (!slice_search_possible(base, place_cap)) return std::nullopt;
  SliceSearch search(base);
  std::optional<SliceDistribution> result;
  search.run([&](const std::map<Id, int>& block_of) {
    result = distribution_from_blocks(base, search.seeds.size(), block_of);
    return true;
  });
  return result;
}

bool acyclic_distribution_exists(const PetriNet& base, std::size_t place_cap) {
  if (base.places.empty() && base.transitions.empty()) return true;
  if (!slice_search_possible(base, place_cap)) return false;
  SliceSearch search(base);
  return search.run([&](const std::map<Id, int>& block_of) {
    return blocks_acyclic(search, block_of);
  });
}

std::vector<std::string> validate_singular_net(const PetriNet& base, const SingularNet& sn) {
  std::vector<std::string> problems;
  const PetriNet& net = sn.net;
  if (net.initial_marking.size() != 1)
    problems.push_back("member carries " + std::to_string(net.initial_marking.size()) +
                       " initial tokens, expected exactly 1");
  for (const auto& t : net.transitions) {
    long long in = net.pre_t(t).size(), out = net.post_t(t).size();
    if (in != 1 || out != 1)
      problems.push_back("transition " + t + " is not 1-in/1-out in the member (consumes " +
                         std::to_string(in) + ", produces " + std::to_string(out) + ")");
  }
  std::map<Id, Id> place_image;
  for (const auto& q : net.places) {
    auto it = sn.pi.find(q);
    if (it == sn.pi.end()) {
      problems.push_back("place " + q + " has no label");
    } else if (!base.is_place(it->second)) {
      problems.push_back("place " + q + " is labelled by " + it->second +
                         ", which is not a base place");
    } else {
      if (!place_image.emplace(it->second, q).second)
        problems.push_back("places " + place_image[it->second] + " and " + q +
                           " are both labelled " + it->second);
    }
  }
  for (const auto& t : net.transitions) {
    auto it = sn.pi.find(t);
    if (it == sn.pi.end())
      problems.push_back("transition " + t + " has no label");
    else if (!base.is_transition(it->second))
      problems.push_back("transition " + t + " is labelled by " + it->second +
                         ", which is not a base transition");
  }
  if (!problems.empty()) return problems;  // the remaining clauses assume the labelling is sane

  for (const auto& [q, k] : net.initial_marking.entries())
    if (base.initial_marking.count(sn.pi.at(q)) == 0)
      problems.push_back("initial place " + q + " is labelled by " + sn.pi.at(q) +
                         ", which carries no initial token in the base net");

  // Every base transition consuming the image of a member place must have a
  // copy consuming that place, so the member can always follow its token.
  for (const auto& q : net.places) {
    const Id& image = sn.pi.at(q);
    for (const auto& t : base.transitions) {
      if (base.pre_t(t).count(image) == 0) continue;
      bool served = false;
      for (const Id& tcopy : net.post_p(q).support())
        if (sn.pi.at(tcopy) == t) served = true;
      if (!served)
        problems.push_back("no copy of " + t + " consumes place " + q + " (labelled " + image +
                           ")");
    }
  }
  for (const auto& [arc, k] : net.flow.entries()) {
    Id from = sn.pi.at(arc.first);
    Id to = sn.pi.at(arc.second);
    if (base.flow.count({from, to}) == 0)
      problems.push_back("member arc " + arc.first + " -> " + arc.second +
                         " has no counterpart " + from + " -> " + to + " in the base net");
  }
  return problems;
}

std::pair<PetriNet, std::map<Id, Id>> compose_snd(const std::vector<SingularNet>& family) {
  PetriNet comp;
  std::map<Id, Id> pi;
  for (const auto& member : family) {
    for (const auto& q : member.net.places) {
      if (comp.is_place(q)) throw IncompatibleFamily("place " + q + " appears in two members");
      comp.add_place(q, member.net.initial_marking.count(q));
      auto it = member.pi.find(q);
      if (it != member.pi.end()) pi[q] = it->second;
    }
  }
  for (const auto& member : family) {
    for (const auto& t : member.net.transitions) {
      auto label = member.pi.find(t);
      Id image = label == member.pi.end() ? Id{} : label->second;
      auto known = pi.find(t);
      if (known != pi.end() && comp.is_transition(t)) {
        if (known->second != image)
          throw IncompatibleFamily("transition " + t + " is labelled " + known->second +
                                   " and " + image + " in different members");
      } else {
        comp.add_transition(t);
        if (!image.empty()) pi[t] = image;
      }
    }
    for (const auto& [arc, k] : member.net.flow.entries()) comp.arc(arc.first, arc.second, k);
  }
  return {comp, pi};
}

SndReport validate_snd(const PetriNet& base, const SingularNetDistribution& snd,
                       std::size_t state_cap) {
  SndReport report;
  auto& problems = report.problems;
  const PetriNet& comp = snd.composition;
  const auto& pi = snd.pi;

  auto [rebuilt, rebuilt_pi] = compose_snd(snd.nets);
  if (rebuilt.places != comp.places || rebuilt.transitions != comp.transitions ||
      rebuilt.flow != comp.flow || rebuilt.initial_marking != comp.initial_marking)
    problems.push_back("composition does not match the parallel composition of the members");

  for (const auto& q : comp.places)
    if (!pi.count(q) || !base.is_place(pi.at(q))) {
      problems.push_back("composition place " + q + " lacks a base place label");
      return report;
    }
  for (const auto& t : comp.transitions)
    if (!pi.count(t) || !base.is_transition(pi.at(t))) {
      problems.push_back("composition transition " + t + " lacks a base transition label");
      return report;
    }

  auto image = [&](const Marking& m) {
    Marking out;
    for (const auto& [q, k] : m.entries()) out.add(pi.at(q), k);
    return out;
  };

  if (image(comp.initial_marking) != base.initial_marking)
    problems.push_back("initial marking maps to " + show_marking(image(comp.initial_marking)) +
                       ", expected " + show_marking(base.initial_marking));

  for (const auto& t : comp.transitions) {
    const Id& bt = pi.at(t);
    if (image(comp.pre_t(t)) != base.pre_t(bt))
      problems.push_back("precondition of " + t + " maps to " +
                         show_marking(image(comp.pre_t(t))) + ", expected " +
                         show_marking(base.pre_t(bt)));
    if (image(comp.post_t(t)) != base.post_t(bt))
      problems.push_back("postcondition of " + t + " maps to " +
                         show_marking(image(comp.post_t(t))) + ", expected " +
                         show_marking(base.post_t(bt)));
  }

  std::vector<Id> trans(comp.transitions.begin(), comp.transitions.end());
  for (std::size_t i = 0; i < trans.size(); ++i)
    for (std::size_t j = i + 1; j < trans.size(); ++j)
      if (pi.at(trans[i]) == pi.at(trans[j]) && comp.pre_t(trans[i]) == comp.pre_t(trans[j]))
        problems.push_back("copies " + trans[i] + " and " + trans[j] + " of " + pi.at(trans[i]) +
                           " share the same precondition");

  // Every reachable way of assembling a base precondition out of copy places
  // must be served by a transition copy with exactly that precondition.
  ReachResult reach;
  try {
    reach = reachable_markings(comp, ReachMode::fixpoint, 0, state_cap);
  } catch (const BoundExceeded&) {
    report.complete = false;
    return report;
  }
  NetIndex cix(comp);
  std::set<std::vector<Id>> reported;
  for (const Marking& m : reach.markings) {
    for (const auto& bt : base.transitions) {
      const Marking& bpre = base.pre_t(bt);
      if (bpre.empty()) continue;
      // Group the marked copies by their base image.
      std::vector<std::vector<Id>> pools;
      std::vector<long long> need;
      bool feasible = true;
      for (const auto& [bq, k] : bpre.entries()) {
        std::vector<Id> pool;
        for (const auto& [q, cnt] : m.entries())
          if (pi.at(q) == bq) pool.push_back(q);
        if ((long long)pool.size() < k) feasible = false;
        pools.push_back(pool);
        need.push_back(k);
      }
      if (!feasible) continue;
      std::vector<Id> chosen;
      std::function<void(std::size_t)> pick = [&](std::size_t gi) {
        if (gi == pools.size()) {
          std::vector<Id> key = chosen;
          std::sort(key.begin(), key.end());
          Marking assembled = multiset_of(key);
          bool served = false;
          for (const auto& [tcopy, k] : cix.ppost.at(key.front()).entries())
            if (pi.at(tcopy) == bt && cix.tpre.at(tcopy) == assembled) served = true;
          if (!served && reported.insert(key).second)
            problems.push_back("no copy of " + bt + " serves the reachable precondition {" +
                               join_ids(key) + "}");
          return;
        }
        // choose need[gi] distinct places from pools[gi]
        std::vector<Id>& pool = pools[gi];
        long long k = need[gi];
        std::vector<std::size_t> idx(k);
        std::function<void(std::size_t, std::size_t)> comb = [&](std::size_t at, std::size_t from) {
          if (at == (std::size_t)k) {
            std::size_t before = chosen.size();
            for (std::size_t x = 0; x < (std::size_t)k; ++x) chosen.push_back(pool[idx[x]]);
            pick(gi + 1);
            chosen.resize(before);
            return;
          }
          for (std::size_t p = from; p < pool.size(); ++p) {
            idx[at] = p;
            comb(at + 1, p + 1);
          }
        };
        comb(0, 0);
      };
      pick(0);
    }
  }
  report.complete = reach.complete;
  return report;
}

SingularNetDistribution snd_from_slices([[maybe_unused]] const PetriNet& base,
                                        const SliceDistribution& d) {
  SingularNetDistribution snd;
  for (const auto& slice : d.slices) {
    SingularNet member;
    member.net = slice;
    for (const auto& q : slice.places) member.pi[q] = q;
    for (const auto& t : slice.transitions) member.pi[t] = t;
    snd.nets.push_back(std::move(member));
  }
  auto [comp, pi] = compose_snd(snd.nets);
  snd.composition = std::move(comp);
  snd.pi = std::move(pi);
  return snd;
}

SingularNetDistribution build_snd(const PetriNet& base, std::size_t state_cap) {
  for (const auto& t : base.transitions)
    if (base.pre_t(t).size() != base.post_t(t).size()) throw NotConcurrencyPreserving(t);

  std::vector<Id> seeds = base.initial_marking.expand();  // one member per token
  std::size_t members = seeds.size();

  SingularNetDistribution snd;
  snd.nets.resize(members);
  std::map<Id, std::size_t> member_of;  // copy place -> member index
  std::map<Id, Id> base_of;             // copy place -> base place
  for (std::size_t i = 0; i < members; ++i) {
    for (const auto& q : base.places) {
      Id copy = q + "@" + std::to_string(i);
      snd.nets[i].net.add_place(copy, q == seeds[i] ? 1 : 0);
      snd.nets[i].pi[copy] = q;
      member_of[copy] = i;
      base_of[copy] = q;
    }
  }

  // Fixpoint over reachable markings of the growing composition: whenever a
  // base precondition can be assembled in a new way, add a fresh shared copy.
  std::map<std::pair<Id, std::vector<Id>>, Id> copy_for;  // (base t, sorted pre) -> copy id
  std::map<Id, Marking> copy_pre, copy_post;

  Marking start;
  for (std::size_t i = 0; i < members; ++i) start.add(seeds[i] + "@" + std::to_string(i));
  std::set<Marking> seen{start};
  std::queue<Marking> work;
  work.push(start);

  auto fresh_copy = [&](const Id& bt, const std::vector<Id>& pre_key) {
    std::string h;
    for (const auto& q : pre_key) h += q + "|";
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : h) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex;
    for (int shift = 44; shift >= 0; shift -= 4) hex += digits[(hash >> shift) & 0xF];
    Id id = bt + "#" + hex;

    std::set<std::size_t> involved;
    for (const auto& q : pre_key) involved.insert(member_of.at(q));
    // Pair the sorted base postcondition with the sorted involved members.
    std::vector<Id> bpost = base.post_t(bt).expand();
    std::vector<std::size_t> order(involved.begin(), involved.end());
    Marking post;
    for (std::size_t x = 0; x < bpost.size(); ++x)
      post.add(bpost[x] + "@" + std::to_string(order[x]));

    copy_for[{bt, pre_key}] = id;
    copy_pre[id] = multiset_of(pre_key);
    copy_post[id] = post;
    for (std::size_t i : involved) {
      snd.nets[i].net.add_transition(id);
      snd.nets[i].pi[id] = bt;
      for (const auto& [q, k] : copy_pre[id].entries())
        if (member_of.at(q) == i) snd.nets[i].net.arc(q, id, k);
      for (const auto& [q, k] : post.entries())
        if (member_of.at(q) == i) snd.nets[i].net.arc(id, q, k);
    }
    return id;
  };

  while (!work.empty()) {
    Marking m = work.front();
    work.pop();
    for (const auto& bt : base.transitions) {
      const Marking& bpre = base.pre_t(bt);
      if (bpre.empty()) continue;
      std::vector<std::vector<Id>> pools;
      std::vector<long long> need;
      bool feasible = true;
      for (const auto& [bq, k] : bpre.entries()) {
        std::vector<Id> pool;
        for (const auto& [q, cnt] : m.entries())
          if (base_of.at(q) == bq) pool.push_back(q);
        if ((long long)pool.size() < k) feasible = false;
        pools.push_back(pool);
        need.push_back(k);
      }
      if (!feasible) continue;
      std::vector<Id> chosen;
      std::function<void(std::size_t)> pick = [&](std::size_t gi) {
        if (gi == pools.size()) {
          std::vector<Id> key = chosen;
          std::sort(key.begin(), key.end());
          auto it = copy_for.find({bt, key});
          Id copy = it == copy_for.end() ? fresh_copy(bt, key) : it->second;
          Marking next = m - copy_pre.at(copy) + copy_post.at(copy);
          if (seen.insert(next).second) {
            if (seen.size() > state_cap) throw BoundExceeded("singular net construction");
            work.push(next);
          }
          return;
        }
        std::vector<Id>& pool = pools[gi];
        long long k = need[gi];
        std::function<void(std::size_t, long long, std::vector<Id>&)> comb =
            [&](std::size_t from, long long left, std::vector<Id>& acc) {
              if (left == 0) {
                std::size_t before = chosen.size();
                for (const auto& q : acc) chosen.push_back(q);
                pick(gi + 1);
                chosen.resize(before);
                return;
              }
              for (std::size_t p = from; p < pool.size(); ++p) {
                if (pool.size() - p < (std::size_t)left) break;
                acc.push_back(pool[p]);
                comb(p + 1, left - 1, acc);
                acc.pop_back();
              }
            };
        std::vector<Id> acc;
        comb(0, k, acc);
      };
      pick(0);
    }
  }

  auto [comp, pi] = compose_snd(snd.nets);
  snd.composition = std::move(comp);
  snd.pi = std::move(pi);
  return snd;
}

CommunicationGraph communication_graph(const SliceDistribution& d) {
  CommunicationGraph g;
  for (std::size_t i = 0; i < d.slices.size(); ++i) g.vertices.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < d.slices.size(); ++i)
    for (std::size_t j = i + 1; j < d.slices.size(); ++j) {
      bool shared = false;
      for (const auto& t : d.slices[i].transitions)
        if (d.slices[j].transitions.count(t)) shared = true;
      if (shared) g.edges.insert({g.vertices[i], g.vertices[j]});
    }
  return g;
}

CommunicationGraph communication_graph(const SingularNetDistribution& snd) {
  CommunicationGraph g;
  for (std::size_t i = 0; i < snd.nets.size(); ++i) g.vertices.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < snd.nets.size(); ++i)
    for (std::size_t j = i + 1; j < snd.nets.size(); ++j) {
      bool shared = false;
      for (const auto& t : snd.nets[i].net.transitions)
        if (snd.nets[j].net.transitions.count(t)) shared = true;
      if (shared) g.edges.insert({g.vertices[i], g.vertices[j]});
    }
  return g;
}

bool is_acyclic(const CommunicationGraph& g) {
  std::map<Id, int> index;
  for (const auto& v : g.vertices) index.emplace(v, (int)index.size());
  UnionFind uf((int)index.size());
  for (const auto& [a, b] : g.edges) {
    if (a == b) continue;
    if (!uf.unite(index.at(a), index.at(b))) return false;
  }
  return true;
}

PetriNet gen_3sat_net(const ThreeSatFormula& formula) {
  const int n = formula.variables;
  const int m = (int)formula.clauses.size();
  if (n < 1) throw MalformedFormula("at least one variable is required");
  if (m < 1) throw MalformedFormula("at least one clause is required");
  for (const auto& clause : formula.clauses)
    for (int lit : clause)
      if (lit == 0 || lit < -n || lit > n)
        throw MalformedFormula("literal " + std::to_string(lit) + " is out of range");

  PetriNet net;
  net.add_place("top", 1);
  net.add_place("bot", 1);
  for (int i = 1; i <= n; ++i) {
    net.add_place("x" + std::to_string(i));
    net.add_place("nx" + std::to_string(i));
  }
  for (int j = 1; j <= m; ++j) {
    net.add_place("d" + std::to_string(j) + "a");
    net.add_place("V" + std::to_string(j));
    net.add_place("d" + std::to_string(j) + "b");
  }
  for (int k = 1; k <= m - 1; ++k) net.add_place("H" + std::to_string(k), 1);

  // Choosing a truth value for a variable sends one of its literal places to
  // the slice of `top` and the other to the slice of `bot`.
  for (int i = 1; i <= n; ++i) {
    Id t = "tx" + std::to_string(i);
    net.add_transition(t);
    net.arc("top", t);
    net.arc("bot", t);
    net.arc(t, "x" + std::to_string(i));
    net.arc(t, "nx" + std::to_string(i));
  }

  // The verification place V{j} can join the slice of a literal only if the
  // clause has a literal in that slice; the dummy places absorb the rest.
  for (int j = 1; j <= m; ++j) {
    Id t = "C" + std::to_string(j);
    net.add_transition(t);
    for (int lit : formula.clauses[(std::size_t)j - 1]) {
      Id q = (lit > 0 ? "x" : "nx") + std::to_string(lit > 0 ? lit : -lit);
      net.arc(q, t);
    }
    net.arc(t, "d" + std::to_string(j) + "a");
    net.arc(t, "V" + std::to_string(j));
    net.arc(t, "d" + std::to_string(j) + "b");
  }

  // Chaining gadget: if V{k} and V{k+1} live in different slices, the helper
  // H{k} closes a cycle with the ever-present top/bot edge, so an acyclic
  // distribution must line up all verification places.
  for (int k = 1; k <= m - 1; ++k) {
    Id vk = "V" + std::to_string(k), vn = "V" + std::to_string(k + 1);
    Id hk = "H" + std::to_string(k);
    Id a = "h" + std::to_string(k) + "a";
    Id b = "h" + std::to_string(k) + "b";
    Id c = "h" + std::to_string(k) + "c";
    net.add_transition(a);
    net.arc(vk, a);
    net.arc(vn, a);
    net.arc(a, vk);
    net.arc(a, vn);
    net.add_transition(b);
    net.arc(vk, b);
    net.arc(hk, b);
    net.arc(b, vk);
    net.arc(b, hk);
    net.add_transition(c);
    net.arc(vn, c);
    net.arc(hk, c);
    net.arc(c, vn);
    net.arc(c, hk);
  }
  return net;
}

}  // namespace gb
