#include "quotient.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace gb::detail {

std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex12(std::uint64_t h) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%012llx",
                static_cast<unsigned long long>(h & 0xffffffffffffULL));
  return buf;
}

namespace {

constexpr char kSep = '\x1f';

using Token = std::pair<Id, std::vector<std::uint64_t>>;
using State = std::vector<Token>;  // kept sorted

std::string hex16(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::uint64_t seed_level(const Id& place) { return fnv64(place); }

std::uint64_t init_level(const Id& place) { return fnv64(place + kSep + "init"); }

std::uint64_t step_level(const Id& place, const Id& transition,
                         std::vector<std::uint64_t> consumed_prev) {
  std::sort(consumed_prev.begin(), consumed_prev.end());
  std::string s = place + kSep + transition;
  for (std::uint64_t p : consumed_prev) {
    s += kSep;
    s += hex16(p);
  }
  return fnv64(s);
}

namespace {

struct Engine {
  const PetriGame& g;
  NetIndex ix;
  int memory;
  const std::map<Id, Id>* alias;
  const Rule* rule;
  std::set<RuleKey> keys;

  Engine(const PetriGame& game, int mem, const std::map<Id, Id>* al, const Rule* r)
      : g(game), ix(game.net), memory(mem), alias(al), rule(r) {}

  Id al(const Id& x) const {
    if (!alias) return x;
    auto it = alias->find(x);
    return it == alias->end() ? x : it->second;
  }

  Token initial_token(const Id& q) const {
    std::vector<std::uint64_t> v(memory + 1);
    v[0] = seed_level(al(q));
    std::uint64_t seed = init_level(al(q));
    for (int j = 1; j <= memory; ++j) v[j] = seed;
    return {q, v};
  }

  Token fired_token(const Id& q, const Id& t, const std::vector<Token>& consumed) const {
    std::vector<std::uint64_t> v(memory + 1);
    v[0] = seed_level(al(q));
    for (int j = 1; j <= memory; ++j) {
      std::vector<std::uint64_t> prev;
      for (const Token& c : consumed) prev.push_back(c.second[j - 1]);
      v[j] = step_level(al(q), al(t), std::move(prev));
    }
    return {q, v};
  }

  State initial_state() const {
    State st;
    for (const auto& [q, k] : g.net.initial_marking.entries())
      for (long long i = 0; i < k; ++i) st.push_back(initial_token(q));
    std::sort(st.begin(), st.end());
    return st;
  }

  Marking marking_of(const State& st) const {
    Marking m;
    for (const Token& tok : st) m.add(tok.first);
    return m;
  }

  // All decision-respecting successors. Each successor corresponds to a
  // choice of which token instance feeds each precondition place.
  std::vector<State> successors(const State& st) {
    std::vector<State> out;
    std::map<Id, std::vector<int>> by_place;
    for (int i = 0; i < static_cast<int>(st.size()); ++i)
      by_place[st[i].first].push_back(i);

    for (const auto& t : g.net.transitions) {
      std::vector<std::pair<Id, long long>> need;
      bool feasible = true;
      const Marking pre_m = g.net.pre_t(t);
      for (const auto& [q, k] : pre_m.entries()) {
        auto it = by_place.find(q);
        if (it == by_place.end() || static_cast<long long>(it->second.size()) < k) {
          feasible = false;
          break;
        }
        need.push_back({q, k});
      }
      if (!feasible) continue;

      std::vector<int> chosen;
      std::function<void(std::size_t)> pick = [&](std::size_t slot) {
        if (slot == need.size()) {
          // Decision gate: every chosen system token must allow t.
          for (int i : chosen) {
            if (!g.is_system(st[i].first)) continue;
            RuleKey key{al(st[i].first), st[i].second[memory]};
            keys.insert(key);
            if (rule) {
              auto it = rule->find(key);
              if (it == rule->end() || !it->second.count(al(t))) return;
            }
          }
          std::vector<Token> consumed;
          for (int i : chosen) consumed.push_back(st[i]);
          State next;
          std::set<int> used(chosen.begin(), chosen.end());
          for (int i = 0; i < static_cast<int>(st.size()); ++i)
            if (!used.count(i)) next.push_back(st[i]);
          const Marking post_m = g.net.post_t(t);
          for (const auto& [q, k] : post_m.entries())
            for (long long c = 0; c < k; ++c) next.push_back(fired_token(q, t, consumed));
          std::sort(next.begin(), next.end());
          out.push_back(std::move(next));
          return;
        }
        const auto& [q, k] = need[slot];
        const std::vector<int>& pool = by_place[q];
        // choose k distinct indices from pool (ascending, no repetition)
        std::vector<int> comb;
        std::function<void(std::size_t)> choose = [&](std::size_t from) {
          if (static_cast<long long>(comb.size()) == k) {
            std::size_t mark = chosen.size();
            chosen.insert(chosen.end(), comb.begin(), comb.end());
            pick(slot + 1);
            chosen.resize(mark);
            return;
          }
          for (std::size_t i = from; i < pool.size(); ++i) {
            comb.push_back(pool[i]);
            choose(i + 1);
            comb.pop_back();
          }
        };
        choose(0);
      };
      pick(0);
    }
    return out;
  }
};

std::string describe(const State& st) {
  std::string out;
  for (const Token& tok : st) {
    if (!out.empty()) out += " ";
    out += tok.first;
  }
  return out;
}

}  // namespace

QuotientResult explore_quotient(const PetriGame& g, int memory,
                                const std::map<Id, Id>* alias, const Rule* rule,
                                std::size_t state_cap) {
  Engine eng(g, memory, alias, rule);
  QuotientResult res;
  // Without a rule we are gathering decision keys; verdicts are meaningless
  // then and exploration must not stop early, or keys would be missed.
  const bool discovery = rule == nullptr;

  struct Frame {
    State st;
    std::vector<State> succ;
    std::size_t next = 0;
  };

  std::map<State, char> color;  // 1 = on stack, 2 = done
  std::vector<Frame> stack;

  bool failed = false;
  auto fail = [&](const std::string& why) {
    res.report.verdict = Verdict::not_winning;
    res.report.detail = why;
    failed = true;
  };

  State init = eng.initial_state();
  color[init] = 1;
  stack.push_back({init, {}, 0});
  bool opened = false;

  while (!stack.empty() && !(failed && !discovery)) {
    Frame& f = stack.back();
    if (!f.next && !opened) {
      // first visit of this state
      if (g.objective == Objective::safety && !failed) {
        for (const Token& tok : f.st)
          if (g.special.count(tok.first)) {
            fail("bad place " + tok.first + " reached at {" + describe(f.st) + "}");
            break;
          }
      }
      f.succ = eng.successors(f.st);
      if (f.succ.empty() && !failed) {
        Marking m = eng.marking_of(f.st);
        if (g.objective == Objective::safety) {
          if (!is_final(eng.ix, m))
            fail("deadlock: strategy is stuck at {" + describe(f.st) +
                 "} where the game can still move");
        } else {
          for (const Token& tok : f.st)
            if (!g.special.count(tok.first)) {
              fail("final state {" + describe(f.st) + "} has non-winning place " +
                   tok.first);
              break;
            }
        }
      }
    }
    if (failed && !discovery) break;
    opened = false;
    if (f.next < f.succ.size()) {
      State next = f.succ[f.next++];
      auto it = color.find(next);
      if (it == color.end()) {
        if (color.size() >= state_cap) {
          res.report.verdict = Verdict::inconclusive;
          res.report.detail = "state cap exceeded";
          res.complete = false;
          res.keys = std::move(eng.keys);
          return res;
        }
        color[next] = 1;
        stack.push_back({std::move(next), {}, 0});
      } else if (it->second == 1) {
        if (g.objective == Objective::reachability && !failed)
          fail("pumpable loop through {" + describe(next) + "}: an infinite play exists");
        opened = true;  // revisit of an ancestor; nothing more to explore here
      } else {
        opened = true;  // already fully explored
      }
    } else {
      color[f.st] = 2;
      stack.pop_back();
      opened = true;
    }
  }

  if (!failed) res.report.verdict = discovery ? Verdict::inconclusive : Verdict::winning;
  res.keys = std::move(eng.keys);
  return res;
}

}  // namespace gb::detail
