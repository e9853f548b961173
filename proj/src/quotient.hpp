// Internal engine shared by winning checks and the brute-force solvers.
//
// Tokens are tracked together with a bounded abstraction of their causal
// past: a vector of hashes where level 0 identifies the place and level j
// folds the transition fired and the level j-1 hashes of the tokens it
// consumed. Two tokens with equal level-k hashes have the same causal past
// up to depth k, so decisions keyed on (place, level-k hash) are exactly the
// strategies whose choices depend on a truncated causal past. On that
// quotient, cycles are meaningful: a repeated quotient state can be pumped,
// because the driving decisions cannot tell the repetitions apart.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gamebridge/games.hpp"

namespace gb::detail {

std::uint64_t fnv64(const std::string& s);
std::string hex12(std::uint64_t h);

// Causal-past hash levels, shared between the quotient engine and strategy
// materialization so that decision keys match exactly. `seed_level` is level
// 0 of any token on `place`; `init_level` is every deeper level of an initial
// token; `step_level` folds the fired transition with the level j-1 hashes of
// the consumed tokens (order-insensitive) into level j of a produced token.
std::uint64_t seed_level(const Id& place);
std::uint64_t init_level(const Id& place);
std::uint64_t step_level(const Id& place, const Id& transition,
                         std::vector<std::uint64_t> consumed_prev);

using RuleKey = std::pair<Id, std::uint64_t>;
using Rule = std::map<RuleKey, std::set<Id>>;

struct QuotientResult {
  WinReport report;
  std::set<RuleKey> keys;  // system-token decision keys encountered
  bool complete = true;    // false when the state cap truncated exploration
};

// Explores the reachable quotient states of `g` under a decision rule.
// `rule == nullptr` means every transition is allowed (discovery mode); a
// missing key in a non-null rule refuses everything. When `alias` is given,
// places and transitions are renamed through it before hashing and decision
// lookup, so equally-aliased copies are indistinguishable to the rule.
// Verdicts: safety loses on a bad place or on a stuck state the underlying
// net could leave, and wins otherwise (loops included); reachability loses
// on any cycle (it can be pumped into an infinite play) or non-winning final
// state, and wins when the acyclic exploration completes.
QuotientResult explore_quotient(const PetriGame& g, int memory,
                                const std::map<Id, Id>* alias, const Rule* rule,
                                std::size_t state_cap);

}  // namespace gb::detail
