#include "gamebridge/traces.hpp"

#include <algorithm>

namespace gb {

const std::set<Id>& DistributedAlphabet::domain_of(const Id& a) const {
  auto it = dom.find(a);
  if (it == dom.end()) throw UnknownAction(a);
  return it->second;
}

bool DistributedAlphabet::dependent(const Id& a, const Id& b) const {
  const auto& da = domain_of(a);
  const auto& db = domain_of(b);
  for (const auto& p : da)
    if (db.count(p)) return true;
  return false;
}

std::set<Id> DistributedAlphabet::processes() const {
  std::set<Id> ps;
  for (const auto& [a, d] : dom) ps.insert(d.begin(), d.end());
  return ps;
}

std::set<Id> DistributedAlphabet::actions_of(const Id& p) const {
  std::set<Id> as;
  for (const auto& [a, d] : dom)
    if (d.count(p)) as.insert(a);
  return as;
}

namespace {

// Greedy construction of the lexicographically least linearization: among the
// occurrences whose dependence predecessors are all emitted, always emit the
// least action. Occurrences of one action are mutually dependent, so ties
// cannot arise between equal labels.
std::vector<Id> least_linearization(const DistributedAlphabet& alphabet,
                                    const std::vector<Id>& word) {
  const std::size_t n = word.size();
  std::vector<std::vector<int>> succs(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (alphabet.dependent(word[i], word[j])) {
        succs[i].push_back(static_cast<int>(j));
        ++indeg[j];
      }
  // (label, original index), ordered; emit smallest available each round.
  std::set<std::pair<Id, int>> avail;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) avail.insert({word[i], static_cast<int>(i)});
  std::vector<Id> out;
  out.reserve(n);
  while (!avail.empty()) {
    auto [label, i] = *avail.begin();
    avail.erase(avail.begin());
    out.push_back(label);
    for (int j : succs[i])
      if (--indeg[j] == 0) avail.insert({word[j], j});
  }
  return out;
}

}  // namespace

Trace normalize(const DistributedAlphabet& alphabet, const std::vector<Id>& word) {
  for (const auto& a : word)
    if (!alphabet.contains(a)) throw UnknownAction(a);
  Trace t;
  t.alphabet = alphabet;
  t.normal_form = least_linearization(alphabet, word);
  return t;
}

Trace local_view(const Trace& trace, const Id& p) {
  const auto& w = trace.normal_form;
  // Backward scan: an occurrence stays when it can causally influence a later
  // p-occurrence, witnessed by a growing set of relevant processes.
  std::set<Id> relevant{p};
  std::vector<char> keep(w.size(), 0);
  for (std::size_t i = w.size(); i-- > 0;) {
    const auto& d = trace.alphabet.domain_of(w[i]);
    bool hit = std::any_of(d.begin(), d.end(),
                           [&](const Id& q) { return relevant.count(q) != 0; });
    if (hit) {
      keep[i] = 1;
      relevant.insert(d.begin(), d.end());
    }
  }
  std::vector<Id> kept;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (keep[i]) kept.push_back(w[i]);
  return normalize(trace.alphabet, kept);
}

LabelledPoset poset_of(const Trace& trace) {
  const auto& w = trace.normal_form;
  const std::size_t n = w.size();
  LabelledPoset ps;
  ps.labels = w;
  ps.occurrence.resize(n);
  std::map<Id, int> seen;
  for (std::size_t i = 0; i < n; ++i) ps.occurrence[i] = seen[w[i]]++;
  // Reachability over dependence edges gives the partial order.
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = 1;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i-- > 0;)
      if (trace.alphabet.dependent(w[i], w[j]))
        for (std::size_t k = 0; k <= i; ++k)
          if (le[k][i]) le[k][j] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (le[i][j]) ps.leq.insert({static_cast<int>(i), static_cast<int>(j)});
  return ps;
}

std::vector<int> LabelledPoset::canonical_linearization() const {
  const int n = static_cast<int>(labels.size());
  std::vector<int> indeg(n, 0);
  for (const auto& [x, y] : leq)
    if (x != y) ++indeg[y];
  // `leq` is transitively closed, so indegrees count all strict predecessors;
  // an element is available once that count reaches zero.
  std::set<std::pair<Id, int>> avail;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) avail.insert({labels[i], i});
  std::vector<int> out;
  out.reserve(n);
  std::vector<char> emitted(n, 0);
  while (!avail.empty()) {
    auto [label, i] = *avail.begin();
    avail.erase(avail.begin());
    emitted[i] = 1;
    out.push_back(i);
    for (const auto& [x, y] : leq)
      if (x == i && y != i && !emitted[y] && --indeg[y] == 0)
        avail.insert({labels[y], y});
  }
  return out;
}

bool isomorphic(const LabelledPoset& a, const LabelledPoset& b) {
  if (a.size() != b.size()) return false;
  auto la = a.canonical_linearization();
  auto lb = b.canonical_linearization();
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i)
    if (a.labels[la[i]] != b.labels[lb[i]]) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a.le(la[i], la[j]) != b.le(lb[i], lb[j])) return false;
  return true;
}

bool trace_prefix(const Trace& u, const Trace& w) {
  // The only candidate embedding maps the k-th occurrence of each action in u
  // to the k-th occurrence in w; check it is downward closed and induces u.
  std::map<Id, int> want;
  for (const auto& a : u.normal_form) ++want[a];
  const auto& wv = w.normal_form;
  std::map<Id, int> have;
  for (const auto& a : wv) ++have[a];
  for (const auto& [a, k] : want)
    if (have[a] < k) return false;
  std::vector<char> kept(wv.size(), 0);
  std::map<Id, int> taken;
  for (std::size_t i = 0; i < wv.size(); ++i) {
    auto it = want.find(wv[i]);
    if (it != want.end() && taken[wv[i]] < it->second) {
      kept[i] = 1;
      ++taken[wv[i]];
    }
  }
  // Downward closure w.r.t. dependence in w.
  for (std::size_t j = 0; j < wv.size(); ++j)
    if (kept[j])
      for (std::size_t i = 0; i < j; ++i)
        if (!kept[i] && w.alphabet.dependent(wv[i], wv[j])) return false;
  std::vector<Id> sub;
  for (std::size_t i = 0; i < wv.size(); ++i)
    if (kept[i]) sub.push_back(wv[i]);
  return normalize(w.alphabet, sub).normal_form == u.normal_form;
}

}  // namespace gb
