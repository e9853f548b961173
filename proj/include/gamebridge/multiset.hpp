#pragma once

#include <map>
#include <stdexcept>
#include <vector>

namespace gb {

// Multiset over an ordered element type. Counts are strictly positive;
// removing more than present throws instead of clamping, so arithmetic
// mistakes surface at the call site.
template <class T>
class Multiset {
 public:
  using map_type = std::map<T, long long>;

  Multiset() = default;
  Multiset(std::initializer_list<T> xs) {
    for (const auto& x : xs) add(x);
  }

  void add(const T& x, long long k = 1) {
    if (k < 0) throw std::invalid_argument("Multiset::add: negative count");
    if (k == 0) return;
    m_[x] += k;
  }

  void remove(const T& x, long long k = 1) {
    if (k < 0) throw std::invalid_argument("Multiset::remove: negative count");
    auto it = m_.find(x);
    if (it == m_.end() || it->second < k)
      throw std::out_of_range("Multiset::remove: element not present often enough");
    it->second -= k;
    if (it->second == 0) m_.erase(it);
  }

  long long count(const T& x) const {
    auto it = m_.find(x);
    return it == m_.end() ? 0 : it->second;
  }

  bool contains(const T& x) const { return m_.count(x) != 0; }

  // Total number of elements, with multiplicity.
  long long size() const {
    long long n = 0;
    for (const auto& [x, k] : m_) n += k;
    return n;
  }

  bool empty() const { return m_.empty(); }

  // Subset with multiplicities.
  bool leq(const Multiset& other) const {
    for (const auto& [x, k] : m_)
      if (other.count(x) < k) return false;
    return true;
  }

  Multiset operator+(const Multiset& other) const {
    Multiset r = *this;
    for (const auto& [x, k] : other.m_) r.m_[x] += k;
    return r;
  }

  Multiset operator-(const Multiset& other) const {
    Multiset r = *this;
    for (const auto& [x, k] : other.m_) r.remove(x, k);
    return r;
  }

  bool operator==(const Multiset& other) const { return m_ == other.m_; }
  bool operator!=(const Multiset& other) const { return m_ != other.m_; }
  bool operator<(const Multiset& other) const { return m_ < other.m_; }

  const map_type& entries() const { return m_; }

  std::vector<T> support() const {
    std::vector<T> s;
    s.reserve(m_.size());
    for (const auto& [x, k] : m_) s.push_back(x);
    return s;
  }

  // Expansion with repeats, in element order.
  std::vector<T> expand() const {
    std::vector<T> s;
    for (const auto& [x, k] : m_)
      for (long long i = 0; i < k; ++i) s.push_back(x);
    return s;
  }

  auto begin() const { return m_.begin(); }
  auto end() const { return m_.end(); }

 private:
  map_type m_;
};

template <class T>
Multiset<T> multiset_of(const std::vector<T>& xs) {
  Multiset<T> m;
  for (const auto& x : xs) m.add(x);
  return m;
}

}  // namespace gb
