#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>

namespace demon {

/// Finite partial function with pointwise merge.
template <class K, class V>
class Dict {
 public:
  using map_type = std::map<K, V>;
  using const_iterator = typename map_type::const_iterator;

  Dict() = default;
  explicit Dict(map_type m) : m_(std::move(m)) {}

  std::optional<V> query(const K& k) const {
    auto it = m_.find(k);
    if (it == m_.end()) return std::nullopt;
    return it->second;
  }
  const V* find(const K& k) const {
    auto it = m_.find(k);
    return it == m_.end() ? nullptr : &it->second;
  }
  bool contains(const K& k) const { return m_.count(k) != 0; }

  void set(const K& k, V v) { m_.insert_or_assign(k, std::move(v)); }
  bool erase(const K& k) { return m_.erase(k) != 0; }
  template <class Pred>
  std::size_t erase_if(Pred pred) {
    return std::erase_if(m_, [&](const auto& kv) { return pred(kv.first, kv.second); });
  }

  std::set<K> keys() const {
    std::set<K> out;
    for (const auto& kv : m_) out.insert(kv.first);
    return out;
  }

  bool empty() const { return m_.empty(); }
  std::size_t size() const { return m_.size(); }
  const_iterator begin() const { return m_.begin(); }
  const_iterator end() const { return m_.end(); }
  const map_type& map() const { return m_; }

  /// Union where keys present on both sides are combined with `f`.
  template <class Combine>
  static Dict merge(const Dict& a, const Dict& b, Combine f) {
    Dict out = a;
    for (const auto& [k, v] : b.m_) {
      auto it = out.m_.find(k);
      if (it == out.m_.end())
        out.m_.emplace(k, v);
      else
        it->second = f(it->second, v);
    }
    return out;
  }

  bool operator==(const Dict&) const = default;

 private:
  map_type m_;
};

}  // namespace demon
