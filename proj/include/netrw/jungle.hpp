#pragma once

#include <map>
#include <string>
#include <vector>

#include "netrw/canon.hpp"
#include "netrw/net.hpp"

namespace netrw {

/// A finite set of nets stored by strict canonical form. Members are kept as
/// canonical representatives; iteration order is the lexicographic order of
/// the canonical byte strings, so every set-valued result is deterministic.
class Jungle {
 public:
  Jungle() = default;
  explicit Jungle(const std::vector<Net>& nets) {
    for (const Net& n : nets) insert(n);
  }

  bool insert(const Net& n) {
    std::string key = canonical_form(n);
    auto [it, fresh] = members_.emplace(std::move(key), Net{});
    if (fresh) it->second = canonical_member(n);
    return fresh;
  }

  void merge(const Jungle& other) {
    for (const auto& [k, n] : other.members_) members_.emplace(k, n);
  }

  bool contains(const Net& n) const { return members_.count(canonical_form(n)) > 0; }
  bool contains_key(const std::string& canonical) const { return members_.count(canonical) > 0; }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  std::vector<Net> members() const {
    std::vector<Net> out;
    out.reserve(members_.size());
    for (const auto& [_, n] : members_) out.push_back(n);
    return out;
  }
  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    out.reserve(members_.size());
    for (const auto& [k, _] : members_) out.push_back(k);
    return out;
  }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool operator==(const Jungle& o) const { return keys() == o.keys(); }

  bool subset_of(const Jungle& o) const {
    for (const auto& [k, _] : members_)
      if (!o.members_.count(k)) return false;
    return true;
  }

  /// First canonical key present in exactly one of the two jungles, if any.
  static std::optional<std::string> first_difference(const Jungle& a, const Jungle& b) {
    for (const auto& [k, _] : a.members_)
      if (!b.members_.count(k)) return k;
    for (const auto& [k, _] : b.members_)
      if (!a.members_.count(k)) return k;
    return std::nullopt;
  }

 private:
  std::map<std::string, Net> members_;
};

}  // namespace netrw
