#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace thinlab {

/// Disjoint sets with union by size and path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
  }

  std::size_t set_size(std::uint32_t x) { return size_[find(x)]; }
  std::size_t set_count() const { return sets_; }

  /// Sizes of all sets, ordered by their smallest member.
  std::vector<std::size_t> sizes() {
    std::vector<std::size_t> out;
    std::vector<char> seen(parent_.size(), 0);
    for (std::uint32_t x = 0; x < parent_.size(); ++x) {
      const auto r = find(x);
      if (!seen[r]) {
        seen[r] = 1;
        out.push_back(size_[r]);
      }
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

}  // namespace thinlab
