#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "xlex/error.hpp"
#include "xlex/rng.hpp"

namespace xlex {

/// Bijection on {0..N-1}; map[i] is the new index of item i.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.map_.resize(n);
    std::iota(p.map_.begin(), p.map_.end(), std::size_t{0});
    return p;
  }

  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (auto v : map_) {
      if (v >= map_.size() || seen[v])
        throw DomainError("not a permutation: index " + std::to_string(v) + " repeated or out of range");
      seen[v] = true;
    }
  }

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> map() const noexcept { return map_; }

  void swap_images(std::size_t a, std::size_t b) { std::swap(map_[a], map_[b]); }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

/// Number of items moved: |{i : p[i] != i}|. Never 1.
inline std::size_t displacement_count(const Permutation& p) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) c += p[i] != i;
  return c;
}

inline Permutation invert(const Permutation& p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return Permutation(std::move(inv));
}

/// Applies p first, then q: result[i] = q[p[i]].
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size())
    throw DomainError("permutation dimension mismatch: " + std::to_string(p.size()) + " vs " +
                      std::to_string(q.size()));
  std::vector<std::size_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = q[p[i]];
  return Permutation(std::move(out));
}

inline void check_displacement(std::size_t n, std::size_t c) {
  if (c == 1)
    throw DomainError("displacement c = 1 is not possible: a single word cannot be moved on its own");
  if (c > n)
    throw DomainError("displacement c = " + std::to_string(c) + " exceeds dimension " + std::to_string(n));
}

/// Uniform draw among permutations of N items with exactly c non-fixed
/// points: a uniform c-subset of positions, then a uniform derangement of it
/// (rejection sampling, acceptance about 1/e).
inline Permutation sample_displaced_permutation(std::size_t n, std::size_t c, Rng& rng) {
  check_displacement(n, c);
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  // Partial Fisher-Yates: the first c entries are a uniform c-subset.
  for (std::size_t k = 0; k < c; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(positions[k], positions[j]);
  }

  std::vector<std::size_t> order(c);
  bool deranged = false;
  while (!deranged) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    deranged = true;
    for (std::size_t k = 0; k < c; ++k)
      if (order[k] == k) {
        deranged = false;
        break;
      }
  }

  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  for (std::size_t k = 0; k < c; ++k) map[positions[k]] = positions[order[k]];
  return Permutation(std::move(map));
}

/// Uniform random permutation of N items.
inline Permutation sample_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(map));
  return Permutation(std::move(map));
}

}  // namespace xlex
