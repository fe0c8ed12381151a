#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xlex/assoc.hpp"
#include "xlex/error.hpp"
#include "xlex/matrix.hpp"
#include "xlex/parallel.hpp"
#include "xlex/permutation.hpp"
#include "xlex/rng.hpp"
#include "xlex/similarity.hpp"

namespace xlex {

/// Known correspondences (source index, target index) held fixed in search.
struct AnchorSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  void validate(std::size_t n) const {
    std::vector<bool> src(n, false), dst(n, false);
    for (const auto& [s, t] : pairs) {
      if (s >= n || t >= n)
        throw DomainError("anchor (" + std::to_string(s) + ", " + std::to_string(t) + ") out of range");
      if (src[s]) throw DomainError("source index " + std::to_string(s) + " anchored twice");
      if (dst[t]) throw DomainError("target index " + std::to_string(t) + " anchored twice");
      src[s] = dst[t] = true;
    }
  }

  std::vector<bool> anchored_sources(std::size_t n) const {
    std::vector<bool> out(n, false);
    for (const auto& [s, t] : pairs) out[s] = true;
    return out;
  }

  bool respected_by(const Permutation& p) const {
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& a) { return p[a.first] == a.second; });
  }
};

/// A permutation where no transposition of non-anchored positions lowers s.
struct LocalMinimum {
  Permutation permutation;  // source word i -> target word permutation[i]
  double s_value = 0.0;
  std::size_t restarts_reached = 1;
  bool converged = true;
  std::size_t iterations = 0;
};

struct SearchConfig {
  std::size_t max_iters = 100000;
  // Recompute s from scratch after every step and compare with the
  // incremental value (absolute tolerance 1e-9). Slow; for testing.
  bool check_incremental = false;
  // Optional simulated-annealing phase before the descent. Off at 0.
  std::size_t anneal_steps = 0;
  double anneal_final_fraction = 1e-3;
};

struct MatchConfig {
  std::size_t restarts = 50;
  std::uint64_t seed = 19950626;
  unsigned threads = 1;
  SearchConfig search;
};

struct MatchResult {
  LocalMinimum best;
  std::vector<LocalMinimum> pool;  // distinct minima sorted by (s_value, permutation)
  std::vector<double> reliability;
  std::vector<bool> anchored;
  std::size_t searches = 0;   // local searches run (restarts plus the identity start)
  std::size_t converged = 0;  // of those, how many reached a 2-swap minimum
};

/// s between E with rows/columns moved by p and G:
/// sum_ij |E(i,j) - G(p[i], p[j])|.
inline double matching_cost(const SquareMatrix<double>& e, const SquareMatrix<double>& g, const Permutation& p) {
  detail::require_same_size(e.size(), g.size(), "matching");
  detail::require_same_size(e.size(), p.size(), "permutation");
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto erow = e.row(i);
    const auto grow = g.row(p[i]);
    for (std::size_t j = 0; j < e.size(); ++j) s += std::abs(erow[j] - grow[p[j]]);
  }
  return s;
}

namespace detail {

inline void require_matchable(const AssocMatrix& e, const AssocMatrix& g) {
  if (e.size() != g.size())
    throw DomainError("matrices of different sizes cannot be matched: " + std::to_string(e.size()) + " vs " +
                      std::to_string(g.size()));
}

inline double improvement_tolerance(const SquareMatrix<double>& e, const SquareMatrix<double>& g) {
  double mass = 0.0;
  for (double v : e.values()) mass += std::abs(v);
  for (double v : g.values()) mass += std::abs(v);
  return 1e-12 * std::max(1.0, mass);
}

// Change in matching_cost when the images of sources a and b are exchanged.
inline double swap_delta(const SquareMatrix<double>& e, const SquareMatrix<double>& g, const Permutation& p,
                         std::size_t a, std::size_t b) {
  const std::size_t x = p[a], y = p[b];
  const std::size_t n = e.size();
  double d = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == a || k == b) continue;
    const std::size_t pk = p[k];
    const double gxk = g(x, pk), gyk = g(y, pk), gkx = g(pk, x), gky = g(pk, y);
    d += std::abs(e(a, k) - gyk) - std::abs(e(a, k) - gxk);
    d += std::abs(e(b, k) - gxk) - std::abs(e(b, k) - gyk);
    d += std::abs(e(k, a) - gky) - std::abs(e(k, a) - gkx);
    d += std::abs(e(k, b) - gkx) - std::abs(e(k, b) - gky);
  }
  d += std::abs(e(a, a) - g(y, y)) - std::abs(e(a, a) - g(x, x));
  d += std::abs(e(b, b) - g(x, x)) - std::abs(e(b, b) - g(y, y));
  d += std::abs(e(a, b) - g(y, x)) - std::abs(e(a, b) - g(x, y));
  d += std::abs(e(b, a) - g(x, y)) - std::abs(e(b, a) - g(y, x));
  return d;
}

inline std::vector<std::size_t> free_positions(const AnchorSet& anchors, std::size_t n) {
  const auto fixed = anchors.anchored_sources(n);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed[i]) out.push_back(i);
  return out;
}

inline void anneal(const SquareMatrix<double>& e, const SquareMatrix<double>& g,
                   const std::vector<std::size_t>& free, const SearchConfig& config, Permutation& p, Rng& rng) {
  if (free.size() < 2 || config.anneal_steps == 0) return;
  const auto draw_pair = [&] {
    const std::size_t i = static_cast<std::size_t>(rng.below(free.size()));
    std::size_t j = static_cast<std::size_t>(rng.below(free.size() - 1));
    if (j >= i) ++j;
    return std::pair{free[i], free[j]};
  };
  // Initial temperature: mean |delta| over a handful of random swaps.
  double t0 = 0.0;
  constexpr int kProbe = 32;
  for (int k = 0; k < kProbe; ++k) {
    auto [a, b] = draw_pair();
    t0 += std::abs(swap_delta(e, g, p, a, b));
  }
  t0 = std::max(t0 / kProbe, 1e-12);
  const double cooling = std::pow(config.anneal_final_fraction, 1.0 / static_cast<double>(config.anneal_steps));

  double current = matching_cost(e, g, p);
  double best_cost = current;
  Permutation best = p;
  double t = t0;
  for (std::size_t step = 0; step < config.anneal_steps; ++step, t *= cooling) {
    auto [a, b] = draw_pair();
    const double d = swap_delta(e, g, p, a, b);
    if (d < 0.0 || rng.uniform01() < std::exp(-d / t)) {
      p.swap_images(a, b);
      current += d;
      if (current < best_cost) {
        best_cost = current;
        best = p;
      }
    }
  }
  p = std::move(best);
}

}  // namespace detail

/// Steepest descent over transpositions of non-anchored positions. Each step
/// applies the swap with the largest decrease in s (ties: lowest (i, j)) and
/// stops at a 2-swap minimum or after max_iters steps (converged = false).
inline LocalMinimum local_search(const AssocMatrix& e, const AssocMatrix& g, const AnchorSet& anchors,
                                 Permutation start, const SearchConfig& config = {}, Rng* rng = nullptr) {
  detail::require_matchable(e, g);
  detail::require_same_size(e.size(), start.size(), "start permutation");
  anchors.validate(e.size());
  if (!anchors.respected_by(start)) throw DomainError("start permutation violates an anchor");

  const auto& ev = e.values;
  const auto& gv = g.values;
  const auto free = detail::free_positions(anchors, e.size());
  const double tol = detail::improvement_tolerance(ev, gv);

  Permutation p = std::move(start);
  if (config.anneal_steps > 0) {
    if (!rng) throw std::invalid_argument("annealing requires a random source");
    detail::anneal(ev, gv, free, config, p, *rng);
  }

  double s = matching_cost(ev, gv, p);
  LocalMinimum out;
  out.converged = false;
  std::size_t iters = 0;
  for (;;) {
    double best_delta = -tol;
    std::size_t best_a = 0, best_b = 0;
    bool found = false;
    for (std::size_t u = 0; u < free.size(); ++u)
      for (std::size_t v = u + 1; v < free.size(); ++v) {
        const double d = detail::swap_delta(ev, gv, p, free[u], free[v]);
        if (d < best_delta) {
          best_delta = d;
          best_a = free[u];
          best_b = free[v];
          found = true;
        }
      }
    if (!found) {
      out.converged = true;
      break;
    }
    if (iters == config.max_iters) break;
    p.swap_images(best_a, best_b);
    s += best_delta;
    ++iters;
    if (config.check_incremental) {
      const double full = matching_cost(ev, gv, p);
      if (std::abs(full - s) > 1e-9)
        throw std::logic_error("incremental delta drifted from full recomputation: " + std::to_string(s) +
                               " vs " + std::to_string(full));
    }
  }
  out.s_value = matching_cost(ev, gv, p);
  out.permutation = std::move(p);
  out.iterations = iters;
  return out;
}

/// Re-checks 2-swap optimality by full recomputation of s for every swap.
inline bool is_two_swap_optimal(const AssocMatrix& e, const AssocMatrix& g, const AnchorSet& anchors,
                                const Permutation& p) {
  const auto free = detail::free_positions(anchors, e.size());
  const double tol = detail::improvement_tolerance(e.values, g.values);
  const double base = matching_cost(e.values, g.values, p);
  Permutation q = p;
  for (std::size_t u = 0; u < free.size(); ++u)
    for (std::size_t v = u + 1; v < free.size(); ++v) {
      q.swap_images(free[u], free[v]);
      const double s = matching_cost(e.values, g.values, q);
      q.swap_images(free[u], free[v]);
      if (s < base - tol) return false;
    }
  return true;
}

/// Anchored sources map to their targets; every other source keeps its own
/// index when that target is free, leftovers fill the remaining targets in order.
inline Permutation anchored_identity(const AnchorSet& anchors, std::size_t n) {
  anchors.validate(n);
  std::vector<std::size_t> map(n, n);
  std::vector<bool> target_used(n, false);
  for (const auto& [s, t] : anchors.pairs) {
    map[s] = t;
    target_used[t] = true;
  }
  const auto fixed = anchors.anchored_sources(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed[i] && !target_used[i]) {
      map[i] = i;
      target_used[i] = true;
    }
  std::size_t next_target = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (map[i] != n) continue;
    while (target_used[next_target]) ++next_target;
    map[i] = next_target;
    target_used[next_target] = true;
  }
  return Permutation(std::move(map));
}

/// Uniform random permutation among those respecting the anchors.
inline Permutation random_anchored_start(const AnchorSet& anchors, std::size_t n, Rng& rng) {
  Permutation base = anchored_identity(anchors, n);
  const auto free = detail::free_positions(anchors, n);
  std::vector<std::size_t> targets;
  targets.reserve(free.size());
  for (auto i : free) targets.push_back(base[i]);
  rng.shuffle(std::span<std::size_t>(targets));
  std::vector<std::size_t> map(base.map().begin(), base.map().end());
  for (std::size_t k = 0; k < free.size(); ++k) map[free[k]] = targets[k];
  return Permutation(std::move(map));
}

/// Local searches from the identity start and `restarts` random starts. The
/// distinct minima form the pool; reliability[i] is the fraction of pool
/// minima that agree with the best one on the image of word i.
inline MatchResult match(const AssocMatrix& e, const AssocMatrix& g, const AnchorSet& anchors,
                         const MatchConfig& config = {}) {
  detail::require_matchable(e, g);
  anchors.validate(e.size());
  if (config.restarts < 1) throw DomainError("at least one restart is required");
  const std::size_t n = e.size();
  const std::size_t searches = config.restarts + 1;

  std::vector<LocalMinimum> found(searches);
  parallel_for(searches, config.threads, [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, {0x5EA4C4, r}));
    Permutation start = r == 0 ? anchored_identity(anchors, n) : random_anchored_start(anchors, n, rng);
    found[r] = local_search(e, g, anchors, std::move(start), config.search, &rng);
  });

  MatchResult result;
  result.searches = searches;
  for (const auto& m : found) result.converged += m.converged;

  std::sort(found.begin(), found.end(), [](const LocalMinimum& a, const LocalMinimum& b) {
    if (a.s_value != b.s_value) return a.s_value < b.s_value;
    return a.permutation < b.permutation;
  });
  for (auto& m : found) {
    if (!result.pool.empty() && result.pool.back().permutation == m.permutation) {
      auto& kept = result.pool.back();
      kept.restarts_reached += 1;
      kept.converged = kept.converged || m.converged;
      continue;
    }
    m.restarts_reached = 1;
    result.pool.push_back(std::move(m));
  }
  result.best = result.pool.front();

  result.anchored = anchors.anchored_sources(n);
  result.reliability.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t agree = 0;
    for (const auto& m : result.pool) agree += m.permutation[i] == result.best.permutation[i];
    result.reliability[i] = static_cast<double>(agree) / static_cast<double>(result.pool.size());
  }
  return result;
}

struct BruteForceResult {
  double min_s = std::numeric_limits<double>::infinity();
  std::vector<Permutation> argmin;  // lexicographic order
};

inline constexpr std::size_t kBruteForceMaxFree = 8;

/// Exhaustive search over anchor-respecting permutations; a test oracle for
/// local_search. At most kBruteForceMaxFree non-anchored positions.
inline BruteForceResult brute_force_match(const AssocMatrix& e, const AssocMatrix& g, const AnchorSet& anchors,
                                          double tolerance = 1e-9) {
  detail::require_matchable(e, g);
  anchors.validate(e.size());
  const std::size_t n = e.size();
  const auto free = detail::free_positions(anchors, n);
  if (free.size() > kBruteForceMaxFree)
    throw DomainError("brute force limited to " + std::to_string(kBruteForceMaxFree) + " free positions, got " +
                      std::to_string(free.size()));

  const Permutation base = anchored_identity(anchors, n);
  std::vector<std::size_t> targets;
  for (auto i : free) targets.push_back(base[i]);
  std::sort(targets.begin(), targets.end());

  std::vector<std::pair<double, Permutation>> all;
  std::vector<std::size_t> map(base.map().begin(), base.map().end());
  do {
    for (std::size_t k = 0; k < free.size(); ++k) map[free[k]] = targets[k];
    Permutation p(map);
    all.emplace_back(matching_cost(e.values, g.values, p), std::move(p));
  } while (std::next_permutation(targets.begin(), targets.end()));

  BruteForceResult out;
  for (const auto& [s, p] : all) out.min_s = std::min(out.min_s, s);
  for (auto& [s, p] : all)
    if (s <= out.min_s + tolerance) out.argmin.push_back(std::move(p));
  std::sort(out.argmin.begin(), out.argmin.end());
  return out;
}

}  // namespace xlex
