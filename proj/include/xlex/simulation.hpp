#pragma once

#include <algorithm>
#include <charconv>
#include <string_view>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xlex/assoc.hpp"
#include "xlex/corpus.hpp"
#include "xlex/error.hpp"
#include "xlex/parallel.hpp"
#include "xlex/permutation.hpp"
#include "xlex/rng.hpp"
#include "xlex/similarity.hpp"

namespace xlex {

inline constexpr std::uint64_t kDefaultSeed = 19950626;
inline constexpr std::size_t kDefaultSamplesPerC = 1000;

struct CurvePoint {
  std::size_t c = 0;
  double mean_s = 0.0;
  double min_s = 0.0;
  double max_s = 0.0;
  std::size_t n_samples = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Mean/min/max similarity as a function of the number of displaced words.
struct SimulationCurve {
  std::optional<AssocMeasure> measure;
  std::size_t dimension = 0;
  std::vector<CurvePoint> points;  // strictly increasing c, never c = 1
  std::uint64_t seed = kDefaultSeed;

  friend bool operator==(const SimulationCurve&, const SimulationCurve&) = default;
};

struct SimulationConfig {
  std::vector<std::size_t> c_values;  // empty: default_c_grid(N)
  std::size_t samples_per_c = kDefaultSamplesPerC;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

/// {0, 2, 5, 10, ..., N}: multiples of 5 up to N, with N itself always included.
inline std::vector<std::size_t> default_c_grid(std::size_t n) {
  std::vector<std::size_t> grid{0};
  if (n >= 2) grid.push_back(2);
  for (std::size_t c = 5; c <= n; c += 5) grid.push_back(c);
  if (n > 2 && grid.back() != n) grid.push_back(n);
  return grid;
}

/// Parses a displacement grid such as "0,2,5:100:5" (lo:hi:step ranges are
/// inclusive). "default" or an empty string selects default_c_grid(n).
inline std::vector<std::size_t> parse_c_grid(std::string_view spec, std::size_t n) {
  if (spec.empty() || spec == "default") return default_c_grid(n);
  const auto number = [](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw DomainError("invalid c-grid entry '" + std::string(s) + "'");
    return v;
  };
  std::vector<std::size_t> grid;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view item = spec.substr(start, end - start);
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      grid.push_back(number(item));
    } else {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw DomainError("c-grid range must be lo:hi:step, got '" + std::string(item) + "'");
      const std::size_t lo = number(item.substr(0, c1));
      const std::size_t hi = number(item.substr(c1 + 1, c2 - c1 - 1));
      const std::size_t step = number(item.substr(c2 + 1));
      if (step == 0) throw DomainError("c-grid step must be positive");
      for (std::size_t c = lo; c <= hi; c += step) grid.push_back(c);
    }
    start = end + 1;
  }
  return grid;
}

/// Randomly displaces exactly c words of G for every c in the grid and
/// records s(E, permuted G). c = 0 is a single evaluation of the identity.
/// Each sample draws from its own stream keyed by (seed, c, sample), so the
/// curve is bit-identical for any thread count.
inline SimulationCurve run_simulation(const AssocMatrix& e, const AssocMatrix& g, const SimulationConfig& config) {
  detail::require_same_size(e.size(), g.size(), "simulation");
  const std::size_t n = e.size();
  if (config.samples_per_c == 0) throw DomainError("samples per c must be at least 1");

  std::vector<std::size_t> grid = config.c_values.empty() ? default_c_grid(n) : config.c_values;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (auto c : grid) check_displacement(n, c);

  struct Task {
    std::size_t point;
    std::size_t c;
    std::size_t sample;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> first_task(grid.size() + 1, 0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    first_task[k] = tasks.size();
    const std::size_t count = grid[k] == 0 ? 1 : config.samples_per_c;
    for (std::size_t s = 0; s < count; ++s) tasks.push_back({k, grid[k], s});
  }
  first_task[grid.size()] = tasks.size();

  std::vector<double> values(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t t) {
    const auto& task = tasks[t];
    Rng rng(derive_seed(config.seed, {task.c, task.sample}));
    const Permutation p = sample_displaced_permutation(n, task.c, rng);
    values[t] = similarity_permuted(e.values, g.values, p);
  });

  SimulationCurve curve{e.measure, n, {}, config.seed};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CurvePoint pt{grid[k], 0.0, std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), 0};
    double sum = 0.0;
    for (std::size_t t = first_task[k]; t < first_task[k + 1]; ++t) {
      sum += values[t];
      pt.min_s = std::min(pt.min_s, values[t]);
      pt.max_s = std::max(pt.max_s, values[t]);
      ++pt.n_samples;
    }
    pt.mean_s = sum / static_cast<double>(pt.n_samples);
    // The mean of identical values can round just outside [min, max].
    pt.mean_s = std::clamp(pt.mean_s, pt.min_s, pt.max_s);
    curve.points.push_back(pt);
  }
  return curve;
}

/// (mean_s at c = N - mean_s at the smallest c) / mean_s at the smallest c.
inline double discrimination_ratio(const SimulationCurve& curve) {
  if (curve.points.empty()) throw DomainError("discrimination ratio needs a non-empty curve");
  const auto& lo = curve.points.front();
  const auto& hi = curve.points.back();
  if (hi.c != curve.dimension)
    throw DomainError("discrimination ratio needs a point at c = N = " + std::to_string(curve.dimension));
  constexpr double eps = 1e-12;
  return (hi.mean_s - lo.mean_s) / std::max(lo.mean_s, eps);
}

// ---------------------------------------------------------------------------
// Synthetic comparable corpora
// ---------------------------------------------------------------------------

struct SyntheticPairConfig {
  std::size_t vocab_size = 100;
  std::size_t stream_length = 200000;
  std::size_t window = kDefaultWindow;
  double noise_rate = 0.2;
  std::uint64_t seed = kDefaultSeed;
  // Degenerate switches used for calibration: one shared concept stream,
  // and an identity lexicon for stream B.
  bool independent_streams = true;
  bool permute_lexicon = true;
  std::string prefix_a = "en";
  std::string prefix_b = "de";

  void validate() const {
    if (vocab_size < 2) throw DomainError("synthetic vocabulary needs at least 2 words");
    if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw DomainError("noise rate must lie in [0, 1]");
    if (prefix_a.empty() || prefix_b.empty()) throw DomainError("synthetic word prefixes must be non-empty");
  }
};

struct SyntheticPair {
  TokenSequence a;
  TokenSequence b;
  Vocabulary vocab_a;
  Vocabulary vocab_b;
  Permutation truth;  // word i of A translates to word truth[i] of B
};

/// Order-2 Markov chain over concepts. Each concept has a few associates;
/// the next concept is an associate of the previous one, an associate of
/// the one before, or a Zipf-weighted draw over all concepts.
class ConceptChain {
 public:
  static constexpr std::size_t kAssociates = 4;
  static constexpr double kFollowPrevious = 0.5;
  static constexpr double kFollowSecond = 0.25;

  ConceptChain(std::size_t n, std::uint64_t seed) : n_(n) {
    Rng rng(derive_seed(seed, {0xC0C0}));
    const std::size_t k = std::min(kAssociates, n - 1);
    associates_.resize(n);
    std::vector<std::size_t> others;
    for (std::size_t c = 0; c < n; ++c) {
      others.clear();
      for (std::size_t o = 0; o < n; ++o)
        if (o != c) others.push_back(o);
      for (std::size_t m = 0; m < k; ++m) {
        const std::size_t j = m + static_cast<std::size_t>(rng.below(others.size() - m));
        std::swap(others[m], others[j]);
        associates_[c].push_back(others[m]);
      }
    }
    Permutation rank = sample_permutation(n, rng);
    cumulative_.resize(n);
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      total += 1.0 / (static_cast<double>(rank[c]) + 1.0);
      cumulative_[c] = total;
    }
    for (double& w : cumulative_) w /= total;
  }

  std::size_t size() const noexcept { return n_; }

  std::vector<std::size_t> walk(std::size_t length, Rng& rng) const {
    std::vector<std::size_t> out;
    out.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
      const double u = rng.uniform01();
      std::size_t next;
      if (t >= 1 && u < kFollowPrevious) {
        next = pick(associates_[out[t - 1]], rng);
      } else if (t >= 2 && u < kFollowPrevious + kFollowSecond) {
        next = pick(associates_[out[t - 2]], rng);
      } else {
        const double v = rng.uniform01();
        next = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), v) -
                                        cumulative_.begin());
        next = std::min(next, n_ - 1);
      }
      out.push_back(next);
    }
    return out;
  }

 private:
  static std::size_t pick(const std::vector<std::size_t>& from, Rng& rng) {
    return from[static_cast<std::size_t>(rng.below(from.size()))];
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> associates_;
  std::vector<double> cumulative_;
};

inline std::string synthetic_word(const std::string& prefix, std::size_t index, std::size_t n) {
  std::string digits = std::to_string(index);
  const std::size_t width = std::to_string(n - 1).size();
  return prefix + std::string(width - digits.size(), '0') + digits;
}

/// Two token streams over the same concept chain with a hidden lexicon
/// permutation between them, each token replaced by a random word of its
/// language with probability noise_rate.
inline SyntheticPair generate_synthetic_pair(const SyntheticPairConfig& config) {
  config.validate();
  const std::size_t n = config.vocab_size;
  const ConceptChain chain(n, config.seed);

  Permutation truth = Permutation::identity(n);
  if (config.permute_lexicon) {
    Rng lex_rng(derive_seed(config.seed, {3}));
    truth = sample_permutation(n, lex_rng);
  }

  std::vector<std::string> words_a(n), words_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    words_a[i] = synthetic_word(config.prefix_a, i, n);
    words_b[i] = synthetic_word(config.prefix_b, i, n);
  }

  Rng walk_a(derive_seed(config.seed, {1}));
  Rng walk_b(derive_seed(config.seed, {2}));
  const auto concepts_a = chain.walk(config.stream_length, walk_a);
  const auto concepts_b = config.independent_streams ? chain.walk(config.stream_length, walk_b) : concepts_a;

  const auto emit = [&](const std::vector<std::size_t>& concepts, const std::vector<std::string>& words,
                        bool through_lexicon, std::uint64_t noise_key) {
    Rng noise(derive_seed(config.seed, {noise_key}));
    TokenSequence seq;
    seq.tokens.reserve(concepts.size());
    for (auto concept_id : concepts) {
      std::size_t w = through_lexicon ? truth[concept_id] : concept_id;
      if (config.noise_rate > 0.0 && noise.uniform01() < config.noise_rate)
        w = static_cast<std::size_t>(noise.below(n));
      seq.tokens.push_back(words[w]);
    }
    return seq;
  };

  SyntheticPair pair{emit(concepts_a, words_a, false, 4), emit(concepts_b, words_b, true, 5),
                     Vocabulary(std::move(words_a)), Vocabulary(std::move(words_b)), std::move(truth)};
  return pair;
}

/// Counting, measure and normalization in one step.
inline AssocMatrix association_matrix(const TokenSequence& tokens, const Vocabulary& vocab, std::size_t window,
                                      AssocMeasure measure, unsigned threads = 1) {
  return normalize(apply_measure(count_cooccurrences(tokens, vocab, window, threads), measure));
}

}  // namespace xlex
