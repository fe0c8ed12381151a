#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <sys/wait.h>
#include <string>
#include <utility>
#include <vector>

#include "xlex/xlex.hpp"

namespace xlex::testing {

// Word orders of Table 1a (English) and Table 1b (German).
inline const std::vector<std::string> kEnglish{"blue", "green", "plant", "school", "sky", "teacher"};
inline const std::vector<std::string> kGerman{"blau", "grün", "himmel", "lehrer", "pflanze", "schule"};

inline AssocMatrix binary_matrix(const std::vector<std::string>& words,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  AssocMatrix m{SquareMatrix<double>(words.size(), 0.0), Vocabulary(words), std::nullopt, false};
  for (auto [a, b] : edges) m.values(a, b) = m.values(b, a) = 1.0;
  return m;
}

// Dots of Table 1a: blue-green, blue-sky, green-plant, school-teacher.
inline AssocMatrix table1_english() { return normalize(binary_matrix(kEnglish, {{0, 1}, {0, 4}, {1, 2}, {3, 5}})); }

// Dots of Table 1b: blau-grün, blau-Himmel, grün-Pflanze, Lehrer-Schule.
inline AssocMatrix table1_german() { return normalize(binary_matrix(kGerman, {{0, 1}, {0, 2}, {1, 4}, {3, 5}})); }

// The correct lexicon: blue->blau, green->grün, plant->pflanze, school->schule,
// sky->himmel, teacher->lehrer. Also the reordering of Table 1c.
inline Permutation table1_truth() { return Permutation({0, 1, 4, 5, 2, 3}); }

inline std::vector<std::string> index_words(std::size_t n, const std::string& prefix = "w") {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(prefix + std::to_string(i));
  return w;
}

/// Random symmetric, zero-diagonal, normalized matrix; `density` controls
/// the fraction of nonzero off-diagonal pairs.
inline AssocMatrix random_matrix(std::size_t n, Rng& rng, double density = 0.6) {
  AssocMatrix m{SquareMatrix<double>(n, 0.0), Vocabulary(index_words(n)), AssocMeasure::kRaw, false};
  bool any = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform01() < density) {
        m.values(i, j) = m.values(j, i) = rng.uniform01() * 10.0;
        any = true;
      }
  if (!any) m.values(0, 1) = m.values(1, 0) = 1.0;
  return normalize(std::move(m));
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("xlex_" + tag + "_" + std::to_string(std::hash<std::string>{}(tag + std::to_string(std::rand()))));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

#ifdef XLEX_CLI_PATH
/// Runs the CLI with the given argument string; returns its exit code.
inline int run_cli(const std::string& args, const std::filesystem::path& stderr_path = {}) {
  std::string cmd = std::string("\"") + XLEX_CLI_PATH + "\" " + args;
  cmd += stderr_path.empty() ? " 2>/dev/null" : " 2>\"" + stderr_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace xlex::testing
