#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "xlex/corpus.hpp"
#include "xlex/error.hpp"
#include "xlex/matrix.hpp"

namespace xlex {

/// Association measures applied to raw co-occurrence counts.
enum class AssocMeasure {
  kSquaredRatio,  // f(i&j)^2 / (f(i) f(j))
  kRaw,           // f(i&j)
  kMiNoLog,       // f(i&j) / (f(i) f(j)), mutual information without the log
};

inline std::string_view to_string(AssocMeasure m) {
  switch (m) {
    case AssocMeasure::kSquaredRatio: return "sq-ratio";
    case AssocMeasure::kRaw: return "raw";
    case AssocMeasure::kMiNoLog: return "mi-nolog";
  }
  return "unknown";
}

inline AssocMeasure parse_measure(std::string_view name) {
  if (name == "sq-ratio") return AssocMeasure::kSquaredRatio;
  if (name == "raw") return AssocMeasure::kRaw;
  if (name == "mi-nolog") return AssocMeasure::kMiNoLog;
  throw DomainError("unknown association measure '" + std::string(name) +
                    "' (expected sq-ratio, raw or mi-nolog)");
}

/// N x N nonnegative, symmetric, zero-diagonal association matrix.
struct AssocMatrix {
  SquareMatrix<double> values;
  Vocabulary vocab;
  std::optional<AssocMeasure> measure;  // unknown for matrices read without metadata
  bool normalized = false;

  std::size_t size() const noexcept { return values.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }

  double sum() const {
    double s = 0.0;
    for (double v : values.values()) s += v;
    return s;
  }

  friend bool operator==(const AssocMatrix&, const AssocMatrix&) = default;
};

/// Relative tolerance for "normalized entries sum to N^2".
inline constexpr double kNormalizationTolerance = 1e-9;

inline bool is_normalized(const AssocMatrix& m) {
  const double target = static_cast<double>(m.size()) * static_cast<double>(m.size());
  return std::abs(m.sum() - target) <= kNormalizationTolerance * target;
}

/// Applies one measure to every off-diagonal count. The diagonal stays zero.
inline AssocMatrix apply_measure(const CoocStats& stats, AssocMeasure measure) {
  const std::size_t n = stats.size();
  for (std::size_t i = 0; i < n; ++i)
    if (stats.unigram_counts[i] == 0)
      throw DomainError("zero corpus frequency for word '" + stats.vocab[i] + "'");

  AssocMatrix out{SquareMatrix<double>(n, 0.0), stats.vocab, measure, false};
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = static_cast<double>(stats.unigram_counts[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double fij = static_cast<double>(stats.pair_counts(i, j));
      const double fj = static_cast<double>(stats.unigram_counts[j]);
      double a = 0.0;
      switch (measure) {
        case AssocMeasure::kSquaredRatio: a = fij * fij / (fi * fj); break;
        case AssocMeasure::kRaw: a = fij; break;
        case AssocMeasure::kMiNoLog: a = fij / (fi * fj); break;
      }
      out.values(i, j) = a;
    }
  }
  return out;
}

/// Scales all entries by one factor so they sum to N^2, the number of fields.
inline AssocMatrix normalize(AssocMatrix m) {
  const double total = m.sum();
  if (!(total > 0.0)) throw DomainError("degenerate matrix: no co-occurrences");
  const double target = static_cast<double>(m.size()) * static_cast<double>(m.size());
  if (m.normalized && is_normalized(m)) return m;
  const double scale = target / total;
  for (double& v : m.values.values()) v *= scale;
  m.normalized = true;
  return m;
}

/// Validates the structural invariants of an association matrix.
inline void check_assoc_matrix(const AssocMatrix& m) {
  if (m.vocab.size() != m.size()) throw DomainError("vocabulary size does not match matrix dimension");
  for (double v : m.values.values())
    if (!std::isfinite(v) || v < 0.0) throw DomainError("association matrix has a negative or non-finite entry");
  if (!m.values.is_symmetric()) throw DomainError("association matrix is not symmetric");
  if (!m.values.has_zero_diagonal()) throw DomainError("association matrix has a nonzero diagonal");
  if (m.normalized && !is_normalized(m)) throw DomainError("matrix marked normalized does not sum to N^2");
}

}  // namespace xlex
