#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "xlex/assoc.hpp"
#include "xlex/error.hpp"
#include "xlex/matrix.hpp"
#include "xlex/permutation.hpp"

namespace xlex {

namespace detail {
inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DomainError(std::string(what) + " dimension mismatch: " + std::to_string(a) + " vs " +
                      std::to_string(b));
}
}  // namespace detail

/// s = sum over all N^2 positions of |E(i,j) - G(i,j)|.
template <typename T>
double similarity(const SquareMatrix<T>& e, const SquareMatrix<T>& g) {
  detail::require_same_size(e.size(), g.size(), "similarity");
  const auto ev = e.values();
  const auto gv = g.values();
  double s = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k)
    s += std::abs(static_cast<double>(ev[k]) - static_cast<double>(gv[k]));
  return s;
}

inline double similarity(const AssocMatrix& e, const AssocMatrix& g) { return similarity(e.values, g.values); }

/// Moves rows and columns together: result(p[i], p[j]) = m(i, j).
template <typename T>
SquareMatrix<T> permute_matrix(const SquareMatrix<T>& m, const Permutation& p) {
  detail::require_same_size(m.size(), p.size(), "permutation");
  SquareMatrix<T> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(p[i], p[j]) = m(i, j);
  return out;
}

/// Permutes the matrix and its vocabulary labels together.
inline AssocMatrix permute_matrix(const AssocMatrix& m, const Permutation& p) {
  detail::require_same_size(m.size(), p.size(), "permutation");
  std::vector<std::string> words(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) words[p[i]] = m.vocab[i];
  return AssocMatrix{permute_matrix(m.values, p), Vocabulary(std::move(words)), m.measure, m.normalized};
}

/// s(E, permute_matrix(G, p)) without materializing the permuted matrix.
template <typename T>
double similarity_permuted(const SquareMatrix<T>& e, const SquareMatrix<T>& g, const Permutation& p) {
  detail::require_same_size(e.size(), g.size(), "similarity");
  detail::require_same_size(g.size(), p.size(), "permutation");
  const std::size_t n = e.size();
  std::vector<std::size_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[p[i]] = i;
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto erow = e.row(a);
    const auto grow = g.row(inv[a]);
    for (std::size_t b = 0; b < n; ++b)
      s += std::abs(static_cast<double>(erow[b]) - static_cast<double>(grow[inv[b]]));
  }
  return s;
}

}  // namespace xlex
