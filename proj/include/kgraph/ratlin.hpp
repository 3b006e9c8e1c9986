#pragma once

#include "kgraph/matrix.hpp"
#include "kgraph/types.hpp"

#include <optional>
#include <vector>

namespace kgraph::ratlin {

/// Row echelon reduction in place. Returns pivot column per pivot row.
inline std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivot_cols;
  int lead = 0;
  for (int r = 0; r < m.rows() && lead < m.cols(); ++r) {
    int pr = -1;
    while (lead < m.cols()) {
      for (int i = r; i < m.rows(); ++i)
        if (m.at(i, lead) != 0) {
          pr = i;
          break;
        }
      if (pr >= 0) break;
      ++lead;
    }
    if (pr < 0) break;
    if (pr != r)
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(r, c));
    const BigRat piv = m.at(r, lead);
    for (int c = 0; c < m.cols(); ++c) m.at(r, c) /= piv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, lead) == 0) continue;
      const BigRat f = m.at(i, lead);
      for (int c = 0; c < m.cols(); ++c) m.at(i, c) -= f * m.at(r, c);
    }
    pivot_cols.push_back(lead);
    ++lead;
  }
  return pivot_cols;
}

inline int rank(RatMatrix m) { return static_cast<int>(rref(m).size()); }

/// Basis of the right nullspace of m.
inline std::vector<std::vector<BigRat>> nullspace(RatMatrix m) {
  const int n = m.cols();
  const std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<BigRat>> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<BigRat> v(n, BigRat(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Unique solution of the (possibly tall) system a x = b: requires full column
/// rank and consistency; nullopt otherwise.
inline std::optional<std::vector<BigRat>> solve_unique(const RatMatrix& a,
                                                       const std::vector<BigRat>& b) {
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  const std::vector<int> pivots = rref(aug);
  // Inconsistent if some pivot lands in the augmented column.
  for (int c : pivots)
    if (c == a.cols()) return std::nullopt;
  if (static_cast<int>(pivots.size()) != a.cols()) return std::nullopt;
  std::vector<BigRat> x(a.cols(), BigRat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), a.cols());
  return x;
}

}  // namespace kgraph::ratlin
