#include "support.hpp"

#include <cmath>

namespace testsupport {

namespace {

// Small test-local exact solver (reduced row echelon on an augmented system):
// returns the unique solution when columns are independent and the system is
// consistent.
std::optional<std::vector<BigRat>> solve_exact(std::vector<std::vector<BigRat>> rows,
                                               int cols) {
  const int m = static_cast<int>(rows.size());
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < m; ++col) {
    int pr = -1;
    for (int i = row; i < m; ++i)
      if (rows[i][col] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(rows[pr], rows[row]);
    const BigRat piv = rows[row][col];
    for (int j = col; j <= cols; ++j) rows[row][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || rows[i][col] == 0) continue;
      const BigRat f = rows[i][col];
      for (int j = col; j <= cols; ++j) rows[i][j] -= f * rows[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < m; ++i)
    if (rows[i][cols] != 0) return std::nullopt;
  if (static_cast<int>(pivot_col.size()) != cols) return std::nullopt;
  std::vector<BigRat> x(cols, BigRat(0));
  for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) x[pivot_col[i]] = rows[i][cols];
  return x;
}

int rank_exact(std::vector<std::vector<BigRat>> rows) {
  if (rows.empty()) return 0;
  const int cols = static_cast<int>(rows[0].size());
  const int m = static_cast<int>(rows.size());
  int rank = 0;
  for (int col = 0; col < cols && rank < m; ++col) {
    int pr = -1;
    for (int i = rank; i < m; ++i)
      if (rows[i][col] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(rows[pr], rows[rank]);
    for (int i = rank + 1; i < m; ++i) {
      if (rows[i][col] == 0) continue;
      const BigRat f = rows[i][col] / rows[rank][col];
      for (int j = col; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool in_convex_hull_exact(const std::vector<std::vector<BigRat>>& points,
                          const std::vector<BigRat>& x) {
  const int k = static_cast<int>(points.size());
  if (k == 0) return false;
  const int dim = static_cast<int>(x.size());
  // Caratheodory: some subset carries x with nonnegative barycentric weights.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> chosen;
    for (int j = 0; j < k; ++j)
      if ((mask >> j) & 1u) chosen.push_back(j);
    std::vector<std::vector<BigRat>> rows;
    for (int d = 0; d < dim; ++d) {
      std::vector<BigRat> row(chosen.size() + 1, BigRat(0));
      for (size_t c = 0; c < chosen.size(); ++c) row[c] = points[chosen[c]][d];
      row[chosen.size()] = x[d];
      rows.push_back(std::move(row));
    }
    std::vector<BigRat> norm(chosen.size() + 1, BigRat(1));
    rows.push_back(std::move(norm));
    const auto sol = solve_exact(std::move(rows), static_cast<int>(chosen.size()));
    if (!sol) continue;
    bool nonneg = true;
    for (const BigRat& q : *sol)
      if (q < 0) nonneg = false;
    if (nonneg) return true;
  }
  return false;
}

bool affinely_independent_exact(const std::vector<std::vector<BigRat>>& points) {
  if (points.size() <= 1) return true;
  std::vector<std::vector<BigRat>> rows;
  for (size_t i = 1; i < points.size(); ++i) {
    std::vector<BigRat> row(points[0].size());
    for (size_t d = 0; d < points[0].size(); ++d) row[d] = points[i][d] - points[0][d];
    rows.push_back(std::move(row));
  }
  return rank_exact(std::move(rows)) == static_cast<int>(points.size()) - 1;
}

std::vector<BigRat> exact_values(const TraceVector& t) {
  if (t.exact) return *t.exact;
  std::vector<BigRat> out;
  for (double v : t.values) {
    // continued-fraction reconstruction with denominator cap
    long long best_num = 0, best_den = 1;
    double best_err = std::abs(v);
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int iter = 0; iter < 40; ++iter) {
      const double a_floor = std::floor(x);
      const long long a = static_cast<long long>(a_floor);
      const long long p2 = a * p1 + p0;
      const long long q2 = a * q1 + q0;
      if (q2 > 1000000 || q2 <= 0) break;
      const double err = std::abs(v - static_cast<double>(p2) / static_cast<double>(q2));
      if (err < best_err) {
        best_err = err;
        best_num = p2;
        best_den = q2;
      }
      if (err < 1e-13) break;
      const double frac = x - a_floor;
      if (frac < 1e-15) break;
      x = 1.0 / frac;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
    }
    if (best_err > 1e-9)
      throw std::runtime_error("exact_values: no small rational reconstruction");
    out.emplace_back(BigInt(best_num), BigInt(best_den));
  }
  return out;
}

}  // namespace testsupport
