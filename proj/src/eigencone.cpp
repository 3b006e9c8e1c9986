#include "kgraph/eigencone.hpp"

#include "kgraph/ratlin.hpp"
#include "kgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgraph::eigencone {

namespace {

constexpr long long kSubsetBudget = 4'000'000;

// Stacked equality system: one block of rows per constraint, then the
// normalization row; right-hand side is e_last.
Mat<double> stacked_double(const KGraphSkeleton& g,
                           const std::vector<EigenConstraint>& constraints) {
  const int n = g.num_vertices();
  const int m = static_cast<int>(constraints.size()) * n + 1;
  Mat<double> a(m, n);
  int r0 = 0;
  for (const auto& c : constraints) {
    const Mat<double> lam = to_double_matrix(g.matrix(c.color));
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s)
        a.at(r0 + t, s) = lam.at(t, s) - (t == s ? c.lambda : 0.0);
    r0 += n;
  }
  for (int s = 0; s < n; ++s) a.at(r0, s) = 1.0;
  return a;
}

RatMatrix stacked_exact(const KGraphSkeleton& g,
                        const std::vector<EigenConstraint>& constraints) {
  const int n = g.num_vertices();
  const int m = static_cast<int>(constraints.size()) * n + 1;
  RatMatrix a(m, n);
  int r0 = 0;
  for (const auto& c : constraints) {
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s) {
        BigRat e(g.matrix(c.color).at(t, s));
        if (t == s) e -= *c.exact;
        a.at(r0 + t, s) = e;
      }
    r0 += n;
  }
  for (int s = 0; s < n; ++s) a.at(r0, s) = 1;
  return a;
}

double matrix_scale(const Mat<double>& a) {
  double s = 1.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) s = std::max(s, std::abs(a.at(r, c)));
  return s;
}

// Float rank with a loose threshold so candidate support sizes are never
// under-capped; dependent subsets are rejected later anyway.
int float_rank(const Mat<double>& a, const std::vector<int>& cols, double scale) {
  const int m = a.rows(), k = static_cast<int>(cols.size());
  std::vector<std::vector<double>> w(m, std::vector<double>(k));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < k; ++c) w[r][c] = a.at(r, cols[c]);
  const double tol = 1e-12 * scale;
  int rank = 0;
  for (int c = 0; c < k && rank < m; ++c) {
    int pr = rank;
    for (int i = rank + 1; i < m; ++i)
      if (std::abs(w[i][c]) > std::abs(w[pr][c])) pr = i;
    if (std::abs(w[pr][c]) <= tol) continue;
    std::swap(w[pr], w[rank]);
    for (int i = rank + 1; i < m; ++i) {
      const double f = w[i][c] / w[rank][c];
      for (int j = c; j < k; ++j) w[i][j] -= f * w[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Unique solution of the column-restricted system, or nullopt when the
// columns are dependent or the full system is inconsistent.
std::optional<std::vector<double>> solve_support_double(const Mat<double>& a,
                                                        const std::vector<int>& cols,
                                                        double scale) {
  const int m = a.rows(), k = static_cast<int>(cols.size());
  std::vector<std::vector<double>> w(m, std::vector<double>(k + 1, 0.0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < k; ++c) w[r][c] = a.at(r, cols[c]);
  w[m - 1][k] = 1.0;  // rhs: normalization row only

  const double piv_tol = 1e-12 * scale;
  std::vector<int> pivot_row(k, -1);
  int rank = 0;
  for (int c = 0; c < k && rank < m; ++c) {
    int pr = rank;
    for (int i = rank + 1; i < m; ++i)
      if (std::abs(w[i][c]) > std::abs(w[pr][c])) pr = i;
    if (std::abs(w[pr][c]) <= piv_tol) return std::nullopt;  // not basic
    std::swap(w[pr], w[rank]);
    for (int i = rank + 1; i < m; ++i) {
      const double f = w[i][c] / w[rank][c];
      for (int j = c; j <= k; ++j) w[i][j] -= f * w[rank][j];
    }
    pivot_row[c] = rank;
    ++rank;
  }
  std::vector<double> y(k, 0.0);
  for (int c = k - 1; c >= 0; --c) {
    double acc = w[pivot_row[c]][k];
    for (int j = c + 1; j < k; ++j) acc -= w[pivot_row[c]][j] * y[j];
    y[c] = acc / w[pivot_row[c]][c];
  }
  // Residual over the full stacked system.
  const double tol = kCompareTol * scale;
  for (int r = 0; r < m; ++r) {
    double acc = (r == m - 1) ? -1.0 : 0.0;
    for (int c = 0; c < k; ++c) acc += a.at(r, cols[c]) * y[c];
    if (std::abs(acc) > tol) return std::nullopt;
  }
  return y;
}

std::optional<std::vector<BigRat>> solve_support_exact(const RatMatrix& a,
                                                       const std::vector<int>& cols) {
  const int m = a.rows(), k = static_cast<int>(cols.size());
  RatMatrix sub(m, k);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < k; ++c) sub.at(r, c) = a.at(r, cols[c]);
  std::vector<BigRat> b(m, BigRat(0));
  b[m - 1] = 1;
  return ratlin::solve_unique(sub, b);
}

// Lexicographic k-combinations of 0..n-1, mapped through `pool`.
template <typename Fn>
bool for_each_combination(const std::vector<int>& pool, int k, long long& budget, Fn fn) {
  const int n = static_cast<int>(pool.size());
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (--budget < 0)
      throw DimensionTooLargeError("eigencone support enumeration budget exceeded");
    std::vector<int> cols(k);
    for (int i = 0; i < k; ++i) cols[i] = pool[idx[i]];
    if (fn(cols)) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConeSimplex eigencone_vertices(const KGraphSkeleton& g,
                               const std::vector<EigenConstraint>& constraints,
                               const VertexSet& forbidden, int enumeration_cap) {
  if (constraints.empty()) throw EmptyColorSetError();
  for (const auto& c : constraints)
    if (!(c.lambda > 0.0))
      throw std::invalid_argument("eigencone_vertices: lambda must be positive");
  if (g.num_vertices() > enumeration_cap) {
    std::ostringstream os;
    os << "eigencone enumeration refused: " << g.num_vertices()
       << " vertices exceeds cap " << enumeration_cap;
    throw DimensionTooLargeError(os.str());
  }

  ConeSimplex out;
  out.constraints = constraints;
  out.exact = std::all_of(constraints.begin(), constraints.end(),
                          [](const EigenConstraint& c) { return c.exact.has_value(); });

  std::vector<int> allowed;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!forbidden.contains(v)) allowed.push_back(v);
  if (allowed.empty()) return out;

  const int n = g.num_vertices();
  long long budget = kSubsetBudget;

  auto accept = [&](TraceVector&& t) {
    for (const TraceVector& seen : out.extreme_points)
      if (seen.linf_distance(t) <= kDedupTol) return;
    out.extreme_points.push_back(std::move(t));
  };

  if (out.exact) {
    const RatMatrix a = stacked_exact(g, constraints);
    RatMatrix allowed_cols(a.rows(), static_cast<int>(allowed.size()));
    for (int r = 0; r < a.rows(); ++r)
      for (size_t c = 0; c < allowed.size(); ++c) allowed_cols.at(r, static_cast<int>(c)) = a.at(r, allowed[c]);
    const int max_size = std::min<int>(ratlin::rank(allowed_cols), static_cast<int>(allowed.size()));
    for (int k = 1; k <= max_size; ++k)
      for_each_combination(allowed, k, budget, [&](const std::vector<int>& cols) {
        auto y = solve_support_exact(a, cols);
        if (!y) return false;
        for (const BigRat& q : *y)
          if (q < 0) return false;
        TraceVector t(std::vector<double>(n, 0.0));
        std::vector<BigRat> ex(n, BigRat(0));
        for (size_t i = 0; i < cols.size(); ++i) {
          t.values[cols[i]] = to_double((*y)[i]);
          ex[cols[i]] = (*y)[i];
        }
        t.exact = std::move(ex);
        accept(std::move(t));
        return false;
      });
  } else {
    const Mat<double> a = stacked_double(g, constraints);
    const double scale = matrix_scale(a);
    const int max_size = std::min<int>(float_rank(a, allowed, scale),
                                       static_cast<int>(allowed.size()));
    for (int k = 1; k <= max_size; ++k)
      for_each_combination(allowed, k, budget, [&](const std::vector<int>& cols) {
        auto y = solve_support_double(a, cols, scale);
        if (!y) return false;
        double sum = 0.0;
        for (double& v : *y) {
          if (v < -kCompareTol) return false;
          if (v < 0.0) v = 0.0;
          sum += v;
        }
        if (sum <= 0.0) return false;
        TraceVector t(std::vector<double>(n, 0.0));
        for (size_t i = 0; i < cols.size(); ++i) t.values[cols[i]] = (*y)[i] / sum;
        accept(std::move(t));
        return false;
      });
  }

  std::sort(out.extreme_points.begin(), out.extreme_points.end(),
            [](const TraceVector& a, const TraceVector& b) { return a.values < b.values; });
  return out;
}

VertexSet support_of_cone(const ConeSimplex& c, int num_vertices) {
  if (c.empty()) throw EmptyConeError();
  VertexSet out(num_vertices);
  for (const TraceVector& t : c.extreme_points) out = out.unite(t.support());
  return out;
}

namespace {

// lambda with Lambda^(j) x = lambda x, or nullopt if x is not an eigenvector.
std::optional<double> eigen_ratio(const IntMatrix& m, const std::vector<double>& x) {
  const Mat<double> md = to_double_matrix(m);
  const int n = md.rows();
  std::vector<double> y(n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) y[r] += md.at(r, c) * x[c];
  int vstar = 0;
  for (int v = 1; v < n; ++v)
    if (x[v] > x[vstar]) vstar = v;
  if (x[vstar] <= 0.0) return std::nullopt;
  const double lambda = y[vstar] / x[vstar];
  for (int v = 0; v < n; ++v)
    if (std::abs(y[v] - lambda * x[v]) > kCompareTol * std::max(1.0, lambda))
      return std::nullopt;
  return lambda;
}

struct RootCandidate {
  double value;
  bool exact;
  BigInt exact_value;
};

std::vector<RootCandidate> distinct_roots_descending(const spectral::PerronResult& p) {
  std::vector<RootCandidate> roots;
  for (size_t i = 0; i < p.component_roots.size(); ++i) {
    const double v = p.component_roots[i];
    if (v <= 0.0) continue;  // lambda must be positive in a constraint
    bool dup = false;
    for (const auto& r : roots)
      if (std::abs(r.value - v) <= kCompareTol * std::max(1.0, v)) dup = true;
    if (!dup)
      roots.push_back({v, p.component_exact[i],
                       p.component_exact[i] ? p.component_exact_value[i] : BigInt(0)});
  }
  std::sort(roots.begin(), roots.end(),
            [](const RootCandidate& a, const RootCandidate& b) { return a.value > b.value; });
  return roots;
}

}  // namespace

CommonEigenvector common_eigenvector(const KGraphSkeleton& g) {
  const int nc = g.num_colors();
  std::vector<spectral::PerronResult> perron;
  perron.reserve(nc);
  for (int i = 0; i < nc; ++i) perron.push_back(spectral::perron_root(g.matrix(i)));

  int i0 = 0;
  for (int i = 1; i < nc; ++i)
    if (perron[i].rho > perron[i0].rho + kCompareTol) i0 = i;

  std::vector<std::vector<RootCandidate>> candidates(nc);
  for (int i = 0; i < nc; ++i) candidates[i] = distinct_roots_descending(perron[i]);

  auto make_constraint = [&](int color, const RootCandidate& r) {
    EigenConstraint c;
    c.color = color;
    c.lambda = r.value;
    if (r.exact) c.exact = BigRat(r.exact_value);
    return c;
  };

  std::optional<CommonEigenvector> found;

  auto finish = [&](const TraceVector& x,
                    const std::vector<EigenConstraint>& constraints) -> bool {
    CommonEigenvector result;
    result.vector = x;
    result.eigenvalues.assign(nc, 0.0);
    result.exact_eigenvalues.assign(nc, std::nullopt);
    for (int j = 0; j < nc; ++j) {
      const auto ratio = eigen_ratio(g.matrix(j), x.values);
      if (!ratio) return false;
      double lam = *ratio;
      std::optional<BigRat> exact;
      for (const auto& c : constraints)
        if (c.color == j && c.exact) {
          lam = c.lambda;
          exact = c.exact;
        }
      if (!exact)  // snap to a certified component root of this colour
        for (const auto& r : candidates[j])
          if (r.exact && std::abs(r.value - lam) <= kCompareTol * std::max(1.0, lam)) {
            lam = r.value;
            exact = BigRat(r.exact_value);
          }
      if (!exact && std::abs(lam) <= kCompareTol) {
        lam = 0.0;
        exact = BigRat(0);
      }
      result.eigenvalues[j] = lam;
      result.exact_eigenvalues[j] = exact;
    }
    found = std::move(result);
    return true;
  };

  // Depth-first search over nested eigencone intersections. The first level
  // pins the colour attaining rho(Lambda) at that radius.
  auto dfs = [&](auto&& self, std::vector<EigenConstraint>& constraints,
                 std::uint32_t used_mask) -> bool {
    const ConeSimplex cone = eigencone_vertices(g, constraints, VertexSet(g.num_vertices()));
    if (cone.empty()) return false;
    for (const TraceVector& x : cone.extreme_points)
      if (finish(x, constraints)) return true;
    // Descend on the first unconstrained colour with candidate roots; a
    // nilpotent colour has none and is handled by the ratio test above.
    int next = -1;
    for (int j = 0; j < nc; ++j)
      if (!((used_mask >> j) & 1u) && !candidates[j].empty()) {
        next = j;
        break;
      }
    if (next < 0) return false;
    for (const auto& r : candidates[next]) {
      constraints.push_back(make_constraint(next, r));
      const bool ok = self(self, constraints, used_mask | (1u << next));
      constraints.pop_back();
      if (ok) return true;
    }
    return false;
  };

  if (candidates[i0].empty())
    throw NotFoundError("common_eigenvector: dominant colour is nilpotent");
  std::vector<EigenConstraint> constraints = {make_constraint(i0, candidates[i0].front())};
  if (!dfs(dfs, constraints, 1u << i0)) {
    std::ostringstream os;
    os << "common_eigenvector: no simultaneous nonnegative eigenvector found"
       << " (rho = " << perron[i0].rho << ", colour " << (i0 + 1)
       << "); this indicates a numerical failure for a commuting family";
    throw NotFoundError(os.str());
  }
  return *found;
}

}  // namespace kgraph::eigencone
