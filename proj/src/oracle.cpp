#include "kgraph/oracle.hpp"

#include "kgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgraph::oracle {

namespace {

// Number of compositions of k into the free coordinates of F; refuse rather
// than degrade when the term count gets out of hand.
long long composition_count(int k, int parts) {
  // C(k + parts - 1, parts - 1), saturating
  long long out = 1;
  for (int i = 1; i < parts; ++i) {
    out = out * (k + i) / i;
    if (out > 100'000'000) return 100'000'000;
  }
  return out;
}

constexpr long long kCompositionBudget = 2'000'000;

// Iterate all multidegrees n with |n| = k supported on F, handing each to fn.
template <typename Fn>
void for_each_multidegree(int num_colors, const ColorSet& f, int k, Fn fn) {
  const std::vector<int> free = f.members();
  if (free.empty()) {
    if (k == 0) fn(Multidegree::zero(num_colors));
    return;
  }
  std::vector<int> comp(free.size(), 0);
  comp[0] = k;
  while (true) {
    Multidegree n = Multidegree::zero(num_colors);
    for (size_t i = 0; i < free.size(); ++i) n.entries[free[i]] = comp[i];
    fn(n);
    // next composition of k (colex odometer)
    if (comp.back() == k) break;
    int i = 0;
    while (comp[i] == 0) ++i;
    const int value = comp[i];
    comp[i] = 0;
    comp[0] = value - 1;
    comp[i + 1] += 1;
  }
}

// Per-colour power cache: powers[i][e] = (Lambda^(i))^e.
struct PowerCache {
  std::vector<std::vector<IntMatrix>> powers;

  explicit PowerCache(const KGraphSkeleton& g) : powers(g.num_colors()) {
    for (int i = 0; i < g.num_colors(); ++i)
      powers[i].push_back(IntMatrix::identity(g.num_vertices()));
    for (int i = 0; i < g.num_colors(); ++i) powers[i].push_back(g.matrix(i));
  }

  const IntMatrix& get(const KGraphSkeleton& g, int color, int e) {
    while (static_cast<int>(powers[color].size()) <= e)
      powers[color].push_back(powers[color].back() * g.matrix(color));
    return powers[color][e];
  }
};

void check_budget(int k, const ColorSet& f) {
  if (composition_count(k, std::max(1, f.size())) > kCompositionBudget) {
    std::ostringstream os;
    os << "multidegree enumeration for length " << k << " over " << f.size()
       << " colours exceeds the term budget";
    throw BudgetExceededError(os.str());
  }
}

// ---- Independent exact elimination (deliberately separate from the solver
// ---- used by the eigencone module).

using RatRow = std::vector<BigRat>;

struct RatSystem {
  std::vector<RatRow> rows;  // augmented rows [coeffs | rhs]
  int cols = 0;
};

// Returns the unique solution if the system has one, nullopt otherwise.
std::optional<RatRow> unique_solution(RatSystem sys) {
  const int m = static_cast<int>(sys.rows.size());
  const int n = sys.cols;
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int pr = -1;
    for (int i = row; i < m; ++i)
      if (sys.rows[i][col] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(sys.rows[pr], sys.rows[row]);
    const BigRat piv = sys.rows[row][col];
    for (int j = col; j <= n; ++j) sys.rows[row][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || sys.rows[i][col] == 0) continue;
      const BigRat factor = sys.rows[i][col];
      for (int j = col; j <= n; ++j) sys.rows[i][j] -= factor * sys.rows[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < m; ++i)
    if (sys.rows[i][n] != 0) return std::nullopt;  // inconsistent
  if (static_cast<int>(pivot_col.size()) != n) return std::nullopt;  // underdetermined
  RatRow x(n, BigRat(0));
  for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) x[pivot_col[i]] = sys.rows[i][n];
  return x;
}

}  // namespace

BigInt path_count(const KGraphSkeleton& g, int k, const ColorSet& f) {
  if (k < 0) throw std::invalid_argument("path_count: negative length");
  if (k == 0) return BigInt(g.num_vertices());
  check_budget(k, f);
  PowerCache cache(g);
  BigInt total = 0;
  for_each_multidegree(g.num_colors(), f, k, [&](const Multidegree& n) {
    IntMatrix prod = IntMatrix::identity(g.num_vertices());
    for (int i = 0; i < g.num_colors(); ++i)
      if (n.entries[i] > 0) prod = prod * cache.get(g, i, n.entries[i]);
    total += prod.sum();
  });
  return total;
}

SeriesTrace entropy_estimate(const KGraphSkeleton& g, const ColorSet& f, int kmax) {
  if (kmax < 2) throw std::invalid_argument("entropy_estimate: kmax must be at least 2");
  check_budget(kmax, f);
  SeriesTrace out;
  PowerCache cache(g);
  double prev = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    BigInt b = 0;
    for_each_multidegree(g.num_colors(), f, k, [&](const Multidegree& n) {
      IntMatrix prod = IntMatrix::identity(g.num_vertices());
      for (int i = 0; i < g.num_colors(); ++i)
        if (n.entries[i] > 0) prod = prod * cache.get(g, i, n.entries[i]);
      b += prod.sum();
    });
    double value;
    if (b == 0)
      value = -std::numeric_limits<double>::infinity();
    else
      value = log_bigint(b) / static_cast<double>(k);
    out.terms.emplace_back(k, value);
    out.converged = k > 1 && std::abs(value - prev) <= 1e-12;
    prev = value;
  }
  out.limit_estimate = out.terms.back().second;
  return out;
}

SeriesTrace c_partial(const KGraphSkeleton& g, const TraceVector& tau, double beta,
                      const ColorSet& f, int kmax) {
  if (!tau.normalized()) throw std::invalid_argument("c_partial: tau must be normalized");
  check_budget(kmax, f);
  SeriesTrace out;
  PowerCache cache(g);
  const int nv = g.num_vertices();
  double partial = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    double term = 0.0;
    for_each_multidegree(g.num_colors(), f, k, [&](const Multidegree& n) {
      IntMatrix prod = IntMatrix::identity(nv);
      double weighted_length = 0.0;
      for (int i = 0; i < g.num_colors(); ++i)
        if (n.entries[i] > 0) {
          prod = prod * cache.get(g, i, n.entries[i]);
          weighted_length += n.entries[i] * g.weight(i);
        }
      // column sums = number of degree-n paths out of each source vertex
      for (int s = 0; s < nv; ++s) {
        if (tau.values[s] == 0.0) continue;
        BigInt col = 0;
        for (int t = 0; t < nv; ++t) col += prod.at(t, s);
        if (col == 0) continue;
        term += std::exp(-weighted_length * beta + log_bigint(col)) * tau.values[s];
      }
    });
    partial += term;
    out.terms.emplace_back(k, partial);
    out.converged = k > 0 && term < 1e-12;
  }
  out.limit_estimate = partial;
  return out;
}

std::vector<TraceVector> brute_simplex(const KGraphSkeleton& g, const BigRat& exp_beta,
                                       const ColorSet& f) {
  const int n = g.num_vertices();
  if (n > 8) throw DimensionTooLargeError("brute_simplex: more than 8 vertices");
  if (!(exp_beta > 1)) throw std::invalid_argument("brute_simplex: e^beta must exceed 1");
  if (!g.unit_weights())
    throw std::invalid_argument("brute_simplex: weighted graphs are not supported");
  if (f.is_full()) throw std::invalid_argument("brute_simplex: F must be a proper subset");

  const kms::Beta beta = kms::Beta::from_exact_exp(exp_beta);
  const std::vector<int> constrained = f.complement().members();

  std::vector<TraceVector> found;
  auto push_unique = [&](TraceVector&& t) {
    for (const TraceVector& seen : found)
      if (seen.linf_distance(t) <= kDedupTol) return;
    found.push_back(std::move(t));
  };

  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> supp;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) supp.push_back(v);

    RatSystem sys;
    sys.cols = static_cast<int>(supp.size());
    for (int j : constrained)
      for (int t = 0; t < n; ++t) {
        RatRow row(sys.cols + 1, BigRat(0));
        for (int c = 0; c < sys.cols; ++c) {
          BigRat e(g.matrix(j).at(t, supp[c]));
          if (t == supp[c]) e -= exp_beta;
          row[c] = e;
        }
        sys.rows.push_back(std::move(row));
      }
    RatRow norm(sys.cols + 1, BigRat(1));
    sys.rows.push_back(std::move(norm));

    const auto x = unique_solution(std::move(sys));
    if (!x) continue;
    bool nonneg = true;
    for (const BigRat& q : *x)
      if (q < 0) nonneg = false;
    if (!nonneg) continue;

    TraceVector t(std::vector<double>(n, 0.0));
    std::vector<BigRat> exact(n, BigRat(0));
    for (int c = 0; c < sys.cols; ++c) {
      t.values[supp[c]] = to_double((*x)[c]);
      exact[supp[c]] = (*x)[c];
    }
    t.exact = std::move(exact);

    if (!f.is_empty()) {
      // F-entropy filter, strict below beta.
      const spectral::SpectrumValue e =
          spectral::weighted_radius_on(g, forward_closure(g, t.support(), f), f);
      bool below;
      if (!e.beta.finite())
        below = true;
      else if (e.exact)
        below = BigRat(e.exact_value) < exp_beta;
      else
        below = e.beta.value() < beta.value;
      if (!below) continue;
    }
    push_unique(std::move(t));
  }

  std::sort(found.begin(), found.end(),
            [](const TraceVector& a, const TraceVector& b) { return a.values < b.values; });
  return found;
}

}  // namespace kgraph::oracle
