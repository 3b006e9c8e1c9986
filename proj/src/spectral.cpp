#include "kgraph/spectral.hpp"

#include "kgraph/ratlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stack>

namespace kgraph::spectral {

namespace {

// Iterative Tarjan over the digraph with an edge s -> t when m(t,s) != 0.
struct TarjanState {
  const IntMatrix& m;
  int n;
  std::vector<int> index, lowlink;
  std::vector<bool> on_stack;
  std::stack<int> stack;
  int counter = 0;
  std::vector<std::vector<int>> components;

  explicit TarjanState(const IntMatrix& mat)
      : m(mat), n(mat.rows()), index(n, -1), lowlink(n, 0), on_stack(n, false) {}

  void run(int root) {
    struct Frame {
      int v;
      int next_t;
    };
    std::stack<Frame> call;
    call.push({root, 0});
    index[root] = lowlink[root] = counter++;
    stack.push(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.top();
      bool descended = false;
      while (f.next_t < n) {
        const int t = f.next_t++;
        if (m.at(t, f.v) == 0) continue;  // edge f.v -> t
        if (index[t] < 0) {
          index[t] = lowlink[t] = counter++;
          stack.push(t);
          on_stack[t] = true;
          call.push({t, 0});
          descended = true;
          break;
        }
        if (on_stack[t]) lowlink[f.v] = std::min(lowlink[f.v], index[t]);
      }
      if (descended) continue;
      if (lowlink[f.v] == index[f.v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.top();
          stack.pop();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != f.v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      const int child = f.v;
      call.pop();
      if (!call.empty())
        lowlink[call.top().v] = std::min(lowlink[call.top().v], lowlink[child]);
    }
  }
};

// Power iteration on (A + I) for an irreducible nonnegative component;
// returns a rigorous Collatz-Wielandt bracket for rho(A).
std::pair<double, double> component_bracket(const Mat<double>& a) {
  const int n = a.rows();
  std::vector<double> x(n, 1.0);
  double lo_best = 0.0;
  double hi_best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kPerronBudget; ++iter) {
    std::vector<double> y(n, 0.0);
    for (int r = 0; r < n; ++r) {
      double acc = x[r];  // the +I term keeps iterates positive
      for (int c = 0; c < n; ++c) acc += a.at(r, c) * x[c];
      y[r] = acc;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int r = 0; r < n; ++r) {
      const double ratio = y[r] / x[r];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    lo_best = std::max(lo_best, lo);
    hi_best = std::min(hi_best, hi);
    if (hi_best - lo_best <= kBracketTol * std::max(1.0, hi_best))
      return {lo_best - 1.0, hi_best - 1.0};
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, v);
    for (int r = 0; r < n; ++r) x[r] = y[r] / ymax;
  }
  std::ostringstream os;
  os << "Perron bracket did not reach width " << kBracketTol << " within " << kPerronBudget
     << " iterations (component size " << n << ")";
  throw NonConvergenceError(os.str());
}

// Exact certification: integer candidate r is the component root iff
// (C - r*I) has a nonnegative nonzero rational kernel vector.
bool kernel_has_nonnegative_vector(const IntMatrix& c, const BigInt& r) {
  RatMatrix k = to_rational_matrix(c);
  for (int i = 0; i < k.rows(); ++i) k.at(i, i) -= BigRat(r);
  for (const auto& v : ratlin::nullspace(std::move(k))) {
    bool nonneg = true, nonpos = true, nonzero = false;
    for (const BigRat& q : v) {
      if (q > 0) nonpos = false;
      if (q < 0) nonneg = false;
      if (q != 0) nonzero = true;
    }
    if (nonzero && (nonneg || nonpos)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const IntMatrix& m) {
  TarjanState state(m);
  for (int v = 0; v < m.rows(); ++v)
    if (state.index[v] < 0) state.run(v);
  std::sort(state.components.begin(), state.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return state.components;
}

PerronResult perron_root(const IntMatrix& m) {
  if (!m.square() || m.rows() == 0)
    throw std::invalid_argument("perron_root: matrix must be square and nonempty");
  PerronResult out;
  out.components = strongly_connected_components(m);

  struct CompData {
    double rho, lo, hi;
    bool exact;
    BigInt value;
  };
  std::vector<CompData> data;

  for (const auto& comp : out.components) {
    VertexSet w = VertexSet::of(m.rows(), comp);
    const IntMatrix sub = m.submatrix(w);
    CompData d{0.0, 0.0, 0.0, true, BigInt(0)};
    if (!sub.is_zero()) {
      if (sub.rows() == 1) {
        // Single vertex with self-loops: the root is the loop count itself.
        d.value = sub.at(0, 0);
        d.rho = d.lo = d.hi = d.value.convert_to<double>();
        d.exact = true;
      } else {
        auto [lo, hi] = component_bracket(to_double_matrix(sub));
        d.lo = lo;
        d.hi = hi;
        d.rho = 0.5 * (lo + hi);
        const double cand = std::round(d.rho);
        d.exact = false;
        if (std::abs(d.rho - cand) < kCompareTol && cand >= 0.0) {
          const BigInt r(static_cast<long long>(cand));
          if (kernel_has_nonnegative_vector(sub, r)) {
            d.exact = true;
            d.value = r;
            d.rho = d.lo = d.hi = cand;
          }
        }
      }
    }
    data.push_back(std::move(d));
  }

  int best = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    out.component_roots.push_back(data[i].rho);
    out.component_exact.push_back(data[i].exact);
    out.component_exact_value.push_back(data[i].value);
    if (data[i].rho > data[best].rho) best = static_cast<int>(i);
  }
  // Prefer an exact component that attains the max within tolerance, so exact
  // certification survives float ties.
  for (size_t i = 0; i < data.size(); ++i)
    if (data[i].exact && data[i].rho >= data[best].rho - kCompareTol * std::max(1.0, data[best].rho))
      if (!data[best].exact || data[i].rho > data[best].rho) best = static_cast<int>(i);

  out.rho = data[best].rho;
  out.lower = data[best].lo;
  out.upper = data[best].hi;
  out.is_exact_integer = data[best].exact;
  out.exact_value = data[best].value;
  return out;
}

double rho_graph(const KGraphSkeleton& g) {
  double rho = 0.0;
  for (int i = 0; i < g.num_colors(); ++i) rho = std::max(rho, perron_root(g.matrix(i)).rho);
  return rho;
}

SpectrumValue weighted_radius(const KGraphSkeleton& g, const ColorSet& f) {
  return weighted_radius_on(g, g.all_vertices(), f);
}

SpectrumValue weighted_radius_on(const KGraphSkeleton& g, const VertexSet& w,
                                 const ColorSet& f) {
  SpectrumValue out;
  out.beta = LogValue::neg_inf();
  struct Cand {
    LogValue beta;
    bool exact;
    BigInt value;
  };
  std::vector<Cand> cands;
  for (int i : f.members()) {
    const PerronResult p = perron_root(g.matrix(i).submatrix(w));
    Cand c;
    if (p.rho <= 0.0) {
      c.beta = LogValue::neg_inf();
      c.exact = true;
      c.value = 0;
    } else {
      c.beta = LogValue::of(std::log(p.rho) / g.weight(i));
      c.exact = p.is_exact_integer && g.weight(i) == 1.0;
      c.value = p.exact_value;
    }
    cands.push_back(std::move(c));
    out.beta = LogValue::max(out.beta, cands.back().beta);
  }
  if (!out.beta.finite()) {
    out.lambda = 0.0;
    out.exact = true;
    out.exact_value = 0;
    return out;
  }
  out.lambda = std::exp(out.beta.value());
  // Snap to a certified integer when an exact unit-weight colour attains the max.
  for (const Cand& c : cands) {
    if (!c.exact || !c.beta.finite()) continue;
    if (c.beta.value() >= out.beta.value() - kBracketTol * std::max(1.0, std::abs(out.beta.value()))) {
      out.exact = true;
      out.exact_value = c.value;
      out.lambda = c.value.convert_to<double>();
      out.beta = LogValue::of(std::log(out.lambda));
      break;
    }
  }
  return out;
}

VertexEntropy vertex_entropy(const KGraphSkeleton& g, int v) {
  if (v < 0 || v >= g.num_vertices())
    throw std::invalid_argument("vertex_entropy: vertex out of range");
  const VertexSet closure =
      forward_closure(g, VertexSet::of(g.num_vertices(), {v}), g.all_colors());
  VertexEntropy out;
  out.entropy = weighted_radius_on(g, closure, g.all_colors());
  out.radius = 0.0;
  for (int i = 0; i < g.num_colors(); ++i)
    out.radius = std::max(out.radius, perron_root(g.matrix(i).submatrix(closure)).rho);
  return out;
}

SpectrumValue vertex_entropy_restricted(const KGraphSkeleton& g, int v, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  const VertexSet closure = forward_closure(g, VertexSet::of(g.num_vertices(), {v}), f);
  return weighted_radius_on(g, closure, f);
}

TransitionSet transition_set(const KGraphSkeleton& g) {
  TransitionSet out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const SpectrumValue sv = vertex_entropy(g, v).entropy;
    bool merged = false;
    for (auto& e : out.values) {
      const bool close = std::abs(e.lambda - sv.lambda) <= kCompareTol * std::max(1.0, e.lambda);
      if (close) {
        if (!e.exact && sv.exact) {  // upgrade the stored representative
          e.exact = true;
          e.exact_value = sv.exact_value;
          e.lambda = sv.lambda;
          e.beta = sv.beta;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      TransitionEntry e;
      e.lambda = sv.lambda;
      e.beta = sv.beta;
      e.witness = v;
      e.exact = sv.exact;
      e.exact_value = sv.exact_value;
      e.subharmonic = sv.lambda >= 1.0 - kCompareTol;
      out.values.push_back(std::move(e));
    }
  }
  std::sort(out.values.begin(), out.values.end(),
            [](const TransitionEntry& a, const TransitionEntry& b) {
              if (a.lambda != b.lambda) return a.lambda < b.lambda;
              return a.witness < b.witness;
            });
  for (const auto& e : out.values) out.max_lambda = std::max(out.max_lambda, e.lambda);
  return out;
}

LogValue strong_entropy(const KGraphSkeleton& g, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  return weighted_radius(g, f).beta;
}

LogValue tracial_entropy(const KGraphSkeleton& g, const TraceVector& tau, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  const VertexSet supp = tau.support();
  if (supp.empty()) throw EmptyTraceError();
  const VertexSet closure = forward_closure(g, supp, f);
  return weighted_radius_on(g, closure, f).beta;
}

double lower_critical(const KGraphSkeleton& g) {
  LogValue min_entropy = LogValue::of(std::numeric_limits<double>::infinity());
  for (int v = 0; v < g.num_vertices(); ++v)
    min_entropy = std::min(min_entropy, vertex_entropy(g, v).entropy.beta,
                           [](const LogValue& a, const LogValue& b) { return a < b; });
  return std::max(0.0, min_entropy.value_or(0.0));
}

EntropyReport entropy_report(const KGraphSkeleton& g, const std::vector<ColorSet>& requested,
                             const TraceVector* tau, const ColorSet* tau_f) {
  EntropyReport out;
  for (const ColorSet& f : requested) out.strong.emplace_back(f, strong_entropy(g, f));
  if (tau && tau_f) out.tracial = tracial_entropy(g, *tau, *tau_f);
  out.lower_critical = lower_critical(g);
  out.weighted = !g.unit_weights();
  return out;
}

}  // namespace kgraph::spectral
