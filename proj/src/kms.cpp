#include "kgraph/kms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgraph::kms {

Beta Beta::from_value(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  Beta b;
  b.value = beta;
  b.exp_value = std::exp(beta);
  b.specified_as = Spec::Raw;
  return b;
}

Beta Beta::from_exp(double exp_beta) {
  if (!(exp_beta > 1.0)) throw std::invalid_argument("e^beta must exceed 1");
  Beta b;
  b.value = std::log(exp_beta);
  b.exp_value = exp_beta;
  b.specified_as = Spec::Exp;
  return b;
}

Beta Beta::from_exact_exp(const BigRat& exp_beta) {
  if (!(exp_beta > 1)) throw std::invalid_argument("e^beta must exceed 1");
  Beta b = from_exp(to_double(exp_beta));
  b.exact_exp = exp_beta;
  return b;
}

std::string to_string(Algebra a) {
  return a == Algebra::Toeplitz ? "nt" : "no";
}

std::string to_string(SimplexKind k) {
  switch (k) {
    case SimplexKind::Finite: return "finite";
    case SimplexKind::Subharmonic: return "subharmonic";
    case SimplexKind::Infinite: return "infinite";
  }
  return "?";
}

std::string to_string(EmptyReason r) {
  switch (r) {
    case EmptyReason::None: return "";
    case EmptyReason::InfeasibleEigencone: return "infeasible-eigencone";
    case EmptyReason::EntropyFilter: return "entropy-filter";
    case EmptyReason::TracingFilter: return "tracing-filter";
    case EmptyReason::OffTransition: return "off-transition";
  }
  return "?";
}

namespace {

// Strict comparison "spectral value < beta", exact on the lambda scale when
// both sides are certified.
bool strictly_below(const spectral::SpectrumValue& e, const Beta& beta) {
  if (!e.beta.finite()) return true;
  if (e.exact && beta.exact_exp) return BigRat(e.exact_value) < *beta.exact_exp;
  return e.beta.value() < beta.value;
}

bool beta_matches(const spectral::TransitionEntry& entry, const Beta& beta, double tol) {
  if (entry.exact && beta.exact_exp) return BigRat(entry.exact_value) == *beta.exact_exp;
  return std::abs(beta.exp_value - entry.lambda) <= tol * std::max(1.0, entry.lambda);
}

std::vector<eigencone::EigenConstraint> constraints_for(const KGraphSkeleton& g,
                                                        const Beta& beta,
                                                        const ColorSet& colors) {
  std::vector<eigencone::EigenConstraint> out;
  for (int j : colors.members()) {
    eigencone::EigenConstraint c;
    c.color = j;
    if (beta.exact_exp && g.weight(j) == 1.0) {
      c.exact = *beta.exact_exp;
      c.lambda = to_double(*c.exact);
    } else {
      c.lambda = std::exp(g.weight(j) * beta.value);
    }
    out.push_back(std::move(c));
  }
  return out;
}

spectral::SpectrumValue trace_f_spectrum(const KGraphSkeleton& g, const TraceVector& tau,
                                         const ColorSet& f) {
  const VertexSet supp = tau.support();
  if (supp.empty()) throw EmptyTraceError();
  const VertexSet closure = forward_closure(g, supp, f);
  return spectral::weighted_radius_on(g, closure, f);
}

void assert_annihilates_eventual_sources(const KGraphSkeleton& g,
                                         const SubharmonicSimplex& simplex) {
  const ColorSet fc = simplex.f.complement();
  const VertexSet ev = eventual_f_sources(g, fc);
  for (const TraceVector& tau : simplex.generators)
    if (!tau.support().intersect(ev).empty())
      throw std::logic_error(
          "tr_F: generator fails to annihilate an eventual F^c-source; "
          "numerical inconsistency");
}

std::vector<double> solve_dense(Mat<double> a, std::vector<double> b, int color) {
  const int n = a.rows();
  for (int c = 0; c < n; ++c) {
    int pr = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(a.at(i, c)) > std::abs(a.at(pr, c))) pr = i;
    if (std::abs(a.at(pr, c)) < 1e-14) {
      std::ostringstream os;
      os << "resolvent system is singular in colour " << (color + 1);
      throw SingularResolventError(color, os.str());
    }
    if (pr != c) {
      for (int j = 0; j < n; ++j) std::swap(a.at(pr, j), a.at(c, j));
      std::swap(b[pr], b[c]);
    }
    for (int i = c + 1; i < n; ++i) {
      const double f = a.at(i, c) / a.at(c, c);
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
      b[i] -= f * b[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= a.at(i, j) * x[j];
    x[i] = acc / a.at(i, i);
  }
  return x;
}

}  // namespace

std::vector<ColorSet> proper_color_subsets(int num_colors) {
  std::vector<ColorSet> out;
  const std::uint32_t full = ColorSet::full(num_colors).bits();
  for (std::uint32_t bits = 0; bits < full; ++bits) out.emplace_back(num_colors, bits);
  std::sort(out.begin(), out.end(), [](const ColorSet& a, const ColorSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
  return out;
}

SubharmonicSimplex tr_F(const KGraphSkeleton& g, const Beta& beta, const ColorSet& f) {
  if (f.is_full())
    throw std::invalid_argument("tr_F: F must be a proper subset; use finite_simplex");

  SubharmonicSimplex out;
  out.f = f;
  out.beta = beta;
  out.algebra = Algebra::Toeplitz;
  out.kind = f.is_empty() ? SimplexKind::Infinite : SimplexKind::Subharmonic;

  const ColorSet fc = f.complement();
  const auto constraints = constraints_for(g, beta, fc);
  const eigencone::ConeSimplex cone0 =
      eigencone::eigencone_vertices(g, constraints, VertexSet(g.num_vertices()));
  if (cone0.empty()) {
    out.reason = EmptyReason::InfeasibleEigencone;
    return out;
  }

  if (f.is_empty()) {
    out.generators = cone0.extreme_points;
  } else {
    const VertexSet vf = eigencone::support_of_cone(cone0, g.num_vertices());
    VertexSet v_lambda_f(g.num_vertices());
    for (int v : vf.indices())
      if (strictly_below(spectral::vertex_entropy_restricted(g, v, f), beta))
        v_lambda_f.insert(v);
    const eigencone::ConeSimplex cone =
        eigencone::eigencone_vertices(g, constraints, v_lambda_f.complement());
    if (cone.empty()) {
      out.reason = EmptyReason::EntropyFilter;
      return out;
    }
    out.generators = cone.extreme_points;
    for (const TraceVector& tau : out.generators)
      if (!strictly_below(trace_f_spectrum(g, tau, f), beta))
        throw std::logic_error("tr_F: generator violates the F-entropy criterion");
  }

  assert_annihilates_eventual_sources(g, out);
  return out;
}

SubharmonicSimplex finite_simplex(const KGraphSkeleton& g, const Beta& beta,
                                  Algebra algebra) {
  SubharmonicSimplex out;
  out.f = g.all_colors();
  out.beta = beta;
  out.algebra = algebra;
  out.kind = SimplexKind::Finite;

  const VertexSet sources = f_sources(g, g.all_colors());
  bool any_toeplitz = false;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!strictly_below(spectral::vertex_entropy(g, v).entropy, beta)) continue;
    any_toeplitz = true;
    if (algebra == Algebra::CuntzKrieger && !sources.contains(v)) continue;
    out.generators.push_back(TraceVector::delta(g.num_vertices(), v));
  }
  if (out.generators.empty())
    out.reason = any_toeplitz ? EmptyReason::TracingFilter : EmptyReason::EntropyFilter;
  return out;
}

std::vector<SubharmonicSimplex> geq_simplex(const KGraphSkeleton& g, const Beta& beta,
                                            Algebra algebra, double match_tol) {
  const spectral::TransitionSet transitions = spectral::transition_set(g);
  bool at_transition = false;
  for (const auto& entry : transitions.values)
    if (entry.subharmonic && beta_matches(entry, beta, match_tol)) at_transition = true;

  std::vector<SubharmonicSimplex> parts;
  if (at_transition) {
    for (const ColorSet& f : proper_color_subsets(g.num_colors())) {
      SubharmonicSimplex part = tr_F(g, beta, f);
      part.algebra = algebra;
      if (algebra == Algebra::CuntzKrieger && !f.is_empty()) {
        // Only traces supported off the F-tracing vertices descend.
        const VertexSet allowed = f_tracing(g, f).complement();
        std::vector<TraceVector> kept;
        for (TraceVector& tau : part.generators)
          if (tau.support().subset_of(allowed)) kept.push_back(std::move(tau));
        if (kept.empty() && !part.generators.empty())
          part.reason = EmptyReason::TracingFilter;
        part.generators = std::move(kept);
      }
      parts.push_back(std::move(part));
    }
  }
  parts.push_back(finite_simplex(g, beta, algebra));
  return parts;
}

PhaseDiagram phase_diagram(const KGraphSkeleton& g, Algebra algebra) {
  PhaseDiagram out;
  out.algebra = algebra;
  out.transitions = spectral::transition_set(g);
  out.beta_c_prime = spectral::lower_critical(g);
  out.beta_c = spectral::strong_entropy(g, g.all_colors());

  for (const auto& entry : out.transitions.values) {
    if (!entry.subharmonic) continue;
    TransitionPoint point;
    point.transition = entry;
    point.positive_beta = entry.beta.finite() && entry.beta.value() > 0.0;
    if (point.positive_beta) {
      const Beta b = entry.exact ? Beta::from_exact_exp(BigRat(entry.exact_value))
                                 : Beta::from_exp(entry.lambda);
      point.parts = geq_simplex(g, b, algebra);
    }
    out.points.push_back(std::move(point));
  }

  std::vector<double> boundaries;
  bool below_one = false;
  for (const auto& entry : out.transitions.values) {
    if (entry.subharmonic)
      boundaries.push_back(entry.beta.finite() ? std::max(0.0, entry.beta.value()) : 0.0);
    else
      below_one = true;
  }
  if (below_one) boundaries.insert(boundaries.begin(), 0.0);
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
                   boundaries.end());

  for (size_t i = 0; i < boundaries.size(); ++i) {
    Interval iv;
    iv.beta_lo = boundaries[i];
    if (i + 1 < boundaries.size()) iv.beta_hi = boundaries[i + 1];
    iv.representative_exp = iv.beta_hi
                                ? std::sqrt(std::exp(iv.beta_lo) * std::exp(*iv.beta_hi))
                                : 2.0 * std::exp(iv.beta_lo);
    const SubharmonicSimplex fin =
        finite_simplex(g, Beta::from_exp(iv.representative_exp), algebra);
    iv.finite_generators = VertexSet(g.num_vertices());
    for (const TraceVector& tau : fin.generators)
      iv.finite_generators = iv.finite_generators.unite(tau.support());
    out.intervals.push_back(std::move(iv));
  }
  return out;
}

KMSVector kms_vector(const KGraphSkeleton& g, const TraceVector& tau, const Beta& beta,
                     const ColorSet& f) {
  const int n = g.num_vertices();
  if (tau.size() != n) throw std::invalid_argument("kms_vector: trace has wrong length");
  KMSVector out;
  out.f = f;
  out.beta = beta;
  out.tau = tau;

  if (f.is_empty()) {
    out.m = tau.values;
    out.c = 1.0;
    out.subgraph = tau.support();
    return out;
  }

  const VertexSet supp = tau.support();
  if (supp.empty()) throw EmptyTraceError();

  VertexSet seed;
  if (f.is_full()) {
    // Finite type: resolve over the closure of the whole finite-type vertex
    // set, so one subgraph serves every generator of the interval.
    seed = VertexSet(n);
    for (int v = 0; v < n; ++v)
      if (strictly_below(spectral::vertex_entropy(g, v).entropy, beta)) seed.insert(v);
    if (!supp.subset_of(seed))
      throw TauNotInSimplexError("entropy",
                                 "tau is supported outside the finite-type vertex set");
  } else {
    seed = supp;
  }

  const VertexSet h_set = forward_closure(g, seed, f);
  const std::vector<int> idx = h_set.indices();

  for (int i : f.members()) {
    const spectral::SpectrumValue w =
        spectral::weighted_radius_on(g, h_set, ColorSet::of(g.num_colors(), {i}));
    if (!strictly_below(w, beta)) {
      std::ostringstream os;
      os << "rho(H^(" << (i + 1) << ")) = " << w.lambda << " is not below e^{s_i beta} = "
         << std::exp(g.weight(i) * beta.value);
      throw SingularResolventError(i, os.str());
    }
  }

  // x = prod over i in F of (I - e^{-s_i beta} H^(i))^{-1} applied to tau|_H.
  const int h = static_cast<int>(idx.size());
  std::vector<double> x(h, 0.0);
  for (int k = 0; k < h; ++k) x[k] = tau.values[idx[k]];
  for (int i : f.members()) {
    const double scale = std::exp(-g.weight(i) * beta.value);
    Mat<double> a = Mat<double>::identity(h);
    const Mat<double> hm = to_double_matrix(g.matrix(i).submatrix(h_set));
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) a.at(r, c) -= scale * hm.at(r, c);
    x = solve_dense(std::move(a), std::move(x), i);
  }

  double c = 0.0;
  for (double v : x) c += v;
  out.c = c;
  out.m.assign(n, 0.0);
  for (int k = 0; k < h; ++k) out.m[idx[k]] = x[k] / c;
  out.subgraph = h_set;
  return out;
}

double evaluate_state(const KGraphSkeleton& g, const KMSVector& kv, const Multidegree& n,
                      int v) {
  if (n.num_colors() != g.num_colors())
    throw std::invalid_argument("evaluate_state: multidegree has wrong length");
  if (!n.valid()) throw std::invalid_argument("evaluate_state: negative degree entry");
  if (v < 0 || v >= g.num_vertices())
    throw std::invalid_argument("evaluate_state: vertex out of range");
  double weighted_length = 0.0;
  for (int i = 0; i < g.num_colors(); ++i) weighted_length += n.entries[i] * g.weight(i);
  return std::exp(-weighted_length * kv.beta.value) * kv.m[v];
}

std::vector<double> defect_vector(const KGraphSkeleton& g, const KMSVector& kv, int color) {
  if (color < 0 || color >= g.num_colors())
    throw std::invalid_argument("defect_vector: colour out of range");
  const Mat<double> lam = to_double_matrix(g.matrix(color));
  const double scale = std::exp(-g.weight(color) * kv.beta.value);
  const int n = g.num_vertices();
  std::vector<double> d(n, 0.0);
  for (int t = 0; t < n; ++t) {
    double acc = 0.0;
    for (int s = 0; s < n; ++s) acc += lam.at(t, s) * kv.m[s];
    d[t] = kv.m[t] - scale * acc;
    if (d[t] < -kCompareTol) {
      std::ostringstream os;
      os << "negative subinvariance defect " << d[t] << " at vertex " << g.label(t)
         << " in colour " << (color + 1);
      throw NegativeDefectError(os.str());
    }
  }
  return d;
}

void check_tr_membership(const KGraphSkeleton& g, const TraceVector& tau, const Beta& beta,
                         const ColorSet& f) {
  if (!tau.nonnegative())
    throw TauNotInSimplexError("nonnegativity", "tau has a negative entry");
  if (!tau.normalized())
    throw TauNotInSimplexError("normalization", "tau does not sum to 1");
  if (!f.is_full()) {
    for (int j : f.complement().members()) {
      const double lambda_j = std::exp(g.weight(j) * beta.value);
      const Mat<double> lam = to_double_matrix(g.matrix(j));
      for (int t = 0; t < g.num_vertices(); ++t) {
        double acc = 0.0;
        for (int s = 0; s < g.num_vertices(); ++s) acc += lam.at(t, s) * tau.values[s];
        if (std::abs(acc - lambda_j * tau.values[t]) > kCompareTol * std::max(1.0, lambda_j)) {
          std::ostringstream os;
          os << "tau is not an eigenvector of colour " << (j + 1) << " at " << lambda_j;
          throw TauNotInSimplexError("eigenvector", os.str());
        }
      }
    }
  }
  if (!f.is_empty()) {
    if (!strictly_below(trace_f_spectrum(g, tau, f), beta))
      throw TauNotInSimplexError("entropy", "F-entropy of tau is not strictly below beta");
  }
}

}  // namespace kgraph::kms
