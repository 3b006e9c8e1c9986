#pragma once

#include "kgraph/skeleton.hpp"

#include <vector>

namespace kgraph::spectral {

/// Perron-Frobenius data of one nonnegative integer matrix. The spectral
/// radius is computed per irreducible component (power iteration on C + I
/// with Collatz-Wielandt ratio brackets) and certified exact when an integer
/// candidate has a nonnegative rational kernel vector.
struct PerronResult {
  double rho = 0.0;
  bool is_exact_integer = false;
  BigInt exact_value;      // valid when is_exact_integer
  double lower = 0.0;      // Collatz-Wielandt bracket of the achieving component
  double upper = 0.0;
  std::vector<double> component_roots;        // per component, sorted by min vertex
  std::vector<bool> component_exact;          // parallel to component_roots
  std::vector<BigInt> component_exact_value;  // parallel, valid where exact
  std::vector<std::vector<int>> components;   // vertex lists (indices into the matrix)
};

PerronResult perron_root(const IntMatrix& m);

/// Strongly connected components of the digraph of m (edge s -> t when
/// m(t,s) != 0), each sorted, listed by smallest vertex.
std::vector<std::vector<int>> strongly_connected_components(const IntMatrix& m);

/// max over colours of the per-colour spectral radius.
double rho_graph(const KGraphSkeleton& g);

/// A log-scale spectral quantity together with its exponential; lambda is
/// snapped to the certified integer when exactness is established.
struct SpectrumValue {
  LogValue beta;  // -inf when every contributing colour is nilpotent
  double lambda = 0.0;
  bool exact = false;
  BigInt exact_value;
};

/// max over i in F of log rho(H^(i)) / s_i for the given (sub)skeleton.
SpectrumValue weighted_radius(const KGraphSkeleton& g, const ColorSet& f);

/// Same over the i-submatrices on w. Callers pass F-forward closures: paths
/// coloured in F starting inside w then stay inside w, which is all the
/// growth-rate computation needs (w need not be closed for other colours).
SpectrumValue weighted_radius_on(const KGraphSkeleton& g, const VertexSet& w,
                                 const ColorSet& f);

struct VertexEntropy {
  SpectrumValue entropy;  // weighted entropy of delta_v
  double radius = 0.0;    // unweighted rho of the forward closure of {v}
};

/// Entropy of delta_v: spectral data of the forward closure of {v}.
VertexEntropy vertex_entropy(const KGraphSkeleton& g, int v);

/// Same, with both the closure and the entropy restricted to colours in F.
SpectrumValue vertex_entropy_restricted(const KGraphSkeleton& g, int v, const ColorSet& f);

struct TransitionEntry {
  double lambda = 0.0;  // e^beta of the transition
  LogValue beta;
  int witness = -1;  // vertex whose closure realizes the value
  bool exact = false;
  BigInt exact_value;
  bool subharmonic = false;  // lambda >= 1: a positive-temperature transition
};

/// The transition set: per-vertex closure radii, deduplicated, sorted
/// ascending. Covers all sink subgraphs since rho of a sink subgraph is the
/// max of the per-vertex values over its vertices.
struct TransitionSet {
  std::vector<TransitionEntry> values;
  double max_lambda = 0.0;

  std::vector<double> lambdas() const {
    std::vector<double> out;
    for (const auto& e : values) out.push_back(e.lambda);
    return out;
  }
};

TransitionSet transition_set(const KGraphSkeleton& g);

/// max over i in F of log rho(Lambda^(i)) / s_i.
LogValue strong_entropy(const KGraphSkeleton& g, const ColorSet& f);

/// Strong F-entropy of the F-closure of supp tau.
LogValue tracial_entropy(const KGraphSkeleton& g, const TraceVector& tau, const ColorSet& f);

/// max{0, min_v vertex entropy}: no equilibrium states strictly below it.
double lower_critical(const KGraphSkeleton& g);

struct EntropyReport {
  std::vector<std::pair<ColorSet, LogValue>> strong;  // per requested F
  std::optional<LogValue> tracial;                    // when a trace was supplied
  double lower_critical = 0.0;
  bool weighted = false;
};

EntropyReport entropy_report(const KGraphSkeleton& g,
                             const std::vector<ColorSet>& requested,
                             const TraceVector* tau = nullptr,
                             const ColorSet* tau_f = nullptr);

}  // namespace kgraph::spectral
