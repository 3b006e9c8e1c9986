#pragma once

#include "kgraph/eigencone.hpp"
#include "kgraph/spectral.hpp"

#include <optional>
#include <vector>

namespace kgraph::kms {

/// Inverse temperature. Carries e^beta alongside, plus the exact rational
/// value when beta was specified as an exact e^beta, so membership in the
/// transition set can be decided exactly.
struct Beta {
  double value = 0.0;      // beta > 0
  double exp_value = 1.0;  // e^beta
  enum class Spec { Raw, Exp };
  Spec specified_as = Spec::Raw;
  std::optional<BigRat> exact_exp;

  static Beta from_value(double beta);
  static Beta from_exp(double exp_beta);
  static Beta from_exact_exp(const BigRat& exp_beta);
};

enum class Algebra { Toeplitz, CuntzKrieger };
enum class SimplexKind { Finite, Subharmonic, Infinite };
enum class EmptyReason {
  None,
  InfeasibleEigencone,
  EntropyFilter,
  TracingFilter,
  OffTransition,
};

std::string to_string(Algebra a);
std::string to_string(SimplexKind k);
std::string to_string(EmptyReason r);

/// One component of the equilibrium simplex at beta: F = full set is the
/// finite type, F = empty the infinite type, anything else subharmonic of
/// type F. Represented by its extreme points.
struct SubharmonicSimplex {
  ColorSet f;
  Beta beta;
  Algebra algebra = Algebra::Toeplitz;
  SimplexKind kind = SimplexKind::Finite;
  std::vector<TraceVector> generators;
  EmptyReason reason = EmptyReason::None;

  bool empty() const { return generators.empty(); }
};

/// Tr_beta^F: eigencone at e^{s_j beta} for colours outside F, restricted to
/// supports whose F-entropy lies strictly below beta. F = empty gives the
/// averaging set (no entropy filter). F must be a proper subset.
SubharmonicSimplex tr_F(const KGraphSkeleton& g, const Beta& beta, const ColorSet& f);

/// Finite-type generators {delta_v : rho of the closure of v < e^beta};
/// the Cuntz-Krieger quotient additionally requires v to be a source.
SubharmonicSimplex finite_simplex(const KGraphSkeleton& g, const Beta& beta, Algebra algebra);

/// All components at beta: the finite part always, the proper-F parts only
/// when e^beta matches a transition value (they are provably empty
/// otherwise). Parts are ordered by (|F|, lexicographic F).
std::vector<SubharmonicSimplex> geq_simplex(const KGraphSkeleton& g, const Beta& beta,
                                            Algebra algebra,
                                            double match_tol = kCompareTol);

struct TransitionPoint {
  spectral::TransitionEntry transition;
  bool positive_beta = false;  // lambda = 1 sits at beta = 0, outside beta > 0
  std::vector<SubharmonicSimplex> parts;
};

struct Interval {
  double beta_lo = 0.0;
  std::optional<double> beta_hi;  // nullopt = +infinity
  double representative_exp = 0.0;
  VertexSet finite_generators;  // delta_v generators, constant on the interval
};

struct PhaseDiagram {
  Algebra algebra = Algebra::Toeplitz;
  double beta_c_prime = 0.0;  // lower critical value
  LogValue beta_c;            // log rho, -inf when every colour is nilpotent
  spectral::TransitionSet transitions;
  std::vector<TransitionPoint> points;
  std::vector<Interval> intervals;
};

PhaseDiagram phase_diagram(const KGraphSkeleton& g, Algebra algebra);

/// Values phi_tau(T_v) of the induced state, with the normalization constant:
/// m = (prod over i in F of (I - e^{-s_i beta} H^(i))^{-1} tau|_H) / c on the
/// supporting subgraph H, zero off it.
struct KMSVector {
  std::vector<double> m;
  double c = 1.0;
  ColorSet f;
  Beta beta;
  TraceVector tau;
  VertexSet subgraph;
};

KMSVector kms_vector(const KGraphSkeleton& g, const TraceVector& tau, const Beta& beta,
                     const ColorSet& f);

/// phi_tau(T_lambda T_lambda^*) for any path of degree n with source v.
double evaluate_state(const KGraphSkeleton& g, const KMSVector& kv, const Multidegree& n,
                      int v);

/// Entrywise phi(T_v Q_{1_i}) = m - e^{-s_i beta} Lambda^(i) m. Nonnegative
/// for KMS vectors; identically zero exactly off F.
std::vector<double> defect_vector(const KGraphSkeleton& g, const KMSVector& kv, int color);

/// Membership of tau in Tr_beta^F; throws TauNotInSimplexError naming the
/// violated criterion (nonnegativity | normalization | eigenvector | entropy).
void check_tr_membership(const KGraphSkeleton& g, const TraceVector& tau, const Beta& beta,
                         const ColorSet& f);

/// Proper subsets of {0..N-1} ordered by (size, lexicographic members).
std::vector<ColorSet> proper_color_subsets(int num_colors);

}  // namespace kgraph::kms
