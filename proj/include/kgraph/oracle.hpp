#pragma once

#include "kgraph/kms.hpp"
#include "kgraph/skeleton.hpp"

#include <vector>

namespace kgraph::oracle {

/// Partial data of a nonnegative series: (k, value) pairs plus the last
/// estimate and whether successive terms dropped below tolerance.
struct SeriesTrace {
  std::vector<std::pair<int, double>> terms;
  double limit_estimate = 0.0;
  bool converged = false;
};

/// Number of paths of length k supported on F, by exact integer counting
/// over all multidegrees |n| = k with n in F.
BigInt path_count(const KGraphSkeleton& g, int k, const ColorSet& f);

/// (1/k) log B_{k,F} for k = 1..kmax; approaches the strong F-entropy from
/// below (slowly: the gap decays like log(k)/k).
SeriesTrace entropy_estimate(const KGraphSkeleton& g, const ColorSet& f, int kmax);

/// Partial sums of c_{tau,beta}^F by direct path counting; converged when the
/// k-th increment falls below 1e-12.
SeriesTrace c_partial(const KGraphSkeleton& g, const TraceVector& tau, double beta,
                      const ColorSet& f, int kmax);

/// Recomputes the Tr_beta^F generators from scratch: exhaustive support
/// enumeration with this module's own exact rational elimination. Requires
/// |V| <= 8, an exact e^beta, and unit weights.
std::vector<TraceVector> brute_simplex(const KGraphSkeleton& g, const BigRat& exp_beta,
                                       const ColorSet& f);

}  // namespace kgraph::oracle
