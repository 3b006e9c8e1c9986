#pragma once

#include "kgraph/skeleton.hpp"

#include <optional>
#include <vector>

namespace kgraph::eigencone {

/// One eigenvalue constraint: Lambda^(color) x = lambda x. The exact value
/// rides along when lambda is certified rational.
struct EigenConstraint {
  int color = -1;
  double lambda = 0.0;
  std::optional<BigRat> exact;
};

/// Extreme points of P = {x >= 0, sum x = 1, (Lambda^(i) - lambda_i I)x = 0
/// for the constrained colours, x_v = 0 on forbidden}, enumerated over
/// candidate supports in lexicographic vertex order.
struct ConeSimplex {
  std::vector<EigenConstraint> constraints;
  std::vector<TraceVector> extreme_points;
  bool exact = false;

  bool empty() const { return extreme_points.empty(); }
};

ConeSimplex eigencone_vertices(const KGraphSkeleton& g,
                               const std::vector<EigenConstraint>& constraints,
                               const VertexSet& forbidden,
                               int enumeration_cap = kDefaultEnumerationCap);

/// Union of the supports of the extreme points.
VertexSet support_of_cone(const ConeSimplex& c, int num_vertices);

struct CommonEigenvector {
  TraceVector vector;
  std::vector<double> eigenvalues;  // one per colour
  std::vector<std::optional<BigRat>> exact_eigenvalues;
};

/// One simultaneous nonnegative eigenvector with its eigenvalue tuple. Starts
/// from the eigencone of a colour attaining rho(Lambda) and descends through
/// nested cone intersections; existence is guaranteed for commuting
/// nonnegative families, so failure aborts with diagnostics.
CommonEigenvector common_eigenvector(const KGraphSkeleton& g);

}  // namespace kgraph::eigencone
