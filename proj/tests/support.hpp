#pragma once

#include "kgraph/kms.hpp"
#include "kgraph/skeleton.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace testsupport {

using namespace kgraph;

inline IntMatrix make_matrix(int n, std::initializer_list<long long> entries) {
  IntMatrix m(n, n);
  auto it = entries.begin();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = BigInt(*it++);
  return m;
}

inline KGraphSkeleton make_skeleton(std::vector<std::string> labels,
                                    std::vector<IntMatrix> matrices,
                                    std::vector<double> weights = {}) {
  RawSkeleton raw;
  raw.num_colors = static_cast<int>(matrices.size());
  raw.vertex_labels = std::move(labels);
  raw.matrices = std::move(matrices);
  raw.weights = std::move(weights);
  auto result = validate_skeleton(raw);
  if (std::holds_alternative<ValidationReport>(result)) {
    std::ostringstream os;
    os << "fixture failed validation:";
    for (const auto& v : std::get<ValidationReport>(result).violations)
      os << " " << v.detail << ";";
    throw std::runtime_error(os.str());
  }
  return std::get<KGraphSkeleton>(std::move(result));
}

// Vertex order (v1, v2, v3); rho per vertex closure: 5, 4, 2.
inline KGraphSkeleton ex1() {
  return make_skeleton({"v1", "v2", "v3"},
                       {make_matrix(3, {5, 0, 0, 0, 4, 0, 3, 2, 2}),
                        make_matrix(3, {4, 0, 0, 0, 3, 0, 2, 1, 2})});
}

// ex1 with the cycles at v2 removed: v2 becomes a source.
inline KGraphSkeleton ex2() {
  return make_skeleton({"v1", "v2", "v3"},
                       {make_matrix(3, {5, 0, 0, 0, 0, 0, 3, 2, 2}),
                        make_matrix(3, {4, 0, 0, 0, 0, 0, 2, 2, 2})});
}

inline KGraphSkeleton single_loop() {
  return make_skeleton({"v"}, {make_matrix(1, {1}), make_matrix(1, {1})});
}

inline KGraphSkeleton nilpotent_pair() {
  return make_skeleton({"a", "b"}, {make_matrix(2, {0, 1, 0, 0})});
}

inline TraceVector trace(std::vector<double> v) { return TraceVector(std::move(v)); }

/// Random block lower-triangular commuting families: each colour is a small
/// nonnegative-integer polynomial in one lower-triangular base matrix, so
/// commutation is automatic and the family is exactly reducible.
struct FamilyGenerator {
  std::mt19937 rng;

  explicit FamilyGenerator(unsigned seed) : rng(seed) {}

  KGraphSkeleton next() {
    std::uniform_int_distribution<int> size_dist(2, 6);
    std::uniform_int_distribution<int> colors_dist(1, 3);
    std::uniform_int_distribution<int> entry_dist(0, 2);
    std::uniform_int_distribution<int> coeff_dist(0, 2);
    std::bernoulli_distribution sparse(0.55);

    const int n = size_dist(rng);
    const int nc = colors_dist(rng);

    IntMatrix base(n, n);
    for (int t = 0; t < n; ++t)
      for (int s = 0; s <= t; ++s)
        base.at(t, s) = sparse(rng) ? BigInt(0) : BigInt(entry_dist(rng));

    const IntMatrix base2 = base * base;
    std::vector<IntMatrix> matrices;
    for (int i = 0; i < nc; ++i) {
      IntMatrix m(n, n);
      BigInt c0(coeff_dist(rng)), c1(coeff_dist(rng)), c2(coeff_dist(rng));
      if (c0 == 0 && c1 == 0 && c2 == 0) c1 = 1;
      for (int t = 0; t < n; ++t)
        for (int s = 0; s < n; ++s) {
          BigInt e = c1 * base.at(t, s) + c2 * base2.at(t, s);
          if (t == s) e += c0;
          m.at(t, s) = e;
        }
      matrices.push_back(std::move(m));
    }
    std::vector<std::string> labels;
    for (int v = 0; v < n; ++v) labels.push_back("u" + std::to_string(v + 1));
    return make_skeleton(std::move(labels), std::move(matrices));
  }
};

/// Exact membership of x in the convex hull of `points` (Caratheodory over
/// rational barycentric systems). Test-only; used for extreme-point checks.
bool in_convex_hull_exact(const std::vector<std::vector<BigRat>>& points,
                          const std::vector<BigRat>& x);

/// Affine independence of a family of exact vectors.
bool affinely_independent_exact(const std::vector<std::vector<BigRat>>& points);

/// Exact rationals of a TraceVector; falls back to small-denominator
/// reconstruction of the doubles when the exact channel is absent.
std::vector<BigRat> exact_values(const TraceVector& t);

}  // namespace testsupport
