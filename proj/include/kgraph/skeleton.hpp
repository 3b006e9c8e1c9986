#pragma once

#include "kgraph/matrix.hpp"
#include "kgraph/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace kgraph {

struct Violation {
  enum class Kind {
    ParseError,
    NonSquare,
    DimensionMismatch,
    NegativeEntry,
    NonCommuting,
    NonpositiveWeight,
  };
  Kind kind;
  int color_i = -1;  // 0-based colours involved, -1 when not applicable
  int color_j = -1;
  int row = -1;  // offending entry, -1 when not applicable
  int col = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

std::string to_string(Violation::Kind k);

/// Candidate input before validation: whatever was parsed from the file.
struct RawSkeleton {
  int num_colors = 0;
  std::vector<std::string> vertex_labels;
  std::vector<IntMatrix> matrices;  // [colour], entry (t, s)
  std::vector<double> weights;      // empty = all ones
};

/// Finite higher-rank graph skeleton: N pairwise commuting nonnegative
/// integer adjacency matrices over a common vertex list, plus positive
/// per-colour weights (all ones by default). Immutable after construction.
class KGraphSkeleton {
 public:
  int num_colors() const { return static_cast<int>(matrices_.size()); }
  int num_vertices() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& vertex_labels() const { return labels_; }
  const std::string& label(int v) const { return labels_[v]; }
  const IntMatrix& matrix(int color) const { return matrices_[color]; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int color) const { return weights_[color]; }
  bool unit_weights() const {
    for (double s : weights_)
      if (s != 1.0) return false;
    return true;
  }

  ColorSet all_colors() const { return ColorSet::full(num_colors()); }
  VertexSet all_vertices() const { return VertexSet::all(num_vertices()); }

  /// Same skeleton with the weights replaced (values must be positive).
  KGraphSkeleton with_weights(std::vector<double> weights) const;

  friend std::variant<KGraphSkeleton, ValidationReport> validate_skeleton(
      const RawSkeleton& raw);

 private:
  KGraphSkeleton() = default;
  std::vector<std::string> labels_;
  std::vector<IntMatrix> matrices_;
  std::vector<double> weights_;
};

/// Checks squareness, common dimension, nonnegativity, exact pairwise
/// commutation and weight positivity; reports every violation found.
std::variant<KGraphSkeleton, ValidationReport> validate_skeleton(const RawSkeleton& raw);

/// prod_i (Lambda^(i))^(n_i); entry (t, s) counts degree-n paths from s to t.
IntMatrix degree_matrix(const KGraphSkeleton& g, const Multidegree& n);

/// Vertices reachable from `seed` by paths coloured inside `colors`
/// (trivial paths included, so the result contains the seed).
VertexSet forward_closure(const KGraphSkeleton& g, const VertexSet& seed,
                          const ColorSet& colors);

/// Subgraph on a forward-closed vertex set, with all connecting edges.
/// Throws NotForwardClosedError with a witness edge otherwise.
KGraphSkeleton restrict_to(const KGraphSkeleton& g, const VertexSet& w);

/// Vertices receiving no edge of any colour in F.
VertexSet f_sources(const KGraphSkeleton& g, const ColorSet& f);

/// Vertices receiving no path of degree k*1_F for large k; k = |V| suffices.
VertexSet eventual_f_sources(const KGraphSkeleton& g, const ColorSet& f);

/// Complement of the F^c-closure of the F-sources.
VertexSet f_tracing(const KGraphSkeleton& g, const ColorSet& f);

/// Graph file I/O (JSON): {"colors": N, "vertices": [...],
/// "matrices": [[[int]]], "weights": [...]?}, matrices[colour][target][source].
std::variant<KGraphSkeleton, ValidationReport> load_skeleton(const std::string& path);
std::variant<RawSkeleton, ValidationReport> parse_raw_skeleton(const std::string& text,
                                                               const std::string& origin);

}  // namespace kgraph
