#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgraph {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Numeric policy: bracket width for Perron iterations, general comparisons,
// and vertex deduplication. Comparisons use kCompareTol unless stated.
inline constexpr double kBracketTol = 1e-12;
inline constexpr double kCompareTol = 1e-9;
inline constexpr double kDedupTol = 1e-8;
inline constexpr int kPerronBudget = 100000;
inline constexpr int kDefaultEnumerationCap = 20;

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct EmptyColorSetError : Error {
  EmptyColorSetError() : Error("EmptyColorSet", "colour set must be nonempty") {}
};

struct EmptyInputError : Error {
  EmptyInputError() : Error("EmptyInput", "vertex set must be nonempty") {}
};

struct EmptyTraceError : Error {
  EmptyTraceError() : Error("EmptyTrace", "trace vector has empty support") {}
};

struct EmptyConeError : Error {
  EmptyConeError() : Error("EmptyCone", "cone has no extreme points") {}
};

struct NotForwardClosedError : Error {
  NotForwardClosedError(int color, int from, int to, const std::string& msg)
      : Error("NotForwardClosed", msg), color(color), from(from), to(to) {}
  int color, from, to;  // witness edge leaving the set, 0-based
};

struct NonConvergenceError : Error {
  explicit NonConvergenceError(const std::string& msg) : Error("NonConvergence", msg) {}
};

struct DimensionTooLargeError : Error {
  explicit DimensionTooLargeError(const std::string& msg)
      : Error("DimensionTooLarge", msg) {}
};

struct BudgetExceededError : Error {
  explicit BudgetExceededError(const std::string& msg) : Error("BudgetExceeded", msg) {}
};

struct SingularResolventError : Error {
  SingularResolventError(int color, const std::string& msg)
      : Error("SingularResolvent", msg), color(color) {}
  int color;
};

struct NegativeDefectError : Error {
  explicit NegativeDefectError(const std::string& msg) : Error("NegativeDefect", msg) {}
};

struct TauNotInSimplexError : Error {
  TauNotInSimplexError(std::string criterion, const std::string& msg)
      : Error("TauNotInSimplex", msg), criterion(std::move(criterion)) {}
  std::string criterion;  // which membership criterion failed
};

struct NotFoundError : Error {
  explicit NotFoundError(const std::string& msg) : Error("NotFound", msg) {}
};

/// Subset of the colour indices {0, ..., N-1}. Reports and files use 1-based
/// labels; conversion happens at the I/O boundary only.
class ColorSet {
 public:
  ColorSet() = default;
  ColorSet(int num_colors, std::uint32_t bits) : n_(num_colors), bits_(bits) {}

  static ColorSet empty(int num_colors) { return ColorSet(num_colors, 0); }
  static ColorSet full(int num_colors) {
    return ColorSet(num_colors, num_colors >= 32 ? ~0u : ((1u << num_colors) - 1u));
  }
  static ColorSet of(int num_colors, std::initializer_list<int> members) {
    std::uint32_t b = 0;
    for (int i : members) b |= (1u << i);
    return ColorSet(num_colors, b);
  }
  static ColorSet of(int num_colors, const std::vector<int>& members) {
    std::uint32_t b = 0;
    for (int i : members) b |= (1u << i);
    return ColorSet(num_colors, b);
  }

  int num_colors() const { return n_; }
  bool contains(int i) const { return (bits_ >> i) & 1u; }
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const { return bits_ == full(n_).bits_; }
  int size() const { return __builtin_popcount(bits_); }
  std::uint32_t bits() const { return bits_; }

  ColorSet complement() const { return ColorSet(n_, full(n_).bits_ & ~bits_); }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  bool operator==(const ColorSet& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  int n_ = 0;
  std::uint32_t bits_ = 0;
};

/// Subset of the vertices, a bitset over the file's vertex order.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int num_vertices) : bits_(num_vertices, false) {}

  static VertexSet all(int num_vertices) {
    VertexSet s(num_vertices);
    s.bits_.assign(num_vertices, true);
    return s;
  }
  static VertexSet of(int num_vertices, std::initializer_list<int> members) {
    VertexSet s(num_vertices);
    for (int v : members) s.bits_[v] = true;
    return s;
  }
  static VertexSet of(int num_vertices, const std::vector<int>& members) {
    VertexSet s(num_vertices);
    for (int v : members) s.bits_[v] = true;
    return s;
  }

  int num_vertices() const { return static_cast<int>(bits_.size()); }
  bool contains(int v) const { return bits_[v]; }
  void insert(int v) { bits_[v] = true; }
  void erase(int v) { bits_[v] = false; }
  bool empty() const {
    for (bool b : bits_)
      if (b) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (bool b : bits_) c += b ? 1 : 0;
    return c;
  }

  VertexSet complement() const {
    VertexSet s = *this;
    for (auto&& b : s.bits_) b = !b;
    return s;
  }
  VertexSet unite(const VertexSet& o) const {
    VertexSet s = *this;
    for (int v = 0; v < num_vertices(); ++v)
      if (o.bits_[v]) s.bits_[v] = true;
    return s;
  }
  VertexSet intersect(const VertexSet& o) const {
    VertexSet s(num_vertices());
    for (int v = 0; v < num_vertices(); ++v) s.bits_[v] = bits_[v] && o.bits_[v];
    return s;
  }
  bool subset_of(const VertexSet& o) const {
    for (int v = 0; v < num_vertices(); ++v)
      if (bits_[v] && !o.bits_[v]) return false;
    return true;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
      if (bits_[v]) out.push_back(v);
    return out;
  }

  bool operator==(const VertexSet& o) const { return bits_ == o.bits_; }

 private:
  std::vector<bool> bits_;
};

/// Edge multiplicity per colour of a path class; entries are >= 0.
struct Multidegree {
  std::vector<int> entries;

  Multidegree() = default;
  explicit Multidegree(std::vector<int> e) : entries(std::move(e)) {}
  static Multidegree zero(int num_colors) {
    return Multidegree(std::vector<int>(num_colors, 0));
  }

  int num_colors() const { return static_cast<int>(entries.size()); }
  long long total() const {
    long long t = 0;
    for (int e : entries) t += e;
    return t;
  }
  // n is supported on F when every nonzero coordinate lies in F.
  bool supported_on(const ColorSet& f) const {
    for (int i = 0; i < num_colors(); ++i)
      if (entries[i] != 0 && !f.contains(i)) return false;
    return true;
  }
  bool valid() const {
    for (int e : entries)
      if (e < 0) return false;
    return true;
  }
};

/// Log-scale quantity that may be -infinity (nilpotent/empty case). Kept as a
/// distinguished state so -inf can never leak into float comparisons.
class LogValue {
 public:
  static LogValue neg_inf() { return LogValue(); }
  static LogValue of(double v) {
    LogValue x;
    x.finite_ = true;
    x.v_ = v;
    return x;
  }

  bool finite() const { return finite_; }
  double value() const {
    if (!finite_) throw std::logic_error("LogValue: value() on -inf");
    return v_;
  }
  double value_or(double fallback) const { return finite_ ? v_ : fallback; }
  double exp_or_zero() const { return finite_ ? std::exp(v_) : 0.0; }

  bool operator<(const LogValue& o) const {
    if (!finite_) return o.finite_;
    if (!o.finite_) return false;
    return v_ < o.v_;
  }
  bool less_than(double x) const { return !finite_ || v_ < x; }

  static LogValue max(const LogValue& a, const LogValue& b) { return a < b ? b : a; }

 private:
  bool finite_ = false;
  double v_ = 0.0;
};

/// l1-normalized nonnegative vector over the vertices; stands for a tracial
/// state on the diagonal. Exact rational values ride along when the producing
/// pipeline ran in exact mode.
struct TraceVector {
  std::vector<double> values;
  std::optional<std::vector<BigRat>> exact;

  TraceVector() = default;
  explicit TraceVector(std::vector<double> v) : values(std::move(v)) {}

  static TraceVector delta(int num_vertices, int v) {
    TraceVector t(std::vector<double>(num_vertices, 0.0));
    t.values[v] = 1.0;
    std::vector<BigRat> e(num_vertices, BigRat(0));
    e[v] = 1;
    t.exact = std::move(e);
    return t;
  }

  int size() const { return static_cast<int>(values.size()); }

  VertexSet support(double tol = kCompareTol) const {
    VertexSet s(size());
    for (int v = 0; v < size(); ++v)
      if (values[v] > tol) s.insert(v);
    return s;
  }

  double l1_norm() const {
    double s = 0.0;
    for (double x : values) s += std::abs(x);
    return s;
  }
  bool normalized(double tol = kCompareTol) const {
    return std::abs(l1_norm() - 1.0) <= tol;
  }
  bool nonnegative(double tol = kCompareTol) const {
    for (double x : values)
      if (x < -tol) return false;
    return true;
  }

  double linf_distance(const TraceVector& o) const {
    double d = 0.0;
    for (int v = 0; v < size(); ++v) d = std::max(d, std::abs(values[v] - o.values[v]));
    return d;
  }
};

// log of a positive big integer, safe for values far beyond double range.
inline double log_bigint(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log_bigint: nonpositive argument");
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits <= 52) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 52;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double to_double(const BigRat& q) { return q.convert_to<double>(); }

}  // namespace kgraph
