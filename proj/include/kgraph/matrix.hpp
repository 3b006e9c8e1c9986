#pragma once

#include "kgraph/types.hpp"

#include <algorithm>
#include <vector>

namespace kgraph {

/// Dense row-major matrix. Adjacency convention throughout: entry (t, s) is
/// the number of edges from vertex s to vertex t.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  bool row_is_zero(int r) const {
    for (int c = 0; c < cols_; ++c)
      if (at(r, c) != T(0)) return false;
    return true;
  }
  bool is_zero() const {
    for (const T& x : data_)
      if (x != T(0)) return false;
    return true;
  }

  Mat transpose() const {
    Mat m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
  }

  Mat operator*(const Mat& o) const {
    Mat m(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int k = 0; k < cols_; ++k) {
        const T& a = at(r, k);
        if (a == T(0)) continue;
        for (int c = 0; c < o.cols_; ++c) m.at(r, c) += a * o.at(k, c);
      }
    return m;
  }

  Mat operator+(const Mat& o) const {
    Mat m(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] + o.data_[i];
    return m;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    std::vector<T> y(rows_, T(0));
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) y[r] += at(r, c) * x[c];
    return y;
  }

  Mat pow(long long k) const {
    Mat result = identity(rows_);
    Mat base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  /// Submatrix on the vertices of w, in ascending index order.
  Mat submatrix(const VertexSet& w) const {
    const std::vector<int> idx = w.indices();
    Mat m(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < idx.size(); ++c) m.at(r, c) = at(idx[r], idx[c]);
    return m;
  }

  template <typename U, typename F>
  Mat<U> map(F f) const {
    Mat<U> m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m.at(r, c) = f(at(r, c));
    return m;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  T sum() const {
    T s(0);
    for (const T& x : data_) s += x;
    return s;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Mat<BigInt>;
using RatMatrix = Mat<BigRat>;

inline Mat<double> to_double_matrix(const IntMatrix& m) {
  return m.map<double>([](const BigInt& x) { return x.convert_to<double>(); });
}

inline RatMatrix to_rational_matrix(const IntMatrix& m) {
  return m.map<BigRat>([](const BigInt& x) { return BigRat(x); });
}

}  // namespace kgraph
