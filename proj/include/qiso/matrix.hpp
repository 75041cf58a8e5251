#pragma once

// Dense row-major matrices over R or Cx<R>, with Gaussian elimination that is
// exact for rationals and partial-pivoted (with a zero threshold) for doubles.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iterator>
#include <map>
#include <cstddef>
#include <optional>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/numeric.hpp"

namespace qiso {

namespace detail {

template <class T>
struct ScalarOf;
template <Field R>
struct ScalarOf<R> {
  using type = R;
};
template <Field R>
struct ScalarOf<Cx<R>> {
  using type = R;
};

template <Field R>
double magnitude(const R& x) {
  return std::abs(to_double(x));
}
template <Field R>
double magnitude(const Cx<R>& z) {
  return abs_double(z);
}

template <Field R>
bool exactly_zero(const R& x) {
  return x == 0;
}
template <Field R>
bool exactly_zero(const Cx<R>& z) {
  return z.exactly_zero();
}

template <Field R>
R conj_any(const R& x) {
  return x;
}
template <Field R>
Cx<R> conj_any(const Cx<R>& z) {
  return conj(z);
}

}  // namespace detail

template <class T>
using scalar_of_t = typename detail::ScalarOf<T>::type;

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const std::vector<T>& c) {
    assert(c.size() == rows_);
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Mat adjoint() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = detail::conj_any((*this)(i, j));
    return t;
  }

  Mat& operator+=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Mat& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, const T& s) { return a *= s; }
  friend Mat operator*(const T& s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols_ == b.rows_);
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (detail::exactly_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    assert(v.size() == cols_);
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& a = (*this)(i, j);
        if (!detail::exactly_zero(a) && !detail::exactly_zero(v[j])) out[i] += a * v[j];
      }
    return out;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, detail::magnitude(x));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Row-echelon reduction state shared by rank/solve/nullspace.
template <class T>
struct Echelon {
  Mat<T> reduced;                     // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column per nonzero row
};

/// Reduced row echelon form. Entries with magnitude <= eps count as zero in float mode.
template <class T>
Echelon<T> rref(Mat<T> m, const Tolerance& tol = {}) {
  using R = scalar_of_t<T>;
  Echelon<T> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    if constexpr (is_exact_v<R>) {
      for (std::size_t i = row; i < m.rows(); ++i)
        if (!detail::exactly_zero(m(i, col))) {
          best = i;
          break;
        }
    } else {
      double best_mag = tol.eps;
      for (std::size_t i = row; i < m.rows(); ++i) {
        double mag = detail::magnitude(m(i, col));
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
    }
    if (best == m.rows()) {
      if constexpr (!is_exact_v<R>)
        for (std::size_t i = row; i < m.rows(); ++i) m(i, col) = T(0);
      continue;
    }
    if (best != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
    T inv = T(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || detail::exactly_zero(m(i, col))) continue;
      T factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
      m(i, col) = T(0);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T>
std::size_t rank(const Mat<T>& m, const Tolerance& tol = {}) {
  return rref(m, tol).pivots.size();
}

/// Solves A x = b. Returns nullopt when inconsistent; free variables are set to zero.
/// `unique` reports whether the solution is unique.
template <class T>
std::optional<std::vector<T>> solve(const Mat<T>& a, const std::vector<T>& b, bool* unique = nullptr,
                                    const Tolerance& tol = {}) {
  assert(a.rows() == b.size());
  Mat<T> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto e = rref(aug, tol);
  for (std::size_t p : e.pivots)
    if (p == a.cols()) return std::nullopt;
  if constexpr (!is_exact_v<scalar_of_t<T>>) {
    // rows without pivots must have a negligible right-hand side
    for (std::size_t i = e.pivots.size(); i < a.rows(); ++i)
      if (detail::magnitude(e.reduced(i, a.cols())) > std::sqrt(tol.eps)) return std::nullopt;
  }
  std::vector<T> x(a.cols(), T(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  if (unique) *unique = e.pivots.size() == a.cols();
  return x;
}

/// Basis of the null space of A, one vector per free column.
template <class T>
std::vector<std::vector<T>> nullspace(const Mat<T>& a, const Tolerance& tol = {}) {
  auto e = rref(a, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(a.cols(), T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& a, const Tolerance& tol = {}) {
  if (a.rows() != a.cols()) return std::nullopt;
  std::size_t n = a.rows();
  Mat<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  auto e = rref(aug, tol);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Mat<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// Incrementally maintained span, used for generation and dimension-saturation loops.
template <class T>
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t dim, Tolerance tol = {}) : dim_(dim), tol_(tol) {}

  /// Adds v; returns true if it increased the dimension.
  bool add(std::vector<T> v) {
    assert(v.size() == dim_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const T& coef = v[pivots_[r]];
      if (detail::exactly_zero(coef)) continue;
      T c = coef;
      for (std::size_t j = 0; j < dim_; ++j)
        if (!detail::exactly_zero(rows_[r][j])) v[j] -= c * rows_[r][j];
    }
    std::size_t piv = dim_;
    double best = 0;
    for (std::size_t j = 0; j < dim_; ++j) {
      if constexpr (is_exact_v<scalar_of_t<T>>) {
        if (!detail::exactly_zero(v[j])) {
          piv = j;
          break;
        }
      } else {
        double mag = detail::magnitude(v[j]);
        if (mag > best) {
          best = mag;
          piv = j;
        }
      }
    }
    if (piv == dim_) return false;
    if constexpr (!is_exact_v<scalar_of_t<T>>) {
      if (best <= tol_.eps) return false;
    }
    T inv = T(1) / v[piv];
    for (auto& x : v) x *= inv;
    // keep rows reduced with respect to the new pivot
    for (auto& row : rows_) {
      if (detail::exactly_zero(row[piv])) continue;
      T c = row[piv];
      for (std::size_t j = 0; j < dim_; ++j)
        if (!detail::exactly_zero(v[j])) row[j] -= c * v[j];
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  bool contains(const std::vector<T>& v) const {
    SpanBuilder copy = *this;
    return !copy.add(v);
  }

  std::size_t dimension() const { return rows_.size(); }
  const std::vector<std::vector<T>>& basis() const { return rows_; }

 private:
  std::size_t dim_;
  Tolerance tol_;
  std::vector<std::vector<T>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace qiso

namespace qiso {

template <class T>
using SparseVec = std::vector<std::pair<std::size_t, T>>;

/// Rank of a set of sparse columns by incremental elimination keyed on the leading index.
/// Cheap for the permutation-like matrices that cancellation maps produce.
template <class T>
std::size_t sparse_rank(const std::vector<SparseVec<T>>& columns, const Tolerance& tol = {}) {
  using R = scalar_of_t<T>;
  std::map<std::size_t, std::map<std::size_t, T>> pivots;  // leading index -> normalized column
  for (const auto& col : columns) {
    std::map<std::size_t, T> v;
    for (const auto& [i, x] : col)
      if (!detail::exactly_zero(x)) v[i] += x;
    for (;;) {
      // drop numerically dead entries before choosing the lead
      if constexpr (!is_exact_v<R>) {
        for (auto it = v.begin(); it != v.end();)
          it = detail::magnitude(it->second) <= tol.eps ? v.erase(it) : std::next(it);
      } else {
        for (auto it = v.begin(); it != v.end();) it = detail::exactly_zero(it->second) ? v.erase(it) : std::next(it);
      }
      if (v.empty()) break;
      auto lead = v.begin();
      auto p = pivots.find(lead->first);
      if (p == pivots.end()) {
        T inv = T(1) / lead->second;
        for (auto& [i, x] : v) x *= inv;
        pivots.emplace(lead->first, std::move(v));
        break;
      }
      T f = lead->second;
      for (const auto& [i, x] : p->second) v[i] -= f * x;
    }
  }
  return pivots.size();
}

}  // namespace qiso
