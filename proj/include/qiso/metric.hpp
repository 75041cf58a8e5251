#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/matrix.hpp"
#include "qiso/numeric.hpp"

namespace qiso {

/// Subset of {0..n-1} as a bitmask. Spaces larger than 64 points are rejected upstream.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::uint64_t bits) : bits_(bits) {}
  static PointSet all(std::size_t n) { return PointSet(n >= 64 ? ~0ull : ((1ull << n) - 1)); }
  static PointSet single(std::size_t i) { return PointSet(1ull << i); }
  static PointSet from(const std::vector<std::size_t>& members) {
    PointSet s;
    for (auto i : members) s.insert(i);
    return s;
  }

  bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  void insert(std::size_t i) { bits_ |= 1ull << i; }
  void erase(std::size_t i) { bits_ &= ~(1ull << i); }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  friend PointSet operator|(PointSet a, PointSet b) { return PointSet(a.bits_ | b.bits_); }
  friend PointSet operator&(PointSet a, PointSet b) { return PointSet(a.bits_ & b.bits_); }
  friend bool operator==(PointSet a, PointSet b) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Subset of X x X as a dense boolean matrix.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::size_t n, bool fill = false) : n_(n), cells_(n * n, fill ? 1 : 0) {}

  static PairSet diagonal(std::size_t n) {
    PairSet y(n);
    for (std::size_t i = 0; i < n; ++i) y.insert(i, i);
    return y;
  }

  std::size_t n() const { return n_; }
  bool contains(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  void insert(std::size_t i, std::size_t j) { cells_[i * n_ + j] = 1; }
  void erase(std::size_t i, std::size_t j) { cells_[i * n_ + j] = 0; }
  std::size_t count() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }

  PairSet transpose() const {
    PairSet t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (contains(i, j)) t.insert(j, i);
    return t;
  }
  /// True if every pair of *this is in `other`.
  bool subset_of(const PairSet& other) const {
    for (std::size_t k = 0; k < cells_.size(); ++k)
      if (cells_[k] && !other.cells_[k]) return false;
    return true;
  }
  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> cells_;
};

/// Failure of a metric axiom, with the offending indices.
class MetricViolation : public InvalidInput {
 public:
  MetricViolation(const std::string& code, std::array<std::size_t, 3> witness, const std::string& msg)
      : InvalidInput(code, msg), witness_(witness) {}
  const std::array<std::size_t, 3>& witness() const { return witness_; }

 private:
  std::array<std::size_t, 3> witness_;
};

template <Field R>
struct FiniteMetricSpace {
  std::size_t n = 0;
  Mat<R> dist;
  std::vector<std::string> labels;
  std::vector<R> realized;  // sorted distinct distances, 0 included
  Tolerance tol{};

  const R& d(std::size_t i, std::size_t j) const { return dist(i, j); }
  const R& max_distance() const { return realized.back(); }
  std::vector<R> row(std::size_t x) const {
    std::vector<R> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = dist(x, j);
    return r;
  }
};

namespace detail {

template <Field R>
std::vector<R> realized_distances(const Mat<R>& dist, const Tolerance& tol) {
  std::vector<R> values(dist.data());
  std::sort(values.begin(), values.end());
  std::vector<R> out;
  for (const auto& v : values)
    if (out.empty() || !approx_eq<R>(out.back(), v, tol)) out.push_back(v);
  return out;
}

inline std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

}  // namespace detail

/// Checks the metric axioms and returns the validated space.
template <Field R>
FiniteMetricSpace<R> validate_metric(const Mat<R>& matrix, const Tolerance& tol = {},
                                     std::vector<std::string> labels = {}) {
  require(matrix.rows() == matrix.cols(), "ShapeMismatch", "distance matrix must be square");
  const std::size_t n = matrix.rows();
  require(n >= 1, "ShapeMismatch", "empty distance matrix");
  require(n <= 64, "ShapeMismatch", "at most 64 points are supported");
  require(labels.empty() || labels.size() == n, "ShapeMismatch", "label count differs from n");
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero<R>(matrix(i, i), tol))
      throw MetricViolation("NonzeroDiagonal", {i, i, i}, "d(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!approx_eq<R>(matrix(i, j), matrix(j, i), tol))
        throw MetricViolation("AsymmetricMatrix", {i, j, j}, "d(i,j) != d(j,i) at " + detail::triple(i, j, j));
      if (!definitely_lt<R>(R(0), matrix(i, j), tol))
        throw MetricViolation("NegativeDistance", {i, j, j},
                              "distance between distinct points must be positive at " + detail::triple(i, j, j));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!approx_le<R>(matrix(i, k), matrix(i, j) + matrix(j, k), tol))
          throw MetricViolation("TriangleViolation", {i, j, k},
                                "d(i,k) > d(i,j) + d(j,k) at " + detail::triple(i, j, k));
  FiniteMetricSpace<R> space;
  space.n = n;
  space.dist = matrix;
  // symmetrize exactly so downstream code can rely on d(i,j) == d(j,i)
  for (std::size_t i = 0; i < n; ++i) {
    space.dist(i, i) = R(0);
    for (std::size_t j = i + 1; j < n; ++j) space.dist(j, i) = space.dist(i, j);
  }
  space.labels = std::move(labels);
  space.realized = detail::realized_distances(space.dist, tol);
  space.tol = tol;
  return space;
}

template <Field R>
FiniteMetricSpace<R> validate_metric(const std::vector<std::vector<R>>& rows, const Tolerance& tol = {}) {
  Mat<R> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == m.cols(), "ShapeMismatch", "ragged distance matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return validate_metric(m, tol);
}

/// L(f) = max_{i != j} |f_i - f_j| / d(i,j).
template <Field R>
R lipschitz_constant(const FiniteMetricSpace<R>& space, const std::vector<R>& f) {
  require(f.size() == space.n, "DimensionMismatch", "function length differs from n");
  R best(0);
  for (std::size_t i = 0; i < space.n; ++i)
    for (std::size_t j = i + 1; j < space.n; ++j) {
      R ratio = abs_value<R>(f[i] - f[j]) / space.d(i, j);
      if (ratio > best) best = ratio;
    }
  return best;
}

/// {j : lo <= d(x,j) <= hi}.
template <Field R>
PointSet ball(const FiniteMetricSpace<R>& space, std::size_t x, const R& lo, const R& hi) {
  PointSet s;
  for (std::size_t j = 0; j < space.n; ++j)
    if (approx_le<R>(lo, space.d(x, j), space.tol) && approx_le<R>(space.d(x, j), hi, space.tol)) s.insert(j);
  return s;
}

template <Field R>
PairSet level_set(const FiniteMetricSpace<R>& space, const R& r) {
  PairSet y(space.n);
  for (std::size_t i = 0; i < space.n; ++i)
    for (std::size_t j = 0; j < space.n; ++j)
      if (approx_eq<R>(space.d(i, j), r, space.tol)) y.insert(i, j);
  return y;
}

template <Field R>
PairSet sublevel_set(const FiniteMetricSpace<R>& space, const R& r) {
  PairSet y(space.n);
  for (std::size_t i = 0; i < space.n; ++i)
    for (std::size_t j = 0; j < space.n; ++j)
      if (approx_le<R>(space.d(i, j), r, space.tol)) y.insert(i, j);
  return y;
}

enum class MetricModel { EuclideanSample, ShortestPathGraph };

namespace detail {

template <Field R>
void shortest_path_closure(Mat<R>& w) {
  const std::size_t n = w.rows();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (w(i, k) + w(k, j) < w(i, j)) w(i, j) = w(i, k) + w(k, j);
}

}  // namespace detail

/// Deterministic random metric. Euclidean samples are rounded to 1/1000 and closed under
/// shortest paths in rational mode, so the result is exact and still a metric.
template <Field R>
FiniteMetricSpace<R> random_metric_space(std::size_t n, std::uint64_t seed, MetricModel model,
                                         const Tolerance& tol = {}) {
  require(n >= 2, "InvalidInput", "random spaces need n >= 2");
  std::mt19937_64 rng(seed);
  Mat<R> m(n, n);
  if (model == MetricModel::EuclideanSample) {
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
        double e = std::max(std::hypot(dx, dy), 1e-3);
        if constexpr (is_exact_v<R>) {
          m(i, j) = m(j, i) = from_ratio<R>(std::max<long long>(1, std::llround(e * 1000)), 1000);
        } else {
          m(i, j) = m(j, i) = e;
        }
      }
    if constexpr (is_exact_v<R>) detail::shortest_path_closure(m);
  } else {
    std::uniform_int_distribution<int> weight(1, 5);
    std::bernoulli_distribution extra(0.4);
    const R inf = R(1000000);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? R(0) : inf;
    // random spanning tree keeps the graph connected
    for (std::size_t i = 1; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> parent(0, i - 1);
      std::size_t p = parent(rng);
      m(i, p) = m(p, i) = R(weight(rng));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (extra(rng)) {
          R w(weight(rng));
          if (w < m(i, j)) m(i, j) = m(j, i) = w;
        }
    detail::shortest_path_closure(m);
  }
  return validate_metric(m, tol);
}

}  // namespace qiso
