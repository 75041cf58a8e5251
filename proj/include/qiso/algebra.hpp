#pragma once

// Finite-dimensional C*-algebras as direct sums of full matrix blocks. Coordinates are taken
// in the matrix-unit basis E^k_ab, ordered block-major and row-major inside a block, so an
// element's coordinate vector is literally the concatenation of its block matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/matrix.hpp"
#include "qiso/numeric.hpp"

namespace qiso {

class BlockShape {
 public:
  struct Coord {
    std::size_t block, row, col;
  };

  BlockShape() = default;
  explicit BlockShape(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    require(!sizes_.empty(), "ShapeMismatch", "an algebra needs at least one block");
    offsets_.reserve(sizes_.size());
    for (auto s : sizes_) {
      require(s >= 1, "ShapeMismatch", "block sizes must be positive");
      offsets_.push_back(dim_);
      dim_ += s * s;
    }
    coords_.reserve(dim_);
    for (std::size_t k = 0; k < sizes_.size(); ++k)
      for (std::size_t a = 0; a < sizes_[k]; ++a)
        for (std::size_t b = 0; b < sizes_[k]; ++b) coords_.push_back({k, a, b});
  }

  std::size_t dim() const { return dim_; }
  std::size_t blocks() const { return sizes_.size(); }
  std::size_t size(std::size_t k) const { return sizes_[k]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t offset(std::size_t k) const { return offsets_[k]; }
  std::size_t index(std::size_t k, std::size_t a, std::size_t b) const { return offsets_[k] + a * sizes_[k] + b; }
  const Coord& coord(std::size_t alpha) const { return coords_[alpha]; }
  /// Index of E_alpha^* (the transposed matrix unit).
  std::size_t star_index(std::size_t alpha) const {
    const auto& c = coords_[alpha];
    return index(c.block, c.col, c.row);
  }
  /// Index of E_alpha E_beta, or dim() when the product vanishes.
  std::size_t product_index(std::size_t alpha, std::size_t beta) const {
    const auto &x = coords_[alpha], &y = coords_[beta];
    if (x.block != y.block || x.col != y.row) return dim_;
    return index(x.block, x.row, y.col);
  }
  bool is_commutative() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](std::size_t s) { return s == 1; });
  }
  friend bool operator==(const BlockShape& a, const BlockShape& b) { return a.sizes_ == b.sizes_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<Coord> coords_;
  std::size_t dim_ = 0;
};

/// A (x) A as a block algebra with blocks (k,l) of size n_k n_l in Kronecker order.
struct TensorShape {
  BlockShape shape;
  std::vector<std::size_t> to_block;  // canonical index alpha*dim + gamma -> coordinate of `shape`

  explicit TensorShape(const BlockShape& a) {
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < a.blocks(); ++k)
      for (std::size_t l = 0; l < a.blocks(); ++l) sizes.push_back(a.size(k) * a.size(l));
    shape = BlockShape(sizes);
    const std::size_t d = a.dim();
    to_block.resize(d * d);
    for (std::size_t alpha = 0; alpha < d; ++alpha)
      for (std::size_t gamma = 0; gamma < d; ++gamma) {
        const auto &x = a.coord(alpha), &y = a.coord(gamma);
        std::size_t nl = a.size(y.block);
        std::size_t kl = x.block * a.blocks() + y.block;
        to_block[alpha * d + gamma] = shape.index(kl, x.row * nl + y.row, x.col * nl + y.col);
      }
  }
};

template <Field R>
using CVec = std::vector<Cx<R>>;

template <Field R>
class Element {
 public:
  Element() = default;
  explicit Element(std::shared_ptr<const BlockShape> shape)
      : shape_(std::move(shape)), data_(shape_->dim(), Cx<R>()) {}
  Element(std::shared_ptr<const BlockShape> shape, CVec<R> data) : shape_(std::move(shape)), data_(std::move(data)) {
    require(data_.size() == shape_->dim(), "ShapeMismatch", "element coordinates do not match the algebra");
  }

  static Element unit(std::shared_ptr<const BlockShape> shape) {
    Element e(shape);
    for (std::size_t k = 0; k < shape->blocks(); ++k)
      for (std::size_t a = 0; a < shape->size(k); ++a) e.data_[shape->index(k, a, a)] = Cx<R>(1);
    return e;
  }
  static Element basis(std::shared_ptr<const BlockShape> shape, std::size_t alpha) {
    Element e(shape);
    e.data_[alpha] = Cx<R>(1);
    return e;
  }

  const BlockShape& shape() const { return *shape_; }
  const std::shared_ptr<const BlockShape>& shape_ptr() const { return shape_; }
  const CVec<R>& data() const { return data_; }
  CVec<R>& data() { return data_; }
  Cx<R>& operator[](std::size_t alpha) { return data_[alpha]; }
  const Cx<R>& operator[](std::size_t alpha) const { return data_[alpha]; }
  const Cx<R>& at(std::size_t k, std::size_t a, std::size_t b) const { return data_[shape_->index(k, a, b)]; }

  Element& operator+=(const Element& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Element& operator-=(const Element& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Element& operator*=(const Cx<R>& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Cx<R>& s, Element a) { return a *= s; }

  friend Element operator*(const Element& x, const Element& y) {
    const auto& sh = *x.shape_;
    Element out(x.shape_);
    for (std::size_t k = 0; k < sh.blocks(); ++k) {
      const std::size_t n = sh.size(k), off = sh.offset(k);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) {
          const auto& xac = x.data_[off + a * n + c];
          if (xac.exactly_zero()) continue;
          for (std::size_t b = 0; b < n; ++b) {
            const auto& ycb = y.data_[off + c * n + b];
            if (!ycb.exactly_zero()) out.data_[off + a * n + b] += xac * ycb;
          }
        }
    }
    return out;
  }

  Element star() const {
    Element out(shape_);
    for (std::size_t alpha = 0; alpha < data_.size(); ++alpha) out.data_[shape_->star_index(alpha)] = conj(data_[alpha]);
    return out;
  }

  /// Hilbert-Schmidt norm over all blocks.
  double hs_norm() const {
    double s = 0;
    for (const auto& z : data_) s += to_double(norm2(z));
    return std::sqrt(s);
  }
  double block_norm(std::size_t k) const {
    double s = 0;
    const std::size_t n = shape_->size(k), off = shape_->offset(k);
    for (std::size_t i = 0; i < n * n; ++i) s += to_double(norm2(data_[off + i]));
    return std::sqrt(s);
  }
  bool exactly_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Cx<R>& z) { return z.exactly_zero(); });
  }
  bool is_zero(const Tolerance& tol) const {
    if constexpr (is_exact_v<R>) return exactly_zero();
    else return hs_norm() <= tol.eps;
  }

 private:
  std::shared_ptr<const BlockShape> shape_;
  CVec<R> data_;
};

template <Field R>
double distance(const Element<R>& a, const Element<R>& b) {
  return (a - b).hs_norm();
}

// ---------------------------------------------------------------------------------------------
// Positivity

template <Field R>
struct PsdCertificate {
  bool psd = true;
  double min_eigenvalue = 0;  // double estimate, exact sign only through `psd`
  std::size_t block = 0;      // block carrying the smallest eigenvalue
  CVec<R> witness;            // on failure: xi with <xi, a xi> < 0 (in that block)
};

namespace detail {

template <Field R>
Eigen::MatrixXcd block_to_eigen(const Element<R>& a, std::size_t k) {
  const std::size_t n = a.shape().size(k);
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& z = a.at(k, i, j);
      m(i, j) = std::complex<double>(to_double(z.re), to_double(z.im));
    }
  return m;
}

/// Exact congruence diagonalization. Returns a witness vector if the Hermitian matrix is not PSD.
inline std::optional<CVec<Rational>> hermitian_ldl_witness(std::vector<std::vector<Cx<Rational>>> m) {
  using C = Cx<Rational>;
  const std::size_t n = m.size();
  std::vector<std::vector<C>> t(n, std::vector<C>(n, C()));  // m = t^* h t, tracked through column ops
  for (std::size_t i = 0; i < n; ++i) t[i][i] = C(1);
  auto column_of = [&](std::size_t j) {
    CVec<Rational> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = t[i][j];
    return v;
  };
  for (std::size_t k = 0; k < n; ++k) {
    const Rational pivot = m[k][k].re;
    if (pivot < 0) return column_of(k);
    if (pivot == 0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        if (m[k][j].exactly_zero()) continue;
        // x = s e_k + e_j gives x^* m x = 2 Re(conj(s) b) + c = -1 for this s
        const C b = m[k][j];
        const Rational c = m[j][j].re;
        const C s = C(-(c + 1) / (Rational(2) * norm2(b))) * b;
        CVec<Rational> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = s * t[i][k] + t[i][j];
        return v;
      }
      continue;
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (m[k][j].exactly_zero()) continue;
      const C f = m[k][j] / C(pivot);
      for (std::size_t i = 0; i < n; ++i) m[i][j] -= f * m[i][k];
      const C fc = conj(f);
      for (std::size_t i = 0; i < n; ++i) m[j][i] -= fc * m[k][i];
      for (std::size_t i = 0; i < n; ++i) t[i][j] -= f * t[i][k];
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Positivity of a self-adjoint element: Hermitian eigensolver per block in float mode,
/// exact congruence diagonalization in rational mode.
template <Field R>
PsdCertificate<R> check_psd(const Element<R>& a, const Tolerance& tol = {}) {
  const auto& sh = a.shape();
  PsdCertificate<R> out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd worst_vec;
  for (std::size_t k = 0; k < sh.blocks(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::block_to_eigen(a, k));
    double lmin = es.eigenvalues()(0);
    if (lmin < out.min_eigenvalue) {
      out.min_eigenvalue = lmin;
      out.block = k;
      worst_vec = es.eigenvectors().col(0);
    }
  }
  if constexpr (is_exact_v<R>) {
    for (std::size_t k = 0; k < sh.blocks(); ++k) {
      const std::size_t n = sh.size(k);
      std::vector<std::vector<Cx<R>>> m(n, std::vector<Cx<R>>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(k, i, j);
      if (auto w = detail::hermitian_ldl_witness(std::move(m))) {
        out.psd = false;
        out.block = k;
        out.witness = std::move(*w);
        out.min_eigenvalue = std::min(out.min_eigenvalue, -0.0);
        return out;
      }
    }
    out.psd = true;
  } else {
    out.psd = out.min_eigenvalue >= -tol.eps;
    if (!out.psd) {
      out.witness.resize(static_cast<std::size_t>(worst_vec.size()));
      for (Eigen::Index i = 0; i < worst_vec.size(); ++i)
        out.witness[static_cast<std::size_t>(i)] = Cx<double>(worst_vec(i).real(), worst_vec(i).imag());
    }
  }
  return out;
}

/// Largest eigenvalue (double) and the block/eigenvector achieving it.
template <Field R>
std::pair<double, std::size_t> lambda_max(const Element<R>& a, Eigen::VectorXcd* vec = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t blk = 0;
  for (std::size_t k = 0; k < a.shape().blocks(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::block_to_eigen(a, k));
    double l = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (l > best) {
      best = l;
      blk = k;
      if (vec) *vec = es.eigenvectors().col(es.eigenvalues().size() - 1);
    }
  }
  return {best, blk};
}

template <Field R>
double self_adjointness_residual(const Element<R>& a) {
  return distance(a, a.star());
}

/// Residual of a being a projection: max of ||a^2 - a|| and ||a^* - a||.
template <Field R>
double projection_residual(const Element<R>& a) {
  return std::max(distance(a * a, a), distance(a.star(), a));
}

template <Field R>
bool projection_exact(const Element<R>& a) {
  return (a * a - a).exactly_zero() && (a.star() - a).exactly_zero();
}

// ---------------------------------------------------------------------------------------------
// Functionals and states

/// Linear functional given by its values phi(E_alpha) on the matrix units.
template <Field R>
class Functional {
 public:
  Functional() = default;
  explicit Functional(std::shared_ptr<const BlockShape> shape) : shape_(std::move(shape)), v_(shape_->dim()) {}
  Functional(std::shared_ptr<const BlockShape> shape, CVec<R> values) : shape_(std::move(shape)), v_(std::move(values)) {
    require(v_.size() == shape_->dim(), "ShapeMismatch", "functional length");
  }

  /// psi(a) = sum_k tr(rho_k a_k), i.e. psi(E^k_ab) = rho_k[b][a].
  static Functional from_densities(std::shared_ptr<const BlockShape> shape,
                                   const std::vector<std::vector<std::vector<Cx<R>>>>& rho) {
    require(rho.size() == shape->blocks(), "ShapeMismatch", "one density per block");
    Functional f(shape);
    for (std::size_t k = 0; k < shape->blocks(); ++k) {
      const std::size_t n = shape->size(k);
      require(rho[k].size() == n, "ShapeMismatch", "density size");
      for (std::size_t a = 0; a < n; ++a) {
        require(rho[k][a].size() == n, "ShapeMismatch", "density size");
        for (std::size_t b = 0; b < n; ++b) f.v_[shape->index(k, a, b)] = rho[k][b][a];
      }
    }
    return f;
  }

  std::vector<std::vector<std::vector<Cx<R>>>> densities() const {
    std::vector<std::vector<std::vector<Cx<R>>>> rho(shape_->blocks());
    for (std::size_t k = 0; k < shape_->blocks(); ++k) {
      const std::size_t n = shape_->size(k);
      rho[k].assign(n, std::vector<Cx<R>>(n));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) rho[k][b][a] = v_[shape_->index(k, a, b)];
    }
    return rho;
  }

  Cx<R> operator()(const Element<R>& a) const {
    Cx<R> s;
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (!a[i].exactly_zero() && !v_[i].exactly_zero()) s += v_[i] * a[i];
    return s;
  }

  const BlockShape& shape() const { return *shape_; }
  const std::shared_ptr<const BlockShape>& shape_ptr() const { return shape_; }
  const CVec<R>& values() const { return v_; }
  CVec<R>& values() { return v_; }
  const Cx<R>& operator[](std::size_t alpha) const { return v_[alpha]; }
  Cx<R>& operator[](std::size_t alpha) { return v_[alpha]; }

  Functional& operator+=(const Functional& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Functional& operator*=(const Cx<R>& s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  friend Functional operator+(Functional a, const Functional& b) { return a += b; }
  friend Functional operator*(const Cx<R>& s, Functional a) { return a *= s; }

  double distance_to(const Functional& o) const {
    double s = 0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += to_double(norm2(v_[i] - o.v_[i]));
    return std::sqrt(s);
  }

 private:
  std::shared_ptr<const BlockShape> shape_;
  CVec<R> v_;
};

template <Field R>
using StateFunctional = Functional<R>;

/// Density block k of a functional as an element (so positivity reuses check_psd).
template <Field R>
Element<R> density_element(const Functional<R>& f) {
  const auto& sh = f.shape();
  Element<R> e(f.shape_ptr());
  for (std::size_t k = 0; k < sh.blocks(); ++k)
    for (std::size_t a = 0; a < sh.size(k); ++a)
      for (std::size_t b = 0; b < sh.size(k); ++b) e[sh.index(k, a, b)] = f[sh.index(k, b, a)];
  return e;
}

/// Positive and unital, with tolerance in float mode.
template <Field R>
bool is_state(const Functional<R>& f, const Tolerance& tol = {}) {
  auto one = f(Element<R>::unit(f.shape_ptr()));
  if (!is_zero<R>(one.re - R(1), tol) || !is_zero<R>(one.im, tol)) return false;
  auto rho = density_element(f);
  if (!rho.is_zero(tol) && self_adjointness_residual(rho) > (is_exact_v<R> ? 0.0 : tol.eps)) return false;
  return check_psd(rho, tol).psd;
}

/// Vector state on block k: psi(a) = <xi, a_k xi> / <xi, xi>.
template <Field R>
Functional<R> vector_state(std::shared_ptr<const BlockShape> shape, std::size_t k, const CVec<R>& xi) {
  require(k < shape->blocks() && xi.size() == shape->size(k), "ShapeMismatch", "vector does not fit the block");
  R nrm(0);
  for (const auto& z : xi) nrm += norm2(z);
  require(nrm > 0, "BadVector", "zero vector");
  Functional<R> f(shape);
  for (std::size_t a = 0; a < xi.size(); ++a)
    for (std::size_t b = 0; b < xi.size(); ++b) f[shape->index(k, a, b)] = conj(xi[a]) * xi[b] * Cx<R>(R(1) / nrm);
  return f;
}

/// Extreme (pure) state from a unit vector.
template <Field R>
Functional<R> extreme_state(std::shared_ptr<const BlockShape> shape, std::size_t k, const CVec<R>& xi,
                            const Tolerance& tol = {}) {
  R nrm(0);
  for (const auto& z : xi) nrm += norm2(z);
  require(approx_eq<R>(nrm, R(1), tol), "BadVector", "extreme states need a unit vector");
  return vector_state(std::move(shape), k, xi);
}

/// Ginibre densities per block (integer entries in rational mode) with Dirichlet block weights.
template <Field R>
Functional<R> random_state(std::shared_ptr<const BlockShape> shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> small(-4, 4);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 9);
  std::vector<std::vector<std::vector<Cx<R>>>> rho(shape->blocks());
  std::vector<R> traces(shape->blocks());
  std::vector<R> weights(shape->blocks());
  R weight_sum(0);
  for (std::size_t k = 0; k < shape->blocks(); ++k) {
    const std::size_t n = shape->size(k);
    std::vector<std::vector<Cx<R>>> g(n, std::vector<Cx<R>>(n));
    for (auto& row : g)
      for (auto& z : row) {
        if constexpr (is_exact_v<R>) z = Cx<R>(R(small(rng)), R(small(rng)));
        else z = Cx<R>(gauss(rng), gauss(rng));
      }
    if constexpr (is_exact_v<R>) g[0][0] += Cx<R>(R(5));  // keeps G nonzero
    // rho = G G^*
    rho[k].assign(n, std::vector<Cx<R>>(n));
    R tr(0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        Cx<R> s;
        for (std::size_t c = 0; c < n; ++c) s += g[a][c] * conj(g[b][c]);
        rho[k][a][b] = s;
      }
    for (std::size_t a = 0; a < n; ++a) tr += rho[k][a][a].re;
    traces[k] = tr;
    if constexpr (is_exact_v<R>) weights[k] = R(weight(rng));
    else weights[k] = gamma(rng);
    weight_sum += weights[k];
  }
  for (std::size_t k = 0; k < shape->blocks(); ++k) {
    Cx<R> scale(weights[k] / (weight_sum * traces[k]));
    for (auto& row : rho[k])
      for (auto& z : row) z *= scale;
  }
  return Functional<R>::from_densities(std::move(shape), rho);
}

}  // namespace qiso
