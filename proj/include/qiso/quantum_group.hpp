#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "qiso/algebra.hpp"
#include "qiso/errors.hpp"
#include "qiso/matrix.hpp"

namespace qiso {

/// A finite-dimensional Hopf *-algebra on a block algebra. Delta is stored by columns:
/// delta[beta] lists the nonzero coefficients of Delta(E_beta) at canonical indices alpha*dim+gamma.
template <Field R>
struct QuantumGroup {
  std::shared_ptr<const BlockShape> shape;
  std::shared_ptr<const TensorShape> tensor;
  std::vector<SparseVec<Cx<R>>> delta;
  CVec<R> epsilon;
  std::vector<SparseVec<Cx<R>>> kappa;  // kappa[beta] = coordinates of kappa(E_beta)
  std::string name;

  static QuantumGroup make(std::vector<std::size_t> blocks, std::string name = {}) {
    QuantumGroup g;
    g.shape = std::make_shared<const BlockShape>(std::move(blocks));
    g.tensor = std::make_shared<const TensorShape>(*g.shape);
    g.delta.assign(g.shape->dim(), {});
    g.epsilon.assign(g.shape->dim(), Cx<R>());
    g.kappa.assign(g.shape->dim(), {});
    g.name = std::move(name);
    return g;
  }

  std::size_t dim() const { return shape->dim(); }
  Element<R> unit() const { return Element<R>::unit(shape); }
  Element<R> zero() const { return Element<R>(shape); }
  Element<R> basis(std::size_t alpha) const { return Element<R>::basis(shape, alpha); }

  Cx<R> delta_entry(std::size_t row, std::size_t col) const {
    for (const auto& [i, x] : delta[col])
      if (i == row) return x;
    return Cx<R>();
  }
  void set_delta_entry(std::size_t row, std::size_t col, const Cx<R>& value) { set_entry(delta[col], row, value); }
  Cx<R> kappa_entry(std::size_t row, std::size_t col) const {
    for (const auto& [i, x] : kappa[col])
      if (i == row) return x;
    return Cx<R>();
  }
  void set_kappa_entry(std::size_t row, std::size_t col, const Cx<R>& value) { set_entry(kappa[col], row, value); }

  /// Delta(a) as a sparse canonical tensor vector.
  std::map<std::size_t, Cx<R>> comultiply(const Element<R>& a) const {
    std::map<std::size_t, Cx<R>> out;
    for (std::size_t beta = 0; beta < dim(); ++beta) {
      if (a[beta].exactly_zero()) continue;
      for (const auto& [idx, c] : delta[beta]) out[idx] += a[beta] * c;
    }
    return out;
  }
  /// Delta(a) as an element of the tensor block algebra.
  Element<R> comultiply_block(const Element<R>& a) const {
    auto ts = std::make_shared<const BlockShape>(tensor->shape);
    return comultiply_block(a, ts);
  }
  Element<R> comultiply_block(const Element<R>& a, const std::shared_ptr<const BlockShape>& ts) const {
    Element<R> out(ts);
    for (const auto& [idx, c] : comultiply(a)) out[tensor->to_block[idx]] += c;
    return out;
  }
  Element<R> antipode(const Element<R>& a) const {
    Element<R> out(shape);
    for (std::size_t beta = 0; beta < dim(); ++beta) {
      if (a[beta].exactly_zero()) continue;
      for (const auto& [i, c] : kappa[beta]) out[i] += a[beta] * c;
    }
    return out;
  }
  Cx<R> counit(const Element<R>& a) const {
    Cx<R> s;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!a[i].exactly_zero()) s += epsilon[i] * a[i];
    return s;
  }
  Functional<R> counit_functional() const { return Functional<R>(shape, epsilon); }

 private:
  static void set_entry(SparseVec<Cx<R>>& col, std::size_t row, const Cx<R>& value) {
    for (auto& [i, x] : col)
      if (i == row) {
        x = value;
        return;
      }
    col.emplace_back(row, value);
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
};

struct AxiomResult {
  std::string name;
  double max_violation = 0;
};

struct QuantumGroupReport {
  std::vector<AxiomResult> axioms;
  bool passed = true;
  double worst = 0;

  double violation(const std::string& name) const {
    for (const auto& a : axioms)
      if (a.name == name) return a.max_violation;
    return 0;
  }
  bool kac_ok(double tol) const {
    for (const char* n : {"kappa_involutive", "kappa_star", "kappa_antimultiplicative"})
      if (violation(n) > tol) return false;
    return true;
  }
};

namespace detail {

template <Field R>
double abs_of(const Cx<R>& z) {
  return abs_double(z);
}

/// Dense canonical vector of a sparse tensor map, for triple tensors.
template <Field R>
void add_scaled(std::map<std::size_t, Cx<R>>& acc, std::size_t idx, const Cx<R>& v) {
  if (!v.exactly_zero()) acc[idx] += v;
}

template <Field R>
double map_norm(const std::map<std::size_t, Cx<R>>& m) {
  double s = 0;
  for (const auto& [i, z] : m) s += to_double(norm2(z));
  return std::sqrt(s);
}

}  // namespace detail

/// Every Hopf *-algebra axiom with its maximal residual. In rational mode a nonzero residual
/// fails regardless of tol.
template <Field R>
QuantumGroupReport verify_quantum_group(const QuantumGroup<R>& g, const Tolerance& tol = {}) {
  const std::size_t d = g.dim();
  require(g.delta.size() == d && g.epsilon.size() == d && g.kappa.size() == d, "ShapeMismatch",
          "structure maps do not match the algebra dimension");
  for (const auto& col : g.delta)
    for (const auto& [i, x] : col) require(i < d * d, "ShapeMismatch", "delta row out of range");
  for (const auto& col : g.kappa)
    for (const auto& [i, x] : col) require(i < d, "ShapeMismatch", "kappa row out of range");

  QuantumGroupReport rep;
  auto record = [&](const std::string& name, double v) { rep.axioms.push_back({name, v}); };
  auto ts = std::make_shared<const BlockShape>(g.tensor->shape);

  std::vector<Element<R>> dblock(d);
  for (std::size_t b = 0; b < d; ++b) dblock[b] = g.comultiply_block(g.basis(b), ts);

  {  // unital
    Element<R> one_one = Element<R>::unit(ts);
    record("delta_unital", distance(g.comultiply_block(g.unit(), ts), one_one));
  }
  {  // multiplicative and *-preserving on matrix units
    double mult = 0, star = 0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        std::size_t ab = g.shape->product_index(a, b);
        Element<R> lhs = dblock[a] * dblock[b];
        if (ab < d) lhs -= dblock[ab];
        mult = std::max(mult, lhs.hs_norm());
      }
      star = std::max(star, distance(dblock[g.shape->star_index(a)], dblock[a].star()));
    }
    record("delta_multiplicative", mult);
    record("delta_star", star);
  }
  {  // coassociativity, in canonical triple coordinates x*d^2 + y*d + z
    double worst = 0;
    for (std::size_t b = 0; b < d; ++b) {
      std::map<std::size_t, Cx<R>> left, right;
      for (const auto& [idx, c] : g.delta[b]) {
        std::size_t alpha = idx / d, gamma = idx % d;
        for (const auto& [idx2, c2] : g.delta[alpha]) detail::add_scaled(left, idx2 * d + gamma, c * c2);
        for (const auto& [idx2, c2] : g.delta[gamma]) detail::add_scaled(right, alpha * d * d + idx2, c * c2);
      }
      for (const auto& [i, z] : right) left[i] -= z;
      worst = std::max(worst, detail::map_norm(left));
    }
    record("coassociativity", worst);
  }
  {  // cancellation: a(x)b -> Delta(a)(1(x)b) and a(x)b -> (a(x)1)Delta(b) are bijective
    std::vector<SparseVec<Cx<R>>> left_cols, right_cols;
    left_cols.reserve(d * d);
    right_cols.reserve(d * d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        SparseVec<Cx<R>> lc, rc;
        for (const auto& [idx, c] : g.delta[a]) {
          std::size_t y = g.shape->product_index(idx % d, b);
          if (y < d) lc.emplace_back((idx / d) * d + y, c);
        }
        for (const auto& [idx, c] : g.delta[b]) {
          std::size_t x = g.shape->product_index(a, idx / d);
          if (x < d) rc.emplace_back(x * d + idx % d, c);
        }
        left_cols.push_back(std::move(lc));
        right_cols.push_back(std::move(rc));
      }
    record("cancellation_left", static_cast<double>(d * d - sparse_rank(left_cols, tol)));
    record("cancellation_right", static_cast<double>(d * d - sparse_rank(right_cols, tol)));
  }
  {  // counit
    double left = 0, right = 0, mult = 0, star = 0;
    for (std::size_t b = 0; b < d; ++b) {
      Element<R> l(g.shape), r(g.shape);
      for (const auto& [idx, c] : g.delta[b]) {
        l[idx % d] += g.epsilon[idx / d] * c;
        r[idx / d] += g.epsilon[idx % d] * c;
      }
      left = std::max(left, distance(l, g.basis(b)));
      right = std::max(right, distance(r, g.basis(b)));
      star = std::max(star, detail::abs_of<R>(g.epsilon[g.shape->star_index(b)] - conj(g.epsilon[b])));
      for (std::size_t a = 0; a < d; ++a) {
        std::size_t ab = g.shape->product_index(a, b);
        Cx<R> lhs = ab < d ? g.epsilon[ab] : Cx<R>();
        mult = std::max(mult, detail::abs_of<R>(lhs - g.epsilon[a] * g.epsilon[b]));
      }
    }
    record("counit_left", left);
    record("counit_right", right);
    record("counit_multiplicative", mult);
    record("counit_star", star);
    record("counit_unital", detail::abs_of<R>(g.counit(g.unit()) - Cx<R>(1)));
  }
  std::vector<Element<R>> kap(d);
  for (std::size_t b = 0; b < d; ++b) kap[b] = g.antipode(g.basis(b));
  {  // m(kappa (x) id)Delta = eps 1 = m(id (x) kappa)Delta
    double left = 0, right = 0;
    for (std::size_t b = 0; b < d; ++b) {
      Element<R> l(g.shape), r(g.shape);
      for (const auto& [idx, c] : g.delta[b]) {
        std::size_t alpha = idx / d, gamma = idx % d;
        l += c * (kap[alpha] * g.basis(gamma));
        r += c * (g.basis(alpha) * kap[gamma]);
      }
      Element<R> target = g.epsilon[b] * g.unit();
      left = std::max(left, distance(l, target));
      right = std::max(right, distance(r, target));
    }
    record("antipode_left", left);
    record("antipode_right", right);
  }
  {  // Kac type
    double inv = 0, star = 0, anti = 0;
    for (std::size_t b = 0; b < d; ++b) {
      inv = std::max(inv, distance(g.antipode(kap[b]), g.basis(b)));
      star = std::max(star, distance(kap[g.shape->star_index(b)], kap[b].star()));
      for (std::size_t a = 0; a < d; ++a) {
        std::size_t ab = g.shape->product_index(a, b);
        Element<R> lhs = ab < d ? kap[ab] : g.zero();
        anti = std::max(anti, distance(lhs, kap[b] * kap[a]));
      }
    }
    record("kappa_involutive", inv);
    record("kappa_star", star);
    record("kappa_antimultiplicative", anti);
  }
  for (const auto& a : rep.axioms) {
    rep.worst = std::max(rep.worst, a.max_violation);
    bool ok = is_exact_v<R> ? a.max_violation == 0 : a.max_violation <= tol.eps;
    if (!ok) rep.passed = false;
  }
  return rep;
}

/// Rejects structures whose antipode is not of Kac type.
template <Field R>
void require_kac(const QuantumGroup<R>& g, const Tolerance& tol = {}) {
  auto rep = verify_quantum_group(g, tol);
  if (!rep.kac_ok(is_exact_v<R> ? 0.0 : tol.eps)) throw StructureError("KacViolation", "antipode is not of Kac type");
}

/// (phi psi)(a) = (phi (x) psi) Delta(a).
template <Field R>
Functional<R> convolve(const QuantumGroup<R>& g, const Functional<R>& phi, const Functional<R>& psi) {
  const std::size_t d = g.dim();
  Functional<R> out(g.shape);
  for (std::size_t b = 0; b < d; ++b)
    for (const auto& [idx, c] : g.delta[b]) {
      const auto &x = phi[idx / d], &y = psi[idx % d];
      if (!x.exactly_zero() && !y.exactly_zero()) out[b] += x * y * c;
    }
  return out;
}

/// psi o kappa.
template <Field R>
Functional<R> compose_antipode(const QuantumGroup<R>& g, const Functional<R>& psi) {
  Functional<R> out(g.shape);
  for (std::size_t b = 0; b < g.dim(); ++b) out[b] = psi(g.antipode(g.basis(b)));
  return out;
}

template <Field R>
struct HaarResult {
  Functional<R> h;
  bool reduced = false;          // h faithful
  double left_residual = 0;      // || (h (x) id)Delta - h 1 ||
  double right_residual = 0;
};

/// Haar state from the linear system (h (x) id)Delta(a) = h(a) 1, h(1) = 1.
template <Field R>
HaarResult<R> haar_state(const QuantumGroup<R>& g, const Tolerance& tol = {}) {
  const std::size_t d = g.dim();
  Mat<Cx<R>> sys(d * d + 1, d);
  std::vector<Cx<R>> rhs(d * d + 1, Cx<R>());
  // row b*d + gamma: coefficient of E_gamma in (h (x) id)Delta(E_b) - h_b 1
  for (std::size_t b = 0; b < d; ++b) {
    for (const auto& [idx, c] : g.delta[b]) sys(b * d + idx % d, idx / d) += c;
    for (std::size_t k = 0; k < g.shape->blocks(); ++k)
      for (std::size_t a = 0; a < g.shape->size(k); ++a) sys(b * d + g.shape->index(k, a, a), b) -= Cx<R>(1);
  }
  for (std::size_t k = 0; k < g.shape->blocks(); ++k)
    for (std::size_t a = 0; a < g.shape->size(k); ++a) sys(d * d, g.shape->index(k, a, a)) = Cx<R>(1);
  rhs[d * d] = Cx<R>(1);
  bool unique = false;
  auto sol = solve(sys, rhs, &unique, tol);
  if (!sol) throw StructureError("NoInvariantState", "no left-invariant normalized functional");
  if (!unique) throw StructureError("NoInvariantState", "left-invariant functional is not unique");

  HaarResult<R> out;
  out.h = Functional<R>(g.shape, *sol);
  for (std::size_t b = 0; b < d; ++b) {
    Element<R> l(g.shape), r(g.shape);
    for (const auto& [idx, c] : g.delta[b]) {
      l[idx % d] += out.h[idx / d] * c;
      r[idx / d] += out.h[idx % d] * c;
    }
    Element<R> target = out.h[b] * g.unit();
    out.left_residual = std::max(out.left_residual, distance(l, target));
    out.right_residual = std::max(out.right_residual, distance(r, target));
  }
  if (!is_state(out.h, tol)) throw StructureError("NoInvariantState", "invariant functional is not positive");
  // faithful iff every density block is positive definite
  auto rho = density_element(out.h);
  out.reduced = true;
  for (std::size_t k = 0; k < g.shape->blocks() && out.reduced; ++k) {
    const std::size_t n = g.shape->size(k);
    Mat<Cx<R>> blk(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) blk(a, b) = rho.at(k, a, b);
    if (rank(blk, tol) < n) out.reduced = false;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Finite groups

/// Permutation group with elements listed in discovery order (identity first).
/// Product convention: (g h)[j] = g[h[j]].
struct PermutationGroup {
  std::size_t degree = 0;
  std::vector<std::vector<std::size_t>> elements;
  std::vector<std::vector<std::size_t>> mult;  // mult[a][b] = index of a*b
  std::vector<std::size_t> inverse;
  std::vector<std::size_t> generators;         // indices of the generators

  std::size_t order() const { return elements.size(); }
  std::size_t index_of(const std::vector<std::size_t>& p) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == p) return i;
    return elements.size();
  }
};

inline PermutationGroup generate_group(std::size_t n, const std::vector<std::vector<std::size_t>>& gens,
                                       std::size_t max_order = 5040) {
  for (const auto& g : gens) {
    std::vector<bool> seen(n, false);
    if (g.size() != n) throw InvalidInput("NotAGroup", "generator length differs from degree");
    for (auto x : g) {
      if (x >= n || seen[x]) throw InvalidInput("NotAGroup", "generator is not a permutation");
      seen[x] = true;
    }
  }
  auto compose = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = a[b[j]];
    return c;
  };
  PermutationGroup grp;
  grp.degree = n;
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<std::size_t>, std::size_t> where;
  grp.elements.push_back(id);
  where[id] = 0;
  for (std::size_t i = 0; i < grp.elements.size(); ++i)
    for (const auto& s : gens) {
      auto h = compose(grp.elements[i], s);
      if (!where.count(h)) {
        if (grp.elements.size() >= max_order) throw SizeGuardExceeded("group order above " + std::to_string(max_order));
        where[h] = grp.elements.size();
        grp.elements.push_back(h);
      }
    }
  const std::size_t m = grp.elements.size();
  grp.mult.assign(m, std::vector<std::size_t>(m));
  grp.inverse.assign(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      grp.mult[a][b] = where.at(compose(grp.elements[a], grp.elements[b]));
      if (grp.mult[a][b] == 0) grp.inverse[a] = b;
    }
  for (const auto& s : gens) grp.generators.push_back(where.at(s));
  return grp;
}

/// C(G): one 1x1 block per element, Delta dual to multiplication, kappa dual to inversion.
template <Field R>
QuantumGroup<R> function_algebra(const PermutationGroup& grp, std::string name = {}) {
  const std::size_t m = grp.order();
  auto g = QuantumGroup<R>::make(std::vector<std::size_t>(m, 1), std::move(name));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) g.delta[grp.mult[a][b]].emplace_back(a * m + b, Cx<R>(1));
  for (auto& col : g.delta) std::sort(col.begin(), col.end(), [](auto& x, auto& y) { return x.first < y.first; });
  g.epsilon[0] = Cx<R>(1);
  for (std::size_t a = 0; a < m; ++a) g.kappa[a].emplace_back(grp.inverse[a], Cx<R>(1));
  return g;
}

/// Unitary irreducible representation: one d x d matrix per group element.
template <Field R>
struct Irrep {
  std::size_t dim = 1;
  std::vector<std::vector<std::vector<Cx<R>>>> matrices;
};

/// Extends generator images multiplicatively along the group's discovery order.
template <Field R>
Irrep<R> irrep_from_generators(const PermutationGroup& grp, const std::vector<std::vector<std::vector<Cx<R>>>>& images) {
  require(images.size() == grp.generators.size(), "InconsistentIrreps", "one image per generator");
  const std::size_t dd = images.front().size();
  auto mul = [&](const auto& x, const auto& y) {
    std::vector<std::vector<Cx<R>>> z(dd, std::vector<Cx<R>>(dd));
    for (std::size_t i = 0; i < dd; ++i)
      for (std::size_t k = 0; k < dd; ++k)
        for (std::size_t j = 0; j < dd; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  Irrep<R> rep;
  rep.dim = dd;
  rep.matrices.assign(grp.order(), {});
  std::vector<std::vector<Cx<R>>> id(dd, std::vector<Cx<R>>(dd));
  for (std::size_t i = 0; i < dd; ++i) id[i][i] = Cx<R>(1);
  rep.matrices[0] = id;
  std::vector<bool> done(grp.order(), false);
  done[0] = true;
  std::queue<std::size_t> q;
  q.push(0);
  while (!q.empty()) {
    std::size_t a = q.front();
    q.pop();
    for (std::size_t s = 0; s < grp.generators.size(); ++s) {
      std::size_t b = grp.mult[a][grp.generators[s]];
      if (done[b]) continue;
      done[b] = true;
      rep.matrices[b] = mul(rep.matrices[a], images[s]);
      q.push(b);
    }
  }
  return rep;
}

/// C*(G) realized as the block algebra of its irreps, with lambda_g the image of each element.
template <Field R>
struct DualGroup {
  QuantumGroup<R> qg;
  std::vector<Element<R>> lambda;
};

/// Delta(lambda_g) = lambda_g (x) lambda_g, eps(lambda_g) = 1, kappa(lambda_g) = lambda_{g^-1},
/// transported to matrix units through the Fourier isomorphism.
template <Field R>
DualGroup<R> dual_of_group(const PermutationGroup& grp, const std::vector<Irrep<R>>& irreps, std::string name = {},
                           const Tolerance& tol = {}) {
  const std::size_t m = grp.order();
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& r : irreps) {
    require(r.matrices.size() == m, "InconsistentIrreps", "irrep must give one matrix per element");
    sizes.push_back(r.dim);
    total += r.dim * r.dim;
  }
  require(total == m, "InconsistentIrreps", "sum of squared irrep dimensions must equal the group order");
  auto g = QuantumGroup<R>::make(sizes, std::move(name));
  const auto& sh = *g.shape;
  // homomorphism and unitarity
  for (std::size_t k = 0; k < irreps.size(); ++k) {
    const auto& r = irreps[k];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t i = 0; i < r.dim; ++i)
          for (std::size_t j = 0; j < r.dim; ++j) {
            Cx<R> s;
            for (std::size_t l = 0; l < r.dim; ++l) s += r.matrices[a][i][l] * r.matrices[b][l][j];
            if (!is_zero<R>(s - r.matrices[grp.mult[a][b]][i][j], tol))
              throw InvalidInput("InconsistentIrreps", "matrices are not a representation");
          }
      for (std::size_t i = 0; i < r.dim; ++i)
        for (std::size_t j = 0; j < r.dim; ++j)
          if (!is_zero<R>(conj(r.matrices[a][j][i]) - r.matrices[grp.inverse[a]][i][j], tol))
            throw InvalidInput("InconsistentIrreps", "representation is not unitary");
    }
  }
  Mat<Cx<R>> phi(m, m);  // column g = coordinates of lambda_g
  for (std::size_t gi = 0; gi < m; ++gi)
    for (std::size_t k = 0; k < irreps.size(); ++k)
      for (std::size_t i = 0; i < irreps[k].dim; ++i)
        for (std::size_t j = 0; j < irreps[k].dim; ++j) phi(sh.index(k, i, j), gi) = irreps[k].matrices[gi][i][j];
  auto inv = inverse(phi, tol);
  if (!inv) throw InvalidInput("InconsistentIrreps", "irreps are not inequivalent");
  const Mat<Cx<R>>& pinv = *inv;
  for (std::size_t beta = 0; beta < m; ++beta) {
    std::map<std::size_t, Cx<R>> col;
    std::map<std::size_t, Cx<R>> kcol;
    Cx<R> eps;
    for (std::size_t gi = 0; gi < m; ++gi) {
      const Cx<R>& w = pinv(gi, beta);
      if (is_zero<R>(w, Tolerance{0.0})) continue;
      eps += w;
      for (std::size_t a = 0; a < m; ++a) {
        if (phi(a, gi).exactly_zero()) continue;
        for (std::size_t c = 0; c < m; ++c)
          if (!phi(c, gi).exactly_zero()) col[a * m + c] += w * phi(a, gi) * phi(c, gi);
      }
      std::size_t ginv = grp.inverse[gi];
      for (std::size_t a = 0; a < m; ++a)
        if (!phi(a, ginv).exactly_zero()) kcol[a] += w * phi(a, ginv);
    }
    for (auto& [i, x] : col)
      if (!is_zero<R>(x, Tolerance{1e-14})) g.delta[beta].emplace_back(i, x);
    for (auto& [i, x] : kcol)
      if (!is_zero<R>(x, Tolerance{1e-14})) g.kappa[beta].emplace_back(i, x);
    g.epsilon[beta] = eps;
  }
  DualGroup<R> out{std::move(g), {}};
  for (std::size_t gi = 0; gi < m; ++gi) {
    Element<R> e(out.qg.shape);
    for (std::size_t a = 0; a < m; ++a) e[a] = phi(a, gi);
    out.lambda.push_back(std::move(e));
  }
  return out;
}

}  // namespace qiso
