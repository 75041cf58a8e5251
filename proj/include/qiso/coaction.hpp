#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qiso/algebra.hpp"
#include "qiso/errors.hpp"
#include "qiso/metric.hpp"
#include "qiso/quantum_group.hpp"
#include "qiso/transport.hpp"

namespace qiso {

/// Magic unitary u over a quantum group, with rho(e_j) = sum_i e_i (x) u_ij.
template <Field R>
struct CoAction {
  std::shared_ptr<const QuantumGroup<R>> group;
  FiniteMetricSpace<R> space;
  std::vector<std::vector<Element<R>>> u;
  std::string name;

  std::size_t n() const { return space.n; }
  const Element<R>& at(std::size_t i, std::size_t j) const { return u[i][j]; }
  const QuantumGroup<R>& qg() const { return *group; }
};

struct CoactionReport {
  std::vector<AxiomResult> checks;
  bool passed = true;
  bool faithful_checked = false;
  bool faithful = false;
  std::size_t generated_dim = 0;
  double kappa_transpose = 0;  // max ||kappa(u_ij) - u_ji||, informational

  double violation(const std::string& name) const {
    for (const auto& a : checks)
      if (a.name == name) return a.max_violation;
    return 0;
  }
};

/// Dimension of the unital algebra generated by the entries of u.
template <Field R>
std::size_t generated_dimension(const CoAction<R>& act, const Tolerance& tol = {}) {
  const auto& g = act.qg();
  SpanBuilder<Cx<R>> span(g.dim(), tol);
  std::vector<Element<R>> basis, gens;
  auto push = [&](const Element<R>& e) {
    if (span.add(e.data())) basis.push_back(e);
  };
  push(g.unit());
  for (const auto& row : act.u)
    for (const auto& e : row) {
      if (span.add(e.data())) {
        basis.push_back(e);
        gens.push_back(e);
      }
    }
  // words grow by right multiplication until the span stops growing
  for (std::size_t i = 0; i < basis.size() && span.dimension() < g.dim(); ++i)
    for (const auto& row : act.u)
      for (const auto& e : row) push(basis[i] * e);
  return span.dimension();
}

template <Field R>
CoactionReport verify_coaction(const CoAction<R>& act, const Tolerance& tol = {}, bool check_faithful = false) {
  require(act.group != nullptr, "ShapeMismatch", "coaction without a quantum group");
  const auto& g = act.qg();
  const std::size_t n = act.n(), d = g.dim();
  require(act.u.size() == n, "ShapeMismatch", "u must be n x n");
  for (const auto& row : act.u) {
    require(row.size() == n, "ShapeMismatch", "u must be n x n");
    for (const auto& e : row) require(e.data().size() == d, "ShapeMismatch", "u entry does not live in the algebra");
  }
  CoactionReport rep;
  auto record = [&](const std::string& name, double v) { rep.checks.push_back({name, v}); };

  double proj = 0, rows = 0, cols = 0, orth = 0, coas = 0, counit = 0, kt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Element<R> rs = g.zero(), cs = g.zero();
    for (std::size_t j = 0; j < n; ++j) {
      proj = std::max(proj, projection_residual(act.u[i][j]));
      rs += act.u[i][j];
      cs += act.u[j][i];
      for (std::size_t k = j + 1; k < n; ++k) orth = std::max(orth, (act.u[i][j] * act.u[i][k]).hs_norm());
      counit = std::max(counit, abs_double(g.counit(act.u[i][j]) - Cx<R>(i == j ? 1 : 0)));
      kt = std::max(kt, distance(g.antipode(act.u[i][j]), act.u[j][i]));

      auto lhs = g.comultiply(act.u[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        const auto &a = act.u[i][k], &b = act.u[k][j];
        for (std::size_t x = 0; x < d; ++x) {
          if (a[x].exactly_zero()) continue;
          for (std::size_t y = 0; y < d; ++y)
            if (!b[y].exactly_zero()) lhs[x * d + y] -= a[x] * b[y];
        }
      }
      coas = std::max(coas, detail::map_norm(lhs));
    }
    rows = std::max(rows, distance(rs, g.unit()));
    cols = std::max(cols, distance(cs, g.unit()));
  }
  record("projections", proj);
  record("row_sums", rows);
  record("column_sums", cols);
  record("row_orthogonality", orth);
  record("coassociativity", coas);
  record("counit", counit);
  rep.kappa_transpose = kt;
  for (const auto& a : rep.checks)
    if (is_exact_v<R> ? a.max_violation != 0 : a.max_violation > tol.eps) rep.passed = false;
  if (check_faithful) {
    rep.faithful_checked = true;
    rep.generated_dim = generated_dimension(act, tol);
    rep.faithful = rep.generated_dim == d;
  }
  return rep;
}

template <Field R>
bool kappa_is_transpose(const CoAction<R>& act, const Tolerance& tol = {}) {
  const auto& g = act.qg();
  for (std::size_t i = 0; i < act.n(); ++i)
    for (std::size_t j = 0; j < act.n(); ++j)
      if (!(g.antipode(act.u[i][j]) - act.u[j][i]).is_zero(tol)) return false;
  return true;
}

/// x <| psi, with component j equal to psi(u_xj).
template <Field R>
ProbVector<R> act_on_point(const CoAction<R>& act, std::size_t x, const Functional<R>& psi) {
  ProbVector<R> out{std::vector<R>(act.n(), R(0))};
  for (std::size_t j = 0; j < act.n(); ++j) {
    R v = psi(act.u[x][j]).re;
    if constexpr (!is_exact_v<R>) v = std::max(v, 0.0);
    out.mass[j] = v;
  }
  if constexpr (!is_exact_v<R>) {
    double s = 0;
    for (auto v : out.mass) s += v;
    if (s > 0)
      for (auto& v : out.mass) v /= s;
  }
  return out;
}

/// psi |> f, with component x equal to sum_j f_j psi(u_xj).
template <Field R>
std::vector<R> act_on_function(const CoAction<R>& act, const Functional<R>& psi, const std::vector<R>& f) {
  require(f.size() == act.n(), "DimensionMismatch", "function length");
  std::vector<R> out(act.n(), R(0));
  for (std::size_t x = 0; x < act.n(); ++x)
    for (std::size_t j = 0; j < act.n(); ++j) out[x] += f[j] * psi(act.u[x][j]).re;
  return out;
}

/// a_{x;S} = sum_{j in S} u_xj.
template <Field R>
Element<R> a_element(const CoAction<R>& act, std::size_t x, PointSet s) {
  Element<R> out = act.qg().zero();
  for (auto j : s.members()) out += act.u[x][j];
  return out;
}

/// Sum_j f_j u_xj.
template <Field R>
Element<R> row_combination(const CoAction<R>& act, std::size_t x, const std::vector<R>& f) {
  Element<R> out = act.qg().zero();
  for (std::size_t j = 0; j < act.n(); ++j)
    if (f[j] != 0) out += Cx<R>(f[j]) * act.u[x][j];
  return out;
}

template <Field R>
std::vector<PointSet> orbits(const CoAction<R>& act, const Tolerance& tol = {}) {
  const std::size_t n = act.n();
  std::vector<PointSet> of(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < n; ++j)
      if (!act.u[x][j].is_zero(tol)) of[x].insert(j);
  std::vector<PointSet> out;
  PointSet seen;
  for (std::size_t x = 0; x < n; ++x) {
    if (!of[x].contains(x)) throw StructureError("NotAPartition", "point " + std::to_string(x) + " outside its own orbit");
    for (auto j : of[x].members())
      if (!(of[j] == of[x])) throw StructureError("NotAPartition", "orbits of " + std::to_string(x) + " and " + std::to_string(j) + " overlap without coinciding");
    if (!seen.contains(x)) {
      out.push_back(of[x]);
      seen = seen | of[x];
    }
  }
  return out;
}

/// C(G) acting on {0..n-1} by g.j = g[j], so u_ij is the indicator of {g : g[j] = i}.
template <Field R>
CoAction<R> classical_action(const PermutationGroup& grp, const FiniteMetricSpace<R>& space, std::string name = {}) {
  require(grp.degree == space.n, "DimensionMismatch", "group degree differs from the number of points");
  auto g = std::make_shared<const QuantumGroup<R>>(function_algebra<R>(grp, name));
  CoAction<R> act{g, space, {}, std::move(name)};
  const std::size_t n = space.n;
  act.u.assign(n, std::vector<Element<R>>(n, g->zero()));
  for (std::size_t e = 0; e < grp.order(); ++e)
    for (std::size_t j = 0; j < n; ++j) act.u[grp.elements[e][j]][j][e] = Cx<R>(1);
  return act;
}

template <Field R>
CoAction<R> from_permutation_group(const FiniteMetricSpace<R>& space,
                                   const std::vector<std::vector<std::size_t>>& generators, std::string name = {}) {
  return classical_action(generate_group(space.n, generators), space, std::move(name));
}

/// u_ij = delta_ij 1 over any quantum group.
template <Field R>
CoAction<R> trivial_action(std::shared_ptr<const QuantumGroup<R>> g, const FiniteMetricSpace<R>& space,
                           std::string name = {}) {
  CoAction<R> act{g, space, {}, std::move(name)};
  act.u.assign(space.n, std::vector<Element<R>>(space.n, g->zero()));
  for (std::size_t i = 0; i < space.n; ++i) act.u[i][i] = g->unit();
  return act;
}

}  // namespace qiso
