#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <type_traits>
#include <utility>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/lp.hpp"
#include "qiso/matrix.hpp"
#include "qiso/maxflow.hpp"
#include "qiso/metric.hpp"
#include "qiso/numeric.hpp"

namespace qiso {

template <Field R>
struct ProbVector {
  std::vector<R> mass;
  std::size_t size() const { return mass.size(); }
  const R& operator[](std::size_t i) const { return mass[i]; }
  R measure(PointSet s) const {
    R total(0);
    for (auto i : s.members()) total += mass[i];
    return total;
  }
};

template <Field R>
ProbVector<R> make_prob(std::vector<R> mass, const Tolerance& tol = {}) {
  R sum(0);
  for (const auto& m : mass) {
    require(approx_le<R>(R(0), m, tol), "BadDistribution", "negative mass");
    sum += m;
  }
  require(approx_eq<R>(sum, R(1), tol), "BadDistribution", "masses must sum to 1");
  return ProbVector<R>{std::move(mass)};
}

template <Field R>
ProbVector<R> dirac(std::size_t n, std::size_t x) {
  ProbVector<R> p{std::vector<R>(n, R(0))};
  p.mass[x] = R(1);
  return p;
}

template <Field R>
ProbVector<R> uniform(std::size_t n) {
  return ProbVector<R>{std::vector<R>(n, from_ratio<R>(1, static_cast<long long>(n)))};
}

template <Field R>
struct Coupling {
  Mat<R> plan;
  std::vector<R> mu, nu;

  /// Largest deviation of the plan's marginals from mu and nu, plus any negative entry.
  double marginal_residual() const {
    double worst = 0;
    for (std::size_t i = 0; i < plan.rows(); ++i) {
      R s(0);
      for (std::size_t j = 0; j < plan.cols(); ++j) {
        s += plan(i, j);
        worst = std::max(worst, -to_double(plan(i, j)));
      }
      worst = std::max(worst, std::abs(to_double(R(s - mu[i]))));
    }
    for (std::size_t j = 0; j < plan.cols(); ++j) {
      R s(0);
      for (std::size_t i = 0; i < plan.rows(); ++i) s += plan(i, j);
      worst = std::max(worst, std::abs(to_double(R(s - nu[j]))));
    }
    return worst;
  }
  bool supported_on(const PairSet& y, const Tolerance& tol = {}) const {
    for (std::size_t i = 0; i < plan.rows(); ++i)
      for (std::size_t j = 0; j < plan.cols(); ++j)
        if (!y.contains(i, j) && !is_zero<R>(plan(i, j), tol)) return false;
    return true;
  }
};

template <Field R>
struct DualPotentials {
  std::vector<R> f, g;
  R objective{0};
};

template <Field R>
struct TransportResult {
  R value{0};
  Coupling<R> plan;
  DualPotentials<R> duals;
  std::vector<std::pair<std::size_t, std::size_t>> basis;  // spanning-tree cells
  std::size_t pivots = 0;
};

namespace detail {

template <Field R>
void check_marginals(std::vector<R>& supply, std::vector<R>& demand, const Tolerance& tol) {
  R a(0), b(0);
  for (const auto& x : supply) {
    require(approx_le<R>(R(0), x, tol), "InfeasibleMarginals", "negative supply");
    a += x;
  }
  for (const auto& x : demand) {
    require(approx_le<R>(R(0), x, tol), "InfeasibleMarginals", "negative demand");
    b += x;
  }
  require(approx_eq<R>(a, b, tol), "InfeasibleMarginals", "marginal totals differ");
  if constexpr (!is_exact_v<R>) {
    if (b > 0 && a != b)
      for (auto& x : demand) x *= a / b;
  }
}

}  // namespace detail

/// Transportation problem by primal network simplex on spanning-tree bases, Bland's rule.
template <Field R>
TransportResult<R> solve_transport(const ProbVector<R>& mu, const ProbVector<R>& nu, const Mat<R>& cost,
                                   const Tolerance& tol = {}) {
  const std::size_t n = mu.size(), m = nu.size();
  require(cost.rows() == n && cost.cols() == m, "ShapeMismatch", "cost matrix shape");
  require(n >= 1 && m >= 1, "ShapeMismatch", "empty marginals");
  std::vector<R> supply = mu.mass, demand = nu.mass;
  detail::check_marginals(supply, demand, tol);

  Mat<R> x(n, m);
  std::vector<char> is_basic(n * m, 0);
  std::vector<std::pair<std::size_t, std::size_t>> basis;

  {  // northwest corner, degenerate cells kept so the basis is always a spanning tree
    std::vector<R> a = supply, b = demand;
    std::size_t i = 0, j = 0;
    for (;;) {
      R q = a[i] < b[j] ? a[i] : b[j];
      if (q < 0) q = R(0);
      x(i, j) = q;
      a[i] -= q;
      b[j] -= q;
      basis.emplace_back(i, j);
      is_basic[i * m + j] = 1;
      if (i == n - 1 && j == m - 1) break;
      if (j == m - 1 || (i < n - 1 && a[i] <= b[j])) ++i;
      else ++j;
    }
  }

  std::vector<R> u(n), v(m);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n + m);  // node -> (node, basis slot)
  auto rebuild = [&] {
    for (auto& a : adj) a.clear();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      auto [i, j] = basis[k];
      adj[i].emplace_back(n + j, k);
      adj[n + j].emplace_back(i, k);
    }
  };
  auto potentials = [&] {
    // v_{m-1} = 0, then u_i + v_j = c_ij along the tree
    std::vector<char> seen(n + m, 0);
    std::queue<std::size_t> q;
    v[m - 1] = R(0);
    seen[n + m - 1] = 1;
    q.push(n + m - 1);
    while (!q.empty()) {
      std::size_t node = q.front();
      q.pop();
      for (auto [other, k] : adj[node]) {
        if (seen[other]) continue;
        seen[other] = 1;
        auto [i, j] = basis[k];
        if (other < n) u[i] = cost(i, j) - v[j];
        else v[j] = cost(i, j) - u[i];
        q.push(other);
      }
    }
  };

  TransportResult<R> out;
  for (;;) {
    rebuild();
    potentials();
    std::size_t ei = n, ej = m;
    for (std::size_t i = 0; i < n && ei == n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (is_basic[i * m + j]) continue;
        if (definitely_lt<R>(cost(i, j) - u[i] - v[j], R(0), tol)) {
          ei = i;
          ej = j;
          break;
        }
      }
    if (ei == n) break;

    // tree path from column ej to row ei; together with (ei,ej) it closes the cycle
    std::vector<std::size_t> parent(n + m, n + m), via(n + m, 0);
    std::queue<std::size_t> q;
    parent[n + ej] = n + ej;
    q.push(n + ej);
    while (!q.empty()) {
      std::size_t node = q.front();
      q.pop();
      if (node == ei) break;
      for (auto [other, k] : adj[node])
        if (parent[other] == n + m) {
          parent[other] = node;
          via[other] = k;
          q.push(other);
        }
    }
    std::vector<std::size_t> path;  // basis slots from ei back toward ej
    for (std::size_t node = ei; node != n + ej; node = parent[node]) path.push_back(via[node]);
    std::reverse(path.begin(), path.end());
    // path[0] touches column ej and gets -theta, then signs alternate

    std::size_t leave_slot = basis.size();
    R theta{0};
    for (std::size_t t = 0; t < path.size(); t += 2) {
      auto [i, j] = basis[path[t]];
      const R& val = x(i, j);
      bool better = leave_slot == basis.size() || definitely_lt<R>(val, theta, tol);
      if (!better && approx_eq<R>(val, theta, tol)) {
        auto [li, lj] = basis[leave_slot];
        better = i * m + j < li * m + lj;
      }
      if (better) {
        leave_slot = path[t];
        theta = val;
      }
    }
    x(ei, ej) = theta;
    for (std::size_t t = 0; t < path.size(); ++t) {
      auto [i, j] = basis[path[t]];
      if (t % 2 == 0) x(i, j) -= theta;
      else x(i, j) += theta;
    }
    auto [li, lj] = basis[leave_slot];
    x(li, lj) = R(0);
    is_basic[li * m + lj] = 0;
    is_basic[ei * m + ej] = 1;
    basis[leave_slot] = {ei, ej};
    ++out.pivots;
  }

  out.plan.plan = std::move(x);
  out.plan.mu = supply;
  out.plan.nu = demand;
  out.value = R(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!is_zero<R>(out.plan.plan(i, j), Tolerance{0.0})) out.value += cost(i, j) * out.plan.plan(i, j);
  out.duals.f = u;
  out.duals.g = v;
  for (std::size_t i = 0; i < n; ++i) out.duals.objective += supply[i] * u[i];
  for (std::size_t j = 0; j < m; ++j) out.duals.objective += demand[j] * v[j];
  out.basis = basis;
  return out;
}

template <Field R>
Mat<R> power_cost(const FiniteMetricSpace<R>& space, double p) {
  Mat<R> c(space.n, space.n);
  for (std::size_t i = 0; i < space.n; ++i)
    for (std::size_t j = 0; j < space.n; ++j) c(i, j) = pow_real<R>(space.d(i, j), p);
  return c;
}

/// Optimal transport for cost d^p; value is W_p^p (exact in rational mode for integer p).
template <Field R>
TransportResult<R> wasserstein_pp(const FiniteMetricSpace<R>& space, const ProbVector<R>& mu,
                                  const ProbVector<R>& nu, double p, const Tolerance& tol = {}) {
  require(p >= 1, "InvalidInput", "p must be >= 1");
  require(mu.size() == space.n && nu.size() == space.n, "DimensionMismatch", "distribution length");
  return solve_transport(mu, nu, power_cost(space, p), tol);
}

/// W_p as a double. The p-th root is the only inexact step in rational mode.
template <Field R>
double wasserstein_p(const FiniteMetricSpace<R>& space, const ProbVector<R>& mu, const ProbVector<R>& nu,
                     double p, const Tolerance& tol = {}) {
  double v = std::max(0.0, to_double(wasserstein_pp(space, mu, nu, p, tol).value));
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

template <Field R>
struct KantorovichResult {
  R value{0};
  std::vector<R> witness;
};

/// W_1 from the Lipschitz side: max mu(f) - nu(f) over f with |f_i - f_j| <= d(i,j), f_{n-1} = 0.
template <Field R>
KantorovichResult<R> kantorovich_w1(const FiniteMetricSpace<R>& space, const ProbVector<R>& mu,
                                    const ProbVector<R>& nu, const Tolerance& tol = {}) {
  const std::size_t n = space.n;
  require(mu.size() == n && nu.size() == n, "DimensionMismatch", "distribution length");
  KantorovichResult<R> out;
  out.witness.assign(n, R(0));
  if (n == 1) return out;
  const std::size_t k = n - 1;  // free coordinates, split as f = f+ - f-
  Mat<R> a(n * (n - 1), 2 * k);
  std::vector<R> b;
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < k) {
        a(row, i) = R(1);
        a(row, k + i) = R(-1);
      }
      if (j < k) {
        a(row, j) = R(-1);
        a(row, k + j) = R(1);
      }
      b.push_back(space.d(i, j));
      ++row;
    }
  std::vector<R> c(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    c[i] = mu[i] - nu[i];
    c[k + i] = nu[i] - mu[i];
  }
  auto sol = simplex_max(a, b, c, tol);
  out.value = sol.value;
  for (std::size_t i = 0; i < k; ++i) out.witness[i] = sol.x[i] - sol.x[k + i];
  return out;
}

template <Field R>
struct CouplingFeasibility {
  bool feasible = false;
  std::optional<Coupling<R>> coupling;
  PointSet violator;
  R mu_S{0};
  R nu_NS{0};  // nu of the forward neighbourhood of the violator
};

template <Field R>
PointSet forward_neighborhood(const PairSet& y, PointSet s) {
  PointSet out;
  for (auto i : s.members())
    for (std::size_t j = 0; j < y.n(); ++j)
      if (y.contains(i, j)) out.insert(j);
  return out;
}

/// Coupling of (mu, nu) with plan zero off Y, or a subset S with nu(N(S)) < mu(S) read off a min cut.
template <Field R>
CouplingFeasibility<R> feasible_coupling_on(const ProbVector<R>& mu, const ProbVector<R>& nu, const PairSet& y,
                                            const Tolerance& tol = {}) {
  const std::size_t n = mu.size();
  require(nu.size() == n && y.n() == n, "DimensionMismatch", "instance dimensions disagree");
  std::vector<R> supply = mu.mass, demand = nu.mass;
  detail::check_marginals(supply, demand, tol);
  R total(0);
  for (const auto& s : supply) total += s;

  const std::size_t source = 0, sink = 2 * n + 1;
  MaxFlow<R> net(2 * n + 2, tol);
  const R big = total + R(1);  // never saturated: every left vertex carries at most `total`
  for (std::size_t i = 0; i < n; ++i) {
    net.add_capacity(source, 1 + i, supply[i]);
    net.add_capacity(1 + n + i, sink, demand[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (y.contains(i, j)) net.add_capacity(1 + i, 1 + n + j, big);
  }
  R flow = net.run(source, sink);

  CouplingFeasibility<R> out;
  if (approx_eq<R>(flow, total, tol)) {
    out.feasible = true;
    Coupling<R> c{Mat<R>(n, n), supply, demand};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (y.contains(i, j)) {
          R f = net.flow(1 + i, 1 + n + j);
          c.plan(i, j) = f < 0 ? R(0) : f;
        }
    out.coupling = std::move(c);
    return out;
  }
  auto side = net.source_side(source);
  for (std::size_t i = 0; i < n; ++i)
    if (side[1 + i]) out.violator.insert(i);
  ProbVector<R> pm{supply}, pn{demand};
  out.mu_S = pm.measure(out.violator);
  out.nu_NS = pn.measure(forward_neighborhood<R>(y, out.violator));
  if (!definitely_lt<R>(out.nu_NS, out.mu_S, tol))
    throw StructureError("CertificateFailure", "min cut did not yield a Hall violator");
  return out;
}

template <Field R>
struct BottleneckResult {
  R r{0};
  Coupling<R> plan;
  std::optional<CouplingFeasibility<R>> below;  // infeasibility certificate at the next-lower realized distance
};

/// Least realized r admitting a coupling on the sublevel set of r.
template <Field R>
BottleneckResult<R> wasserstein_inf(const FiniteMetricSpace<R>& space, const ProbVector<R>& mu,
                                    const ProbVector<R>& nu, const Tolerance& tol = {}) {
  const auto& rs = space.realized;
  std::size_t lo = 0, hi = rs.size() - 1;  // rs[hi] is always feasible
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible_coupling_on(mu, nu, sublevel_set(space, rs[mid]), tol).feasible) hi = mid;
    else lo = mid + 1;
  }
  BottleneckResult<R> out;
  out.r = rs[lo];
  out.plan = *feasible_coupling_on(mu, nu, sublevel_set(space, rs[lo]), tol).coupling;
  if (lo > 0) {
    auto below = feasible_coupling_on(mu, nu, sublevel_set(space, rs[lo - 1]), tol);
    if (below.feasible) throw StructureError("CertificateFailure", "threshold search not monotone");
    out.below = std::move(below);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Vertex enumeration by growing tight forests.
//
// Every vertex of the polytopes below is pinned down by a forest of tight constraints in which
// each tree carries an anchor (a fixed coordinate or a box face). The search assigns one variable
// at a time, each new value forced by a tight constraint to an assigned variable or by an anchor,
// keeping only partial assignments that satisfy every constraint among assigned variables.

namespace detail {

template <Field R>
using VertexKey = std::conditional_t<is_exact_v<R>, std::vector<Rational>, std::vector<long long>>;

template <Field R>
VertexKey<R> vertex_key(const std::vector<R>& vals, std::uint64_t mask) {
  VertexKey<R> key;
  key.reserve(vals.size() + 1);
  if constexpr (is_exact_v<R>) {
    key.push_back(Rational(static_cast<unsigned long long>(mask)));
    for (std::size_t i = 0; i < vals.size(); ++i)
      if ((mask >> i) & 1u) key.push_back(vals[i]);
  } else {
    key.push_back(static_cast<long long>(mask));
    for (std::size_t i = 0; i < vals.size(); ++i)
      if ((mask >> i) & 1u) key.push_back(std::llround(vals[i] * 1e7));
  }
  return key;
}

/// `candidates(vals, mask, k)` proposes values for variable k; `compatible(vals, mask, k, v)`
/// checks every constraint between k and the assigned variables.
template <Field R, class Candidates, class Compatible>
std::vector<std::vector<R>> grow_tight_forests(std::size_t vars, const std::vector<std::pair<std::size_t, R>>& seed,
                                               Candidates candidates, Compatible compatible,
                                               std::size_t state_limit) {
  struct State {
    std::uint64_t mask;
    std::vector<R> vals;
  };
  std::vector<State> layer(1, State{0, std::vector<R>(vars, R(0))});
  for (auto& [k, v] : seed) {
    layer[0].mask |= 1ull << k;
    layer[0].vals[k] = v;
  }
  const std::uint64_t full = vars >= 64 ? ~0ull : (1ull << vars) - 1;
  std::size_t visited = 0;
  while (!layer.empty() && layer.front().mask != full) {
    std::vector<State> next;
    std::set<VertexKey<R>> seen;
    for (const auto& st : layer) {
      for (std::size_t k = 0; k < vars; ++k) {
        if ((st.mask >> k) & 1u) continue;
        for (const R& v : candidates(st.vals, st.mask, k)) {
          if (!compatible(st.vals, st.mask, k, v)) continue;
          State nx{st.mask | (1ull << k), st.vals};
          nx.vals[k] = v;
          if (seen.insert(vertex_key<R>(nx.vals, nx.mask)).second) next.push_back(std::move(nx));
        }
      }
      if (++visited + next.size() > state_limit)
        throw SizeGuardExceeded("vertex enumeration exceeded " + std::to_string(state_limit) + " states");
    }
    layer = std::move(next);
  }
  std::vector<std::vector<R>> out;
  out.reserve(layer.size());
  for (auto& st : layer) out.push_back(std::move(st.vals));
  return out;
}

}  // namespace detail

inline constexpr std::size_t kVertexGuard = 8;
inline constexpr std::size_t kStateLimit = 20'000'000;

/// Vertices of {f : |f_i - f_j| <= d(i,j), f_{n-1} = 0}.
template <Field R>
std::vector<std::vector<R>> enumerate_lipschitz_vertices(const FiniteMetricSpace<R>& space,
                                                         std::size_t guard = kVertexGuard) {
  const std::size_t n = space.n;
  require(n >= 2, "InvalidInput", "need at least two points");
  if (n > guard) throw SizeGuardExceeded("Lipschitz vertex enumeration limited to n <= " + std::to_string(guard));
  auto candidates = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k) {
    std::vector<R> c;
    for (std::size_t a = 0; a < n; ++a)
      if ((mask >> a) & 1u) {
        c.push_back(vals[a] + space.d(a, k));
        c.push_back(vals[a] - space.d(a, k));
      }
    return c;
  };
  auto compatible = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k, const R& v) {
    for (std::size_t b = 0; b < n; ++b)
      if (((mask >> b) & 1u) && !approx_le<R>(abs_value<R>(v - vals[b]), space.d(k, b), space.tol)) return false;
    return true;
  };
  return detail::grow_tight_forests<R>(n, {{n - 1, R(0)}}, candidates, compatible, kStateLimit);
}

/// Vertices of {(f,g) : f_i + g_j <= c_ij, g_{n-1} = 0}. Any convex function bounded above on this
/// set attains its supremum at one of them.
template <Field R>
std::vector<DualPotentials<R>> enumerate_dual_vertices(const Mat<R>& cost, const Tolerance& tol = {},
                                                       std::size_t guard = kVertexGuard) {
  const std::size_t n = cost.rows();
  require(cost.cols() == n && n >= 1, "ShapeMismatch", "square cost required");
  if (n > guard) throw SizeGuardExceeded("dual vertex enumeration limited to n <= " + std::to_string(guard));
  // variables 0..n-1 are f, n..2n-1 are g
  auto candidates = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k) {
    std::vector<R> c;
    if (k < n) {
      for (std::size_t j = 0; j < n; ++j)
        if ((mask >> (n + j)) & 1u) c.push_back(cost(k, j) - vals[n + j]);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) c.push_back(cost(i, k - n) - vals[i]);
    }
    return c;
  };
  auto compatible = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k, const R& v) {
    if (k < n) {
      for (std::size_t j = 0; j < n; ++j)
        if (((mask >> (n + j)) & 1u) && !approx_le<R>(v + vals[n + j], cost(k, j), tol)) return false;
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (((mask >> i) & 1u) && !approx_le<R>(vals[i] + v, cost(i, k - n), tol)) return false;
    }
    return true;
  };
  auto raw = detail::grow_tight_forests<R>(2 * n, {{2 * n - 1, R(0)}}, candidates, compatible, kStateLimit);
  std::vector<DualPotentials<R>> out;
  out.reserve(raw.size());
  for (auto& v : raw)
    out.push_back(DualPotentials<R>{std::vector<R>(v.begin(), v.begin() + n), std::vector<R>(v.begin() + n, v.end()), R(0)});
  return out;
}

inline constexpr std::size_t kBoxedGuard = 4;

/// Vertices of P_C = {f_i + g_j <= d(i,j)^p} cut by the box [-2C, 2C]^{2n}, C = max d^p.
template <Field R>
std::vector<DualPotentials<R>> enumerate_boxed_dual_vertices(const FiniteMetricSpace<R>& space, double p,
                                                             std::size_t guard = kBoxedGuard) {
  const std::size_t n = space.n;
  if (n > guard) throw SizeGuardExceeded("boxed dual enumeration limited to n <= " + std::to_string(guard));
  Mat<R> cost = power_cost(space, p);
  R c_max(0);
  for (const auto& x : cost.data())
    if (x > c_max) c_max = x;
  const R lo = R(-2) * c_max, hi = R(2) * c_max;
  const Tolerance tol = space.tol;
  auto candidates = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k) {
    std::vector<R> c{lo, hi};
    if (k < n) {
      for (std::size_t j = 0; j < n; ++j)
        if ((mask >> (n + j)) & 1u) c.push_back(cost(k, j) - vals[n + j]);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) c.push_back(cost(i, k - n) - vals[i]);
    }
    return c;
  };
  auto compatible = [&](const std::vector<R>& vals, std::uint64_t mask, std::size_t k, const R& v) {
    if (!approx_le<R>(lo, v, tol) || !approx_le<R>(v, hi, tol)) return false;
    if (k < n) {
      for (std::size_t j = 0; j < n; ++j)
        if (((mask >> (n + j)) & 1u) && !approx_le<R>(v + vals[n + j], cost(k, j), tol)) return false;
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (((mask >> i) & 1u) && !approx_le<R>(vals[i] + v, cost(i, k - n), tol)) return false;
    }
    return true;
  };
  auto raw = detail::grow_tight_forests<R>(2 * n, {}, candidates, compatible, kStateLimit);
  std::vector<DualPotentials<R>> out;
  for (auto& v : raw)
    out.push_back(DualPotentials<R>{std::vector<R>(v.begin(), v.begin() + n), std::vector<R>(v.begin() + n, v.end()), R(0)});
  return out;
}

}  // namespace qiso
