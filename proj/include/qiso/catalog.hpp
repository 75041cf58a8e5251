#pragma once

// Built-in example actions: classical permutation groups, and duals of dihedral groups acting
// through blocks of spectral projections of group elements.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qiso/coaction.hpp"
#include "qiso/quantum_group.hpp"

namespace qiso {

template <Field R>
struct CatalogEntry {
  std::string name;
  CoAction<R> action;
  std::optional<PermutationGroup> group;  // set for classical entries
  std::string note;

  bool classical() const { return group.has_value(); }
};

namespace detail {

template <Field R>
FiniteMetricSpace<R> metric_of(std::vector<std::vector<R>> rows) {
  return validate_metric<R>(rows);
}

/// Shortest-path metric of the n-cycle.
template <Field R>
FiniteMetricSpace<R> cycle_metric(std::size_t n) {
  std::vector<std::vector<R>> rows(n, std::vector<R>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t k = i > j ? i - j : j - i;
      rows[i][j] = R(static_cast<long>(std::min(k, n - k)));
    }
  return metric_of(rows);
}

inline std::vector<std::size_t> cycle_perm(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = (i + 1) % n;
  return p;
}

inline std::vector<std::size_t> swap_perm(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::swap(p[a], p[b]);
  return p;
}

/// omega^k for omega = exp(2 pi i / m). Exact only for m dividing 4.
template <Field R>
Cx<R> root_of_unity(std::size_t m, long k) {
  long r = ((k % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m);
  if (4 % m == 0) {
    long q = r * static_cast<long>(4 / m);  // quarter turns
    switch (q % 4) {
      case 0: return Cx<R>(R(1), R(0));
      case 1: return Cx<R>(R(0), R(1));
      case 2: return Cx<R>(R(-1), R(0));
      default: return Cx<R>(R(0), R(-1));
    }
  }
  if constexpr (is_exact_v<R>) {
    throw InvalidInput("InconsistentIrreps", "irrational root of unity in rational mode");
  } else {
    double t = 2 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
    return Cx<R>(std::cos(t), std::sin(t));
  }
}

}  // namespace detail

/// Irreps of the dihedral group of order 2m presented on m points by r = (0 1 .. m-1) and the
/// reflection s: j -> -j. Rational exactly when m divides 4.
template <Field R>
std::vector<Irrep<R>> dihedral_irreps(const PermutationGroup& grp, std::size_t m) {
  using C = Cx<R>;
  using M = std::vector<std::vector<C>>;
  std::vector<Irrep<R>> out;
  std::vector<std::pair<int, int>> chars{{1, 1}, {1, -1}};
  if (m % 2 == 0) {
    chars.push_back({-1, 1});
    chars.push_back({-1, -1});
  }
  for (auto [a, b] : chars) out.push_back(irrep_from_generators<R>(grp, {M{{C(a)}}, M{{C(b)}}}));
  for (std::size_t k = 1; 2 * k < m; ++k) {
    // rotation by 2 pi k / m, written in the basis where it is diagonal would need complex entries;
    // the real form keeps the representation unitary and rational for m = 4.
    C w = detail::root_of_unity<R>(m, static_cast<long>(k));
    M rot{{w.re, -w.im}, {w.im, w.re}};
    M refl{{C(1), C(0)}, {C(0), C(-1)}};
    out.push_back(irrep_from_generators<R>(grp, {rot, refl}));
  }
  return out;
}

inline PermutationGroup dihedral_group(std::size_t m) {
  std::vector<std::size_t> s(m);
  for (std::size_t j = 0; j < m; ++j) s[j] = (m - j) % m;
  return generate_group(m, {detail::cycle_perm(m), s});
}

/// A point block acted on through the group element g of order m: u_ij = P_{(i-j) mod m} with
/// P_c = (1/m) sum_t omega^{-ct} lambda_{g^t}.
struct PointBlock {
  std::size_t element = 0;
  std::size_t size = 2;
};

inline std::size_t element_order(const PermutationGroup& grp, std::size_t e) {
  std::size_t k = 1, cur = e;
  while (cur != 0) {
    cur = grp.mult[cur][e];
    ++k;
  }
  return k;
}

template <Field R>
CoAction<R> dual_group_action(const PermutationGroup& grp, std::shared_ptr<const DualGroup<R>> dual,
                              const std::vector<PointBlock>& blocks, const FiniteMetricSpace<R>& space,
                              std::string name = {}) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size;
  require(n == space.n, "DimensionMismatch", "point blocks do not cover the space");
  auto qg = std::shared_ptr<const QuantumGroup<R>>(dual, &dual->qg);
  CoAction<R> act{qg, space, {}, std::move(name)};
  act.u.assign(n, std::vector<Element<R>>(n, qg->zero()));
  std::size_t off = 0;
  for (const auto& b : blocks) {
    const std::size_t m = b.size;
    require(element_order(grp, b.element) == m, "InconsistentIrreps", "block size must equal the element order");
    std::vector<std::size_t> powers{0};
    for (std::size_t t = 1; t < m; ++t) powers.push_back(grp.mult[powers.back()][b.element]);
    Cx<R> inv_m(from_ratio<R>(1, static_cast<long long>(m)));
    for (std::size_t c = 0; c < m; ++c) {
      Element<R> p = qg->zero();
      for (std::size_t t = 0; t < m; ++t)
        p += (inv_m * detail::root_of_unity<R>(m, -static_cast<long>(c * t))) * dual->lambda[powers[t]];
      for (std::size_t i = 0; i < m; ++i) act.u[off + i][off + (i + m - c) % m] = p;
    }
    off += m;
  }
  return act;
}

template <Field R>
std::shared_ptr<const DualGroup<R>> dual_dihedral(std::size_t m, const PermutationGroup& grp) {
  return std::make_shared<const DualGroup<R>>(
      dual_of_group<R>(grp, dihedral_irreps<R>(grp, m), "dual D" + std::to_string(m)));
}

/// Index of r^a s^b in the dihedral group built by dihedral_group(m).
inline std::size_t dihedral_element(const PermutationGroup& grp, std::size_t a, std::size_t b) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < a; ++i) e = grp.mult[e][grp.generators[0]];
  for (std::size_t i = 0; i < b; ++i) e = grp.mult[e][grp.generators[1]];
  return e;
}

template <Field R>
std::vector<CatalogEntry<R>> builtin_catalog() {
  using detail::cycle_perm;
  using detail::swap_perm;
  std::vector<CatalogEntry<R>> out;
  auto classical = [&](std::string name, FiniteMetricSpace<R> space, std::vector<std::vector<std::size_t>> gens,
                       std::string note) {
    auto grp = generate_group(space.n, gens);
    out.push_back({name, classical_action<R>(grp, space, name), grp, std::move(note)});
  };
  const R h = from_ratio<R>(1, 2), th = from_ratio<R>(3, 2);

  classical("trivial-3", detail::metric_of<R>({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), {}, "trivial group");
  for (std::size_t n : {3, 4, 5})
    classical("Z" + std::to_string(n) + "-cycle", detail::cycle_metric<R>(n), {cycle_perm(n)}, "rotations of a cycle");
  classical("S3-equilateral", detail::metric_of<R>({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), {cycle_perm(3), swap_perm(3, 0, 1)},
            "full symmetric group on an equilateral triangle");
  classical("S3-isosceles", detail::metric_of<R>({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), {cycle_perm(3), swap_perm(3, 0, 1)},
            "isometry subgroup of order 2");
  classical("Z3-isosceles", detail::metric_of<R>({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), {cycle_perm(3)},
            "no nontrivial rotation is an isometry");
  classical("Z4-rhombus", detail::metric_of<R>({{0, 1, 2, 1}, {1, 0, 1, th}, {2, 1, 0, 1}, {1, th, 1, 0}}),
            {cycle_perm(4)}, "unequal diagonals keep only the half turn");
  classical("D4-square", detail::cycle_metric<R>(4), {cycle_perm(4), {0, 3, 2, 1}}, "symmetries of the square");
  classical("Z2xZ2-rectangle", detail::metric_of<R>({{0, 1, 3, 2}, {1, 0, 2, 3}, {3, 2, 0, 1}, {2, 3, 1, 0}}),
            {{1, 0, 3, 2}, {3, 2, 1, 0}}, "Klein four-group on a rectangle");
  classical("S4-two-pairs", detail::metric_of<R>({{0, 1, 2, 2}, {1, 0, 2, 2}, {2, 2, 0, 1}, {2, 2, 1, 0}}),
            {cycle_perm(4), swap_perm(4, 0, 1)}, "isometry subgroup of order 8");
  classical("S4-path", detail::metric_of<R>({{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}}),
            {cycle_perm(4), swap_perm(4, 0, 1)}, "only the flip of the path survives");
  classical("D5-pentagon",
            detail::metric_of<R>({{0, 1, 2, 2, 1}, {1, 0, 1, 2, 2}, {2, 1, 0, 1, 2}, {2, 2, 1, 0, 1}, {1, 2, 2, 1, 0}}),
            {cycle_perm(5), {0, 4, 3, 2, 1}}, "dihedral group on the 5-cycle");
  classical("Z2-half-line", detail::metric_of<R>({{0, h, 1}, {h, 0, h}, {1, h, 0}}), {{2, 1, 0}}, "reflection of a segment");

  {  // dual of D4 through the reflections s and sr
    auto grp = dihedral_group(4);
    auto dual = dual_dihedral<R>(4, grp);
    std::size_t s = dihedral_element(grp, 0, 1), sr = dihedral_element(grp, 1, 1), r = dihedral_element(grp, 1, 0);
    out.push_back({"dualD4-two-pairs",
                   dual_group_action<R>(grp, dual, {{s, 2}, {sr, 2}},
                                        detail::metric_of<R>({{0, 1, 2, 2}, {1, 0, 2, 2}, {2, 2, 0, 1}, {2, 2, 1, 0}}),
                                        "dualD4-two-pairs"),
                   std::nullopt, "genuinely quantum, satisfies (D)"});
    out.push_back({"dualD4-two-pairs-skew",
                   dual_group_action<R>(grp, dual, {{s, 2}, {sr, 2}},
                                        detail::metric_of<R>({{0, 1, 2, th}, {1, 0, th, 2}, {2, th, 0, 1}, {th, 2, 1, 0}}),
                                        "dualD4-two-pairs-skew"),
                   std::nullopt, "genuinely quantum, fails (D)"});
    out.push_back({"dualD4-unequal-pairs",
                   dual_group_action<R>(grp, dual, {{s, 2}, {sr, 2}},
                                        detail::metric_of<R>({{0, 1, 2, 2}, {1, 0, 2, 2}, {2, 2, 0, 2}, {2, 2, 2, 0}}),
                                        "dualD4-unequal-pairs"),
                   std::nullopt, "genuinely quantum, pair widths differ"});
    std::vector<std::vector<R>> six(6, std::vector<R>(6, R(3)));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        std::size_t k = i > j ? i - j : j - i;
        six[i][j] = R(static_cast<long>(std::min(k, 4 - k)));
      }
    six[4][4] = six[5][5] = R(0);
    six[4][5] = six[5][4] = R(1);
    out.push_back({"dualD4-square-and-pair",
                   dual_group_action<R>(grp, dual, {{r, 4}, {s, 2}}, detail::metric_of<R>(six), "dualD4-square-and-pair"),
                   std::nullopt, "rotation block of size 4 and a reflection pair"});
  }
  if constexpr (!is_exact_v<R>) {
    auto grp = dihedral_group(3);
    auto dual = dual_dihedral<R>(3, grp);
    std::size_t s = dihedral_element(grp, 0, 1), r = dihedral_element(grp, 1, 0);
    std::vector<std::vector<R>> five(5, std::vector<R>(5, R(2)));
    for (std::size_t i = 0; i < 5; ++i) five[i][i] = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) five[i][j] = 1;
    five[3][4] = five[4][3] = 1;
    out.push_back({"dualD3-triangle-and-pair",
                   dual_group_action<R>(grp, dual, {{r, 3}, {s, 2}}, detail::metric_of<R>(five), "dualD3-triangle-and-pair"),
                   std::nullopt, "irrational structure constants, float mode only"});
  }
  return out;
}

template <Field R>
void validate_catalog_entry(const CatalogEntry<R>& e, const Tolerance& tol = {}) {
  auto q = verify_quantum_group(e.action.qg(), tol);
  if (!q.passed) throw InvalidInput("CatalogEntryInvalid", e.name + ": quantum group axioms fail");
  auto c = verify_coaction(e.action, tol, true);
  if (!c.passed) throw InvalidInput("CatalogEntryInvalid", e.name + ": coaction axioms fail");
  if (!c.faithful) throw InvalidInput("CatalogEntryInvalid", e.name + ": action is not faithful");
}

// ---------------------------------------------------------------------------------------------
// Random actions

/// Random permutation group on n points with order at most max_order.
inline PermutationGroup random_permutation_group(std::size_t n, std::uint64_t seed, std::size_t max_order = 24) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::uniform_int_distribution<int> count(1, 2);
    std::vector<std::vector<std::size_t>> gens;
    for (int k = count(rng); k > 0; --k) {
      std::vector<std::size_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      gens.push_back(std::move(p));
    }
    try {
      return generate_group(n, gens, max_order);
    } catch (const SizeGuardExceeded&) {
    }
  }
}

/// Metric invariant under the group: random weights on pair orbits, closed under shortest paths.
template <Field R>
FiniteMetricSpace<R> invariant_metric(const PermutationGroup& grp, std::uint64_t seed) {
  const std::size_t n = grp.degree;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, 4);
  Mat<R> m(n, n);
  std::vector<char> done(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (done[i * n + j]) continue;
      R w(weight(rng));
      for (const auto& g : grp.elements) {
        std::size_t a = g[i], b = g[j];
        m(a, b) = m(b, a) = w;
        done[a * n + b] = done[b * n + a] = 1;
      }
    }
  detail::shortest_path_closure(m);
  return validate_metric(m);
}

template <Field R>
CatalogEntry<R> random_classical_action(std::size_t n, std::uint64_t seed) {
  auto grp = random_permutation_group(n, seed);
  auto space = seed % 2 ? invariant_metric<R>(grp, seed + 1)
                        : random_metric_space<R>(n, seed + 1, MetricModel::ShortestPathGraph);
  std::string name = "random-classical-" + std::to_string(seed);
  return {name, classical_action<R>(grp, space, name), grp, "random permutation group"};
}

/// Random action of the dual of D4 on point blocks; the metric is block-structured on even seeds.
template <Field R>
CatalogEntry<R> random_dual_action(std::size_t max_points, std::uint64_t seed) {
  static const PermutationGroup grp = dihedral_group(4);
  static const auto dual = dual_dihedral<R>(4, grp);
  std::mt19937_64 rng(seed);
  const std::size_t reflections[] = {dihedral_element(grp, 0, 1), dihedral_element(grp, 1, 1),
                                     dihedral_element(grp, 2, 1), dihedral_element(grp, 3, 1)};
  const std::size_t rotation = dihedral_element(grp, 1, 0), half = dihedral_element(grp, 2, 0);
  std::vector<PointBlock> blocks;
  std::size_t n = 0;
  // one block guarantees faithfulness: a rotation of order 4 with a reflection, or two reflections
  // that generate the group
  std::uniform_int_distribution<int> shape(0, 1);
  if (shape(rng) == 0 && max_points >= 6) {
    blocks = {{rotation, 4}, {reflections[rng() % 4], 2}};
  } else {
    std::size_t a = rng() % 4, b = (a + 1 + 2 * (rng() % 2)) % 4;  // adjacent reflections
    blocks = {{reflections[a], 2}, {reflections[b], 2}};
  }
  for (const auto& b : blocks) n += b.size;
  while (n + 2 <= max_points && rng() % 2) {
    std::size_t pick = rng() % 5;
    blocks.push_back({pick < 4 ? reflections[pick] : half, 2});
    n += 2;
  }
  FiniteMetricSpace<R> space;
  if (seed % 2 == 0) {
    // distances constant between blocks, invariant under each block's cyclic shift inside
    std::uniform_int_distribution<int> w(1, 3);
    Mat<R> m(n, n);
    std::vector<std::size_t> start;
    std::size_t off = 0;
    for (const auto& b : blocks) {
      start.push_back(off);
      std::vector<R> step(b.size);
      for (std::size_t k = 1; k <= b.size / 2; ++k) step[k] = step[b.size - k] = R(w(rng));
      for (std::size_t i = 0; i < b.size; ++i)
        for (std::size_t j = 0; j < b.size; ++j) m(off + i, off + j) = step[(i + b.size - j) % b.size];
      off += b.size;
    }
    for (std::size_t p = 0; p < blocks.size(); ++p)
      for (std::size_t q = p + 1; q < blocks.size(); ++q) {
        R c(w(rng) + 1);
        for (std::size_t i = 0; i < blocks[p].size; ++i)
          for (std::size_t j = 0; j < blocks[q].size; ++j) m(start[p] + i, start[q] + j) = m(start[q] + j, start[p] + i) = c;
      }
    detail::shortest_path_closure(m);
    space = validate_metric(m);
  } else {
    space = random_metric_space<R>(n, seed, MetricModel::ShortestPathGraph);
  }
  std::string name = "random-dualD4-" + std::to_string(seed);
  return {name, dual_group_action<R>(grp, dual, blocks, space, name), std::nullopt, "random block action"};
}

}  // namespace qiso
