#pragma once

#include <optional>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/metric.hpp"
#include "qiso/transport.hpp"

namespace qiso {

enum class Direction { Forward, Backward };

/// Forward: {x' : (x,x') in Y for some x in S}. Backward: {x' : (x',x) in Y for some x in S}.
inline PointSet neighborhood(const PairSet& y, PointSet s, Direction dir) {
  PointSet out;
  for (auto i : s.members())
    for (std::size_t j = 0; j < y.n(); ++j)
      if (dir == Direction::Forward ? y.contains(i, j) : y.contains(j, i)) out.insert(j);
  return out;
}

template <Field R>
struct HallInstance {
  ProbVector<R> mu, nu;
  PairSet y;
};

template <Field R>
struct HallVerdict {
  bool feasible = false;
  std::optional<Coupling<R>> coupling;
  std::optional<PointSet> violator;
  R mu_S{0};
  R nu_NS{0};
};

struct SubsetCheck {
  bool holds = true;
  std::optional<PointSet> violator;
};

inline constexpr std::size_t kSubsetGuard = 20;

/// nu(N(S)) >= mu(S) for all S, by exhaustion in increasing bitmask order.
template <Field R>
SubsetCheck hall_condition(const HallInstance<R>& inst, const Tolerance& tol = {},
                           std::size_t guard = kSubsetGuard) {
  const std::size_t n = inst.mu.size();
  require(inst.nu.size() == n && inst.y.n() == n, "DimensionMismatch", "instance dimensions disagree");
  if (n > guard) throw SizeGuardExceeded("subset exhaustion limited to n <= " + std::to_string(guard));
  // precompute neighbourhoods and masses of singletons; unions are bitwise
  std::vector<std::uint64_t> nb(n);
  for (std::size_t i = 0; i < n; ++i) nb[i] = neighborhood(inst.y, PointSet::single(i), Direction::Forward).bits();
  const std::uint64_t count = 1ull << n;
  for (std::uint64_t s = 1; s < count; ++s) {
    std::uint64_t ns = 0;
    for (std::uint64_t b = s; b; b &= b - 1) ns |= nb[static_cast<std::size_t>(std::countr_zero(b))];
    if (definitely_lt<R>(inst.nu.measure(PointSet(ns)), inst.mu.measure(PointSet(s)), tol))
      return SubsetCheck{false, PointSet(s)};
  }
  return SubsetCheck{};
}

template <Field R>
HallVerdict<R> decide_hall(const HallInstance<R>& inst, const Tolerance& tol = {}) {
  auto r = feasible_coupling_on(inst.mu, inst.nu, inst.y, tol);
  HallVerdict<R> v;
  v.feasible = r.feasible;
  if (r.feasible) {
    v.coupling = std::move(r.coupling);
  } else {
    v.violator = r.violator;
    v.mu_S = r.mu_S;
    v.nu_NS = r.nu_NS;
  }
  return v;
}

struct MatchingResult {
  bool perfect = false;
  std::vector<std::size_t> match;  // left i -> right match[i]
  std::optional<PointSet> violator;  // |N(S)| < |S|
};

/// Perfect matching of a square bipartite graph via the uniform-marginal coupling problem.
inline MatchingResult perfect_matching(const std::vector<std::vector<bool>>& adjacency) {
  const std::size_t n = adjacency.size();
  for (const auto& row : adjacency)
    require(row.size() == n, "NonSquareBipartition", "both sides must have the same size");
  MatchingResult out;
  if (n == 0) {
    out.perfect = true;
    return out;
  }
  PairSet y(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency[i][j]) y.insert(i, j);
  HallInstance<Rational> inst{uniform<Rational>(n), uniform<Rational>(n), y};
  auto verdict = decide_hall(inst);
  if (!verdict.feasible) {
    out.violator = verdict.violator;
    return out;
  }
  // augmenting paths push multiples of 1/n, so each left vertex routes its whole mass on one arc
  const Rational unit = Rational(1) / Rational(static_cast<long long>(n));
  out.perfect = true;
  out.match.assign(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (verdict.coupling->plan(i, j) == unit) out.match[i] = j;
  for (auto j : out.match)
    if (j == n) throw StructureError("CertificateFailure", "flow was not integral");
  return out;
}

}  // namespace qiso
