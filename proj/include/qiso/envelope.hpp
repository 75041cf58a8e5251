#pragma once

// Ideals of a block algebra are sums of whole blocks, so every ideal is a block subset and the
// quotient map is the compression onto the complementary blocks.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qiso/coaction.hpp"
#include "qiso/isometry.hpp"
#include "qiso/quantum_group.hpp"

namespace qiso {

struct BlockIdeal {
  std::vector<bool> included;

  BlockIdeal() = default;
  explicit BlockIdeal(std::size_t blocks) : included(blocks, false) {}

  bool contains(std::size_t k) const { return included[k]; }
  std::size_t size() const { return static_cast<std::size_t>(std::count(included.begin(), included.end(), true)); }
  bool empty() const { return size() == 0; }
  bool full() const { return size() == included.size(); }
  std::vector<std::size_t> blocks() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < included.size(); ++k)
      if (included[k]) out.push_back(k);
    return out;
  }
  std::vector<std::size_t> complement() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < included.size(); ++k)
      if (!included[k]) out.push_back(k);
    return out;
  }
  friend bool operator==(const BlockIdeal&, const BlockIdeal&) = default;
};

/// Block structure of a quantum group: which blocks occur in Delta of which, the counit block,
/// and the block each block is sent to by kappa.
struct FusionData {
  std::size_t blocks = 0;
  std::set<std::array<std::size_t, 3>> triples;  // (k, l, m): Delta(block k) meets block l (x) block m
  std::size_t counit_block = 0;
  std::vector<std::size_t> dual;
};

template <Field R>
FusionData fusion_data(const QuantumGroup<R>& g, const Tolerance& tol = {}) {
  const auto& sh = *g.shape;
  const std::size_t d = g.dim();
  FusionData fd;
  fd.blocks = sh.blocks();
  fd.dual.assign(fd.blocks, 0);
  for (std::size_t b = 0; b < d; ++b) {
    const std::size_t k = sh.coord(b).block;
    for (const auto& [idx, c] : g.delta[b])
      if (!is_zero<R>(c, tol)) fd.triples.insert({k, sh.coord(idx / d).block, sh.coord(idx % d).block});
    for (const auto& [i, c] : g.kappa[b])
      if (!is_zero<R>(c, tol)) fd.dual[k] = sh.coord(i).block;
  }
  bool found = false;
  for (std::size_t b = 0; b < d && !found; ++b)
    if (!is_zero<R>(g.epsilon[b], tol)) {
      fd.counit_block = sh.coord(b).block;
      found = true;
    }
  require(found, "ShapeMismatch", "counit vanishes identically");
  return fd;
}

/// Blocks on which some generator has a nonzero component.
template <Field R>
BlockIdeal generated_ideal(const QuantumGroup<R>& g, const std::vector<Element<R>>& generators,
                           const Tolerance& tol = {}) {
  BlockIdeal out(g.shape->blocks());
  for (const auto& e : generators)
    for (std::size_t k = 0; k < out.included.size(); ++k) {
      if (out.included[k]) continue;
      double nrm = e.block_norm(k);
      out.included[k] = is_exact_v<R> ? nrm != 0 : nrm > tol.eps;
    }
  return out;
}

/// c_xy = sum_j d(y,j) u_xj - kappa(sum_j d(x,j) u_yj), row-major in (x,y).
template <Field R>
std::vector<Element<R>> commutator_elements(const CoAction<R>& act) {
  std::vector<Element<R>> out;
  const std::size_t n = act.n();
  out.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      out.push_back(row_combination(act, x, act.space.row(y)) -
                    act.qg().antipode(row_combination(act, y, act.space.row(x))));
  return out;
}

struct SaturationResult {
  BlockIdeal ideal;
  std::size_t iterations = 0;       // rounds that changed the ideal
  bool reached_full_algebra = false;
};

/// Smallest enlargement of I whose complement K is closed: l, m in K and Delta(block k) meeting
/// l (x) m force k in K, and K is kappa-stable. A violating pair leaves K.
inline SaturationResult hopf_saturate(const FusionData& fd, BlockIdeal ideal) {
  SaturationResult out;
  for (;;) {
    BlockIdeal next = ideal;
    for (const auto& [k, l, m] : fd.triples)
      if (ideal.contains(k) && !ideal.contains(l) && !ideal.contains(m)) {
        if (l != fd.counit_block) next.included[l] = true;
        if (m != fd.counit_block) next.included[m] = true;
      }
    for (std::size_t k = 0; k < fd.blocks; ++k)
      if (ideal.contains(fd.dual[k])) next.included[k] = true;
    if (next == ideal) break;
    ideal = std::move(next);
    ++out.iterations;
  }
  out.reached_full_algebra = ideal.full();
  out.ideal = std::move(ideal);
  return out;
}

template <Field R>
SaturationResult hopf_saturate(const QuantumGroup<R>& g, const BlockIdeal& ideal, const Tolerance& tol = {}) {
  return hopf_saturate(fusion_data(g, tol), ideal);
}

/// kappa(I) as a block set.
inline BlockIdeal kappa_image(const FusionData& fd, const BlockIdeal& ideal) {
  BlockIdeal out(fd.blocks);
  for (std::size_t k = 0; k < fd.blocks; ++k)
    if (ideal.contains(k)) out.included[fd.dual[k]] = true;
  return out;
}

/// Complement of I is closed, contains the counit block, and is kappa-stable.
inline bool is_hopf_ideal(const FusionData& fd, const BlockIdeal& ideal) {
  if (ideal.contains(fd.counit_block)) return false;
  for (const auto& [k, l, m] : fd.triples)
    if (ideal.contains(k) && !ideal.contains(l) && !ideal.contains(m)) return false;
  for (std::size_t k = 0; k < fd.blocks; ++k)
    if (ideal.contains(k) != ideal.contains(fd.dual[k])) return false;
  return true;
}

template <Field R>
struct Quotient {
  std::shared_ptr<const QuantumGroup<R>> group;
  std::vector<std::size_t> kept;   // surviving blocks of the original algebra, in order
  std::vector<std::size_t> index;  // original coordinate -> quotient coordinate, or dim() if killed
  double well_defined = 0;         // || (T (x) T) Delta(I) ||

  Element<R> project(const Element<R>& a) const {
    Element<R> out(group->shape);
    for (std::size_t i = 0; i < index.size(); ++i)
      if (index[i] < group->dim()) out[index[i]] = a[i];
    return out;
  }
};

/// Compression of the Hopf structure onto the blocks outside I.
template <Field R>
Quotient<R> quotient_by(const QuantumGroup<R>& g, const BlockIdeal& ideal, std::string name = {}) {
  const auto& sh = *g.shape;
  const std::size_t d = g.dim();
  Quotient<R> q;
  q.kept = ideal.complement();
  require(!q.kept.empty(), "SaturationReachedFullAlgebra", "quotient by the full algebra");
  std::vector<std::size_t> sizes;
  for (auto k : q.kept) sizes.push_back(sh.size(k));
  auto b = QuantumGroup<R>::make(sizes, std::move(name));
  const std::size_t nd = b.dim();
  q.index.assign(d, nd);
  for (std::size_t pos = 0; pos < q.kept.size(); ++pos) {
    const std::size_t k = q.kept[pos];
    for (std::size_t a = 0; a < sh.size(k); ++a)
      for (std::size_t c = 0; c < sh.size(k); ++c) q.index[sh.index(k, a, c)] = b.shape->index(pos, a, c);
  }
  double leak = 0;
  for (std::size_t beta = 0; beta < d; ++beta) {
    const std::size_t nb = q.index[beta];
    for (const auto& [idx, c] : g.delta[beta]) {
      const std::size_t x = q.index[idx / d], y = q.index[idx % d];
      if (x == nd || y == nd) continue;
      if (nb == nd) leak += to_double(norm2(c));
      else b.delta[nb].emplace_back(x * nd + y, c);
    }
    if (nb == nd) continue;
    b.epsilon[nb] = g.epsilon[beta];
    for (const auto& [i, c] : g.kappa[beta])
      if (q.index[i] < nd) b.kappa[nb].emplace_back(q.index[i], c);
  }
  for (auto& col : b.delta) std::sort(col.begin(), col.end(), [](auto& u, auto& v) { return u.first < v.first; });
  for (auto& col : b.kappa) std::sort(col.begin(), col.end(), [](auto& u, auto& v) { return u.first < v.first; });
  q.well_defined = std::sqrt(leak);
  q.group = std::make_shared<const QuantumGroup<R>>(std::move(b));
  return q;
}

template <Field R>
CoAction<R> induced_action(const CoAction<R>& act, const Quotient<R>& q) {
  CoAction<R> out{q.group, act.space, {}, act.name.empty() ? std::string() : act.name + " / envelope"};
  out.u.assign(act.n(), {});
  for (std::size_t i = 0; i < act.n(); ++i)
    for (std::size_t j = 0; j < act.n(); ++j) out.u[i].push_back(q.project(act.u[i][j]));
  return out;
}

template <Field R>
struct EnvelopeResult {
  BlockIdeal generated;  // ideal generated by the c_xy
  BlockIdeal ideal;      // after saturation
  std::size_t iterations = 0;
  bool reached_full_algebra = false;
  Quotient<R> quotient;
  CoAction<R> induced;
};

template <Field R>
EnvelopeResult<R> envelope(const CoAction<R>& act, const Tolerance& tol = {}) {
  const auto& g = act.qg();
  EnvelopeResult<R> env;
  env.generated = generated_ideal(g, commutator_elements(act), tol);
  auto sat = hopf_saturate(g, env.generated, tol);
  env.ideal = sat.ideal;
  env.iterations = sat.iterations;
  env.reached_full_algebra = sat.reached_full_algebra;
  if (env.reached_full_algebra) return env;
  env.quotient = quotient_by(g, env.ideal, g.name.empty() ? std::string() : g.name + " envelope");
  env.induced = induced_action(act, env.quotient);
  return env;
}

struct UniversalPropertyReport {
  std::size_t closed_sets = 0;       // Hopf quotients enumerated
  std::size_t isometric = 0;         // of those, quotients whose induced action satisfies (D)
  std::size_t factorization_failures = 0;
  std::size_t larger_isometric = 0;  // isometric quotients keeping strictly more than the envelope
  bool envelope_found = false;
};

/// Closed block sets containing the counit block, by closure from single additions.
inline std::vector<std::vector<bool>> enumerate_closed_sets(const FusionData& fd, std::size_t limit = 1u << 16) {
  require(fd.blocks <= 64, "ShapeMismatch", "closure enumeration supports at most 64 blocks");
  auto closure = [&](std::vector<bool> s) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [k, l, m] : fd.triples)
        if (s[l] && s[m] && !s[k]) s[k] = changed = true;
      for (std::size_t k = 0; k < fd.blocks; ++k)
        if (s[k] && !s[fd.dual[k]]) s[fd.dual[k]] = changed = true;
    }
    return s;
  };
  std::vector<bool> start(fd.blocks, false);
  start[fd.counit_block] = true;
  std::set<std::vector<bool>> seen{closure(start)};
  std::vector<std::vector<bool>> out{*seen.begin()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t b = 0; b < fd.blocks; ++b) {
      if (out[i][b]) continue;
      auto s = out[i];
      s[b] = true;
      s = closure(std::move(s));
      if (seen.insert(s).second) {
        if (out.size() >= limit) throw SizeGuardExceeded("more than " + std::to_string(limit) + " closed block sets");
        out.push_back(std::move(s));
      }
    }
  return out;
}

/// Every Hopf quotient on which the action satisfies (D) must keep only blocks the envelope keeps.
template <Field R>
UniversalPropertyReport verify_universal_property(const CoAction<R>& act, const EnvelopeResult<R>& env,
                                                  const Tolerance& tol = {}) {
  const auto& g = act.qg();
  auto fd = fusion_data(g, tol);
  UniversalPropertyReport rep;
  for (const auto& kept : enumerate_closed_sets(fd)) {
    BlockIdeal j(fd.blocks);
    for (std::size_t k = 0; k < fd.blocks; ++k) j.included[k] = !kept[k];
    if (!is_hopf_ideal(fd, j)) continue;
    ++rep.closed_sets;
    auto q = quotient_by(g, j);
    if (!detail::residual_ok<R>(q.well_defined, tol)) continue;
    if (!check_D(induced_action(act, q), tol).holds) continue;
    ++rep.isometric;
    if (j == env.ideal) rep.envelope_found = true;
    bool factors = true, covers = true;
    for (std::size_t k = 0; k < fd.blocks; ++k) {
      if (kept[k] && env.ideal.contains(k)) factors = false;
      if (!kept[k] && !env.ideal.contains(k)) covers = false;
    }
    if (!factors) ++rep.factorization_failures;
    if (covers && j.size() < env.ideal.size()) ++rep.larger_isometric;
  }
  return rep;
}

/// Functionals vanishing on I are closed under convolution, tested on random pairs.
template <Field R>
bool annihilator_convolution_check(const QuantumGroup<R>& g, const BlockIdeal& ideal, std::size_t samples,
                                   std::uint64_t seed = 0, const Tolerance& tol = {}) {
  const auto& sh = *g.shape;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto sample = [&] {
    Functional<R> f(g.shape);
    for (std::size_t a = 0; a < g.dim(); ++a) {
      if (ideal.contains(sh.coord(a).block)) continue;
      if constexpr (is_exact_v<R>) f[a] = Cx<R>(R(coef(rng)), R(coef(rng)));
      else f[a] = Cx<R>(gauss(rng), gauss(rng));
    }
    return f;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    auto h = convolve(g, sample(), sample());
    for (std::size_t a = 0; a < g.dim(); ++a)
      if (ideal.contains(sh.coord(a).block) && !is_zero<R>(h[a], tol)) return false;
  }
  return true;
}

}  // namespace qiso
