#pragma once

#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qiso/algebra.hpp"
#include "qiso/coaction.hpp"
#include "qiso/hall.hpp"
#include "qiso/transport.hpp"

namespace qiso {

enum class Condition { D, LipP, LipInf, TheoremMain, SupportConjecture };

inline std::string condition_name(Condition c) {
  switch (c) {
    case Condition::D: return "D";
    case Condition::LipP: return "Lip_p";
    case Condition::LipInf: return "Lip_inf";
    case Condition::TheoremMain: return "TheoremMain";
    case Condition::SupportConjecture: return "SupportConjecture";
  }
  return "?";
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

template <Field R>
struct IsometryWitness {
  std::size_t x = 0, y = 0;
  double violation = 0;
  std::optional<PointSet> subset;
  std::vector<R> f, g;                    // offending vertex, when one is involved
  std::optional<Functional<R>> state;     // a state exhibiting the failure
};

template <Field R>
struct IsometryVerdict {
  Condition condition = Condition::D;
  double p = 1;
  bool universal = true;
  bool holds = true;
  std::optional<IsometryWitness<R>> witness;
  std::size_t checked = 0;  // number of inequalities or identities examined
  double margin = 0;        // worst value of lhs - rhs seen (<= tol when holding)

  std::string label() const {
    if (condition == Condition::LipP) {
      std::ostringstream os;
      os << "Lip_" << p;
      return os.str();
    }
    return condition_name(condition);
  }
};

namespace detail {

template <Field R>
bool residual_ok(double r, const Tolerance& tol) {
  return is_exact_v<R> ? r == 0 : r <= tol.eps;
}

/// Records a failure of PSD(a) for the pair (x,y); returns true when a is PSD.
template <Field R>
bool psd_or_witness(const Element<R>& a, std::size_t x, std::size_t y, IsometryVerdict<R>& v, const Tolerance& tol) {
  ++v.checked;
  auto cert = check_psd(a, tol);
  v.margin = std::max(v.margin, -cert.min_eigenvalue);
  if (cert.psd) return true;
  if (v.holds) {
    v.holds = false;
    IsometryWitness<R> w;
    w.x = x;
    w.y = y;
    w.violation = -cert.min_eigenvalue;
    w.state = vector_state(a.shape_ptr(), cert.block, cert.witness);
    v.witness = std::move(w);
  }
  return false;
}

template <Field R>
R pow_p(const R& x, double p) {
  return is_positive_integer(p) ? pow_int(x, static_cast<unsigned>(p)) : pow_real(x, p);
}

}  // namespace detail

/// (D): sum_j d(y,j) u_xj = sum_j d(x,j) kappa(u_yj) for every pair.
template <Field R>
IsometryVerdict<R> check_D(const CoAction<R>& act, const Tolerance& tol = {}) {
  IsometryVerdict<R> v;
  v.condition = Condition::D;
  const auto& g = act.qg();
  const std::size_t n = act.n();
  double worst = -1;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Element<R> lhs = row_combination(act, x, act.space.row(y));
      Element<R> rhs = g.antipode(row_combination(act, y, act.space.row(x)));
      double r = distance(lhs, rhs);
      ++v.checked;
      if (r > worst) {
        worst = r;
        v.margin = r;
        if (!detail::residual_ok<R>(r, tol)) {
          v.holds = false;
          IsometryWitness<R> w;
          w.x = x;
          w.y = y;
          w.violation = r;
          v.witness = std::move(w);
        }
      }
    }
  return v;
}

/// (D) as commutation of u with the distance matrix; valid when kappa(u_ij) = u_ji.
template <Field R>
IsometryVerdict<R> check_D_commutant(const CoAction<R>& act, const Tolerance& tol = {}) {
  if (!kappa_is_transpose(act, tol))
    throw InvalidInput("KappaConventionMismatch", "kappa(u_ij) != u_ji; the commutant form does not apply");
  IsometryVerdict<R> v;
  v.condition = Condition::D;
  const std::size_t n = act.n();
  double worst = -1;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Element<R> c = act.qg().zero();
      for (std::size_t j = 0; j < n; ++j) {
        c += Cx<R>(act.space.d(j, y)) * act.u[x][j];
        c -= Cx<R>(act.space.d(x, j)) * act.u[j][y];
      }
      double r = c.hs_norm();
      ++v.checked;
      if (r > worst) {
        worst = r;
        v.margin = r;
        if (!detail::residual_ok<R>(r, tol)) {
          v.holds = false;
          v.witness = IsometryWitness<R>{x, y, r, std::nullopt, {}, {}, std::nullopt};
        }
      }
    }
  return v;
}

/// Ball form of (D): a_{x;B(y,r)} = kappa(a_{y;B(x,r)}) for every realized radius r.
template <Field R>
IsometryVerdict<R> check_D_balls(const CoAction<R>& act, const Tolerance& tol = {}) {
  IsometryVerdict<R> v;
  v.condition = Condition::D;
  const auto& s = act.space;
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y = 0; y < s.n; ++y)
      for (const auto& r : s.realized) {
        auto lhs = a_element(act, x, ball(s, y, R(0), r));
        auto rhs = act.qg().antipode(a_element(act, y, ball(s, x, R(0), r)));
        double res = distance(lhs, rhs);
        ++v.checked;
        v.margin = std::max(v.margin, res);
        if (!detail::residual_ok<R>(res, tol) && v.holds) {
          v.holds = false;
          v.witness = IsometryWitness<R>{x, y, res, ball(s, y, R(0), r), {}, {}, std::nullopt};
        }
      }
  return v;
}

/// W_p(x <| psi, y <| psi) <= d(x,y) for all pairs; p may be infinite.
template <Field R>
IsometryVerdict<R> check_lip_p_state(const CoAction<R>& act, const Functional<R>& psi, double p,
                                     const Tolerance& tol = {}) {
  require(p >= 1, "InvalidInput", "p must be >= 1");
  IsometryVerdict<R> v;
  v.condition = std::isinf(p) ? Condition::LipInf : Condition::LipP;
  v.p = p;
  v.universal = false;
  const auto& s = act.space;
  std::vector<ProbVector<R>> img;
  for (std::size_t x = 0; x < s.n; ++x) img.push_back(act_on_point(act, x, psi));
  double worst = -kInfinity;
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y = x + 1; y < s.n; ++y) {
      bool ok;
      double excess;
      if (std::isinf(p)) {
        auto b = wasserstein_inf(s, img[x], img[y], tol);
        ok = approx_le<R>(b.r, s.d(x, y), tol);
        excess = to_double(R(b.r - s.d(x, y)));
      } else {
        R wpp = wasserstein_pp(s, img[x], img[y], p, tol).value;
        R dp = detail::pow_p(s.d(x, y), p);
        ok = approx_le<R>(wpp, dp, tol);
        excess = std::pow(std::max(0.0, to_double(wpp)), 1.0 / p) - to_double(s.d(x, y));
      }
      ++v.checked;
      if (excess > worst) {
        worst = excess;
        v.margin = excess;
      }
      if (!ok && v.holds) {
        v.holds = false;
        v.witness = IsometryWitness<R>{x, y, excess, std::nullopt, {}, {}, psi};
      }
    }
  return v;
}

/// Universal (Lip_1): lambda_max(sum_j f_j (u_xj - u_yj)) <= d(x,y) over Lipschitz vertices f.
template <Field R>
IsometryVerdict<R> check_lip1_universal(const CoAction<R>& act, const Tolerance& tol = {},
                                        std::size_t guard = kVertexGuard) {
  IsometryVerdict<R> v;
  v.condition = Condition::LipP;
  v.p = 1;
  const auto& s = act.space;
  auto vertices = enumerate_lipschitz_vertices(s, guard);
  const Element<R> one = act.qg().unit();
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y = x + 1; y < s.n; ++y)
      for (const auto& f : vertices) {
        Element<R> a = Cx<R>(s.d(x, y)) * one - (row_combination(act, x, f) - row_combination(act, y, f));
        if (!detail::psd_or_witness(a, x, y, v, tol) && v.witness->f.empty()) v.witness->f = f;
      }
  return v;
}

template <Field R>
IsometryVerdict<R> check_winf_universal(const CoAction<R>& act, const Tolerance& tol = {},
                                        std::size_t guard = kSubsetGuard);

/// Universal (Lip_p): lambda_max(sum f_j u_xj + sum g_j u_yj) <= d(x,y)^p over the vertices of the
/// dual polytope normalized by g_{n-1} = 0.
template <Field R>
IsometryVerdict<R> check_lip_p_universal(const CoAction<R>& act, double p, const Tolerance& tol = {},
                                         std::size_t guard = kVertexGuard) {
  require(p >= 1, "InvalidInput", "p must be >= 1");
  if (std::isinf(p)) return check_winf_universal(act, tol);
  IsometryVerdict<R> v;
  v.condition = Condition::LipP;
  v.p = p;
  const auto& s = act.space;
  Mat<R> cost = power_cost(s, p);
  auto vertices = enumerate_dual_vertices(cost, tol, guard);
  const Element<R> one = act.qg().unit();
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y = x + 1; y < s.n; ++y)
      for (const auto& fg : vertices) {
        Element<R> a = Cx<R>(cost(x, y)) * one - (row_combination(act, x, fg.f) + row_combination(act, y, fg.g));
        if (!detail::psd_or_witness(a, x, y, v, tol) && v.witness->f.empty()) {
          v.witness->f = fg.f;
          v.witness->g = fg.g;
        }
      }
  return v;
}

namespace detail {

/// PSD(a_{y;N_Y(S)} - a_{x;S}) for every nonempty S, with Y chosen per pair.
template <Field R, class PairSetFor>
IsometryVerdict<R> universal_support(const CoAction<R>& act, Condition cond, PairSetFor pairs, const Tolerance& tol,
                                     std::size_t guard) {
  IsometryVerdict<R> v;
  v.condition = cond;
  v.p = kInfinity;
  const std::size_t n = act.n();
  if (n > guard) throw SizeGuardExceeded("subset exhaustion limited to n <= " + std::to_string(guard));
  const PointSet everything = PointSet::all(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<Element<R>> ax(std::size_t(1) << n);
    for (std::uint64_t m = 1; m < (std::uint64_t(1) << n); ++m) {
      std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
      ax[m] = (m & (m - 1)) ? ax[m & (m - 1)] + act.u[x][low] : act.u[x][low];
    }
    for (std::size_t y = x + 1; y < n; ++y) {
      const PairSet ys = pairs(x, y);
      for (std::uint64_t m = 1; m < (std::uint64_t(1) << n); ++m) {
        PointSet nbr = neighborhood(ys, PointSet(m), Direction::Forward);
        if (nbr == everything) continue;
        Element<R> a = a_element(act, y, nbr) - ax[m];
        if (!psd_or_witness(a, x, y, v, tol) && !v.witness->subset) v.witness->subset = PointSet(m);
      }
    }
  }
  return v;
}

}  // namespace detail

/// Universal (Lip_inf): couplings of (x <| psi, y <| psi) on the sublevel set of d(x,y) for all psi.
template <Field R>
IsometryVerdict<R> check_winf_universal(const CoAction<R>& act, const Tolerance& tol, std::size_t guard) {
  const auto& s = act.space;
  return detail::universal_support(
      act, Condition::LipInf, [&](std::size_t x, std::size_t y) { return sublevel_set(s, s.d(x, y)); }, tol, guard);
}

/// Universal level-set coupling: supported on {d(x',y') = d(x,y)}.
template <Field R>
IsometryVerdict<R> check_theorem_main(const CoAction<R>& act, const Tolerance& tol = {},
                                      std::size_t guard = kSubsetGuard) {
  const auto& s = act.space;
  return detail::universal_support(
      act, Condition::TheoremMain, [&](std::size_t x, std::size_t y) { return level_set(s, s.d(x, y)); }, tol, guard);
}

/// Per-state support check through the Hall decision: level set when `level`, else sublevel set.
template <Field R>
IsometryVerdict<R> check_support_state(const CoAction<R>& act, const Functional<R>& psi, bool level,
                                       const Tolerance& tol = {}) {
  IsometryVerdict<R> v;
  v.condition = level ? Condition::TheoremMain : Condition::LipInf;
  v.p = kInfinity;
  v.universal = false;
  const auto& s = act.space;
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y = x + 1; y < s.n; ++y) {
      HallInstance<R> inst{act_on_point(act, x, psi), act_on_point(act, y, psi),
                           level ? level_set(s, s.d(x, y)) : sublevel_set(s, s.d(x, y))};
      auto h = decide_hall(inst, tol);
      ++v.checked;
      if (!h.feasible && v.holds) {
        v.holds = false;
        v.witness = IsometryWitness<R>{x, y, to_double(R(h.mu_S - h.nu_NS)), h.violator, {}, {}, psi};
      }
    }
  return v;
}

/// ||a_{x;S} a_{y;T}|| under the separation hypothesis |d(s,t) - d(x,y)| >= delta on S x T.
template <Field R>
double orthogonality_product(const CoAction<R>& act, std::size_t x, std::size_t y, PointSet s, PointSet t,
                             const R& delta) {
  const auto& sp = act.space;
  require(delta > 0, "HypothesisViolated", "delta must be positive");
  for (auto i : s.members())
    for (auto j : t.members())
      require(!definitely_lt<R>(abs_value<R>(sp.d(i, j) - sp.d(x, y)), delta, sp.tol), "HypothesisViolated",
              "a pair in S x T is within delta of d(x,y)");
  return (a_element(act, x, s) * a_element(act, y, t)).hs_norm();
}

template <Field R>
bool check_orthogonality(const CoAction<R>& act, std::size_t x, std::size_t y, PointSet s, PointSet t, const R& delta,
                         const Tolerance& tol = {}) {
  return detail::residual_ok<R>(orthogonality_product(act, x, y, s, t, delta), tol);
}

/// f -> (sum_j f_j u_xj)_x has rank n.
template <Field R>
bool check_injectivity(const CoAction<R>& act, const Tolerance& tol = {}) {
  const std::size_t n = act.n(), d = act.qg().dim();
  SpanBuilder<Cx<R>> span(n * d, tol);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Cx<R>> col(n * d);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t a = 0; a < d; ++a) col[x * d + a] = act.u[x][j][a];
    span.add(std::move(col));
  }
  return span.dimension() == n;
}

/// L(psi |> f) <= L(f) on random functions and on every Lipschitz vertex.
template <Field R>
bool check_lip_seminorm_state(const CoAction<R>& act, const Functional<R>& psi, std::size_t samples,
                              std::uint64_t seed = 0, const Tolerance& tol = {}) {
  const auto& s = act.space;
  std::vector<std::vector<R>> fs = enumerate_lipschitz_vertices(s);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-20, 20);
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<R> f(s.n);
    for (auto& x : f) x = R(coef(rng));
    fs.push_back(std::move(f));
  }
  for (const auto& f : fs) {
    R lf = lipschitz_constant(s, f);
    R lg = lipschitz_constant(s, act_on_function(act, psi, f));
    if (!approx_le<R>(lg, lf, tol)) return false;
  }
  return true;
}

/// Elements of G preserving d, by direct enumeration of the group.
inline std::vector<std::size_t> isometry_subgroup(const PermutationGroup& grp,
                                                  const std::function<bool(std::size_t, std::size_t, std::size_t, std::size_t)>& same_distance) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < grp.order(); ++e) {
    const auto& g = grp.elements[e];
    bool ok = true;
    for (std::size_t i = 0; i < grp.degree && ok; ++i)
      for (std::size_t j = 0; j < grp.degree && ok; ++j) ok = same_distance(g[i], g[j], i, j);
    if (ok) out.push_back(e);
  }
  return out;
}

template <Field R>
std::vector<std::size_t> isometry_subgroup(const PermutationGroup& grp, const FiniteMetricSpace<R>& s) {
  return isometry_subgroup(grp, [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return approx_eq<R>(s.d(a, b), s.d(c, d), s.tol);
  });
}

}  // namespace qiso
