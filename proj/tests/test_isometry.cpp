#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qiso/catalog.hpp"
#include "qiso/isometry.hpp"

using namespace qiso;
using Q = Rational;

namespace {

const double kInf = kInfinity;

template <Field R>
CatalogEntry<R> entry(const std::string& name) {
  for (auto& e : builtin_catalog<R>())
    if (e.name == name) return e;
  throw std::runtime_error("no catalog entry " + name);
}

/// Classical answer: every group element preserves d.
bool all_isometric(const CatalogEntry<Q>& e) {
  auto iso = oracle::isometries(e.action.space.dist);
  for (const auto& g : e.group->elements)
    if (!iso.count(g)) return false;
  return true;
}

std::vector<CatalogEntry<Q>> population() {
  auto out = builtin_catalog<Q>();
  for (std::uint64_t s = 0; s < 8; ++s) {
    out.push_back(random_classical_action<Q>(3 + s % 3, 100 + s));
    out.push_back(random_dual_action<Q>(6, 200 + s));
  }
  return out;
}

Functional<Q> point_mass(const QuantumGroup<Q>& g, std::size_t k) {
  Functional<Q> f(g.shape);
  f[g.shape->index(k, 0, 0)] = Cx<Q>(1);
  return f;
}

/// max over vertices of lambda_max(sum f_j u_xj + sum g_j u_yj) - c(x,y)
double worst_excess(const CoAction<Q>& act, const Mat<Q>& cost, const std::vector<std::vector<Q>>& fg) {
  const std::size_t n = act.n();
  double worst = -1e300;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (const auto& v : fg) {
        std::vector<Q> f(v.begin(), v.begin() + n), g(v.begin() + n, v.end());
        auto a = row_combination(act, x, f) + row_combination(act, y, g);
        worst = std::max(worst, lambda_max(a).first - cost(x, y).convert_to<double>());
      }
  return worst;
}

}  // namespace

TEST(Isometry, DExamples) {
  auto one = std::make_shared<const QuantumGroup<Q>>(function_algebra<Q>(generate_group(4, {})));
  auto triv = trivial_action(one, entry<Q>("S4-path").action.space);
  EXPECT_TRUE(check_D(triv).holds);
  for (std::size_t n : {3, 4, 5}) EXPECT_TRUE(check_D(entry<Q>("Z" + std::to_string(n) + "-cycle").action).holds);

  auto s3 = entry<Q>("S3-isosceles");
  auto v = check_D(s3.action);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_GT(v.witness->violation, 0.0);
  EXPECT_EQ(v.margin, v.witness->violation);
  EXPECT_FALSE(check_D_commutant(s3.action).holds);
  EXPECT_FALSE(check_D_balls(s3.action).holds);
}

TEST(Isometry, CommutantNeedsTransposeAntipode) {
  auto act = entry<Q>("Z3-cycle").action;
  std::swap(act.u[0], act.u[1]);
  EXPECT_THROW(check_D_commutant(act), InvalidInput);
}

TEST(Isometry, LipStateExamples) {
  for (const auto& e : builtin_catalog<Q>()) {
    const auto eps = e.action.qg().counit_functional();
    for (double p : {1.0, 2.0, 3.0, kInf}) {
      auto v = check_lip_p_state(e.action, eps, p);
      EXPECT_TRUE(v.holds) << e.name << " p=" << p;
      EXPECT_LE(v.margin, 1e-12) << e.name;
    }
  }
  // an isometric group element moves every pair to a pair at the same distance
  auto d4 = entry<Q>("D4-square");
  for (std::size_t k = 0; k < d4.group->order(); ++k)
    for (double p : {1.0, 2.0, kInf}) {
      auto v = check_lip_p_state(d4.action, point_mass(d4.action.qg(), k), p);
      EXPECT_TRUE(v.holds);
      EXPECT_NEAR(v.margin, 0.0, 1e-12);
    }
  for (const auto& e : builtin_catalog<double>()) {
    if (!check_D(e.action, Tolerance{1e-10}).holds) continue;
    auto h = haar_state(e.action.qg(), Tolerance{1e-10}).h;
    for (double p : {1.0, 2.0, 4.0, kInf}) EXPECT_TRUE(check_lip_p_state(e.action, h, p, Tolerance{1e-9}).holds) << e.name;
  }
}

TEST(Isometry, Lip1WitnessIsANonIsometry) {
  auto e = entry<Q>("S3-isosceles");
  auto v = check_lip1_universal(e.action);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness && v.witness->state);
  EXPECT_FALSE(v.witness->f.empty());
  // the witness state of C(G) is a point mass at some g
  const auto& st = *v.witness->state;
  std::size_t mass_at = e.group->order();
  for (std::size_t k = 0; k < e.group->order(); ++k)
    if (st[e.action.qg().shape->index(k, 0, 0)] == Cx<Q>(1)) mass_at = k;
  ASSERT_LT(mass_at, e.group->order());
  EXPECT_FALSE(oracle::isometries(e.action.space.dist).count(e.group->elements[mass_at]));
  EXPECT_FALSE(check_lip_p_state(e.action, st, 1).holds);
}

TEST(Isometry, ClassicalVerdictsMatchIsometryOracle) {
  for (const auto& e : population()) {
    if (!e.classical()) continue;
    const bool iso = all_isometric(e);
    EXPECT_EQ(check_D(e.action).holds, iso) << e.name;
    EXPECT_EQ(check_lip1_universal(e.action).holds, iso) << e.name;
    for (double p : {2.0, 3.0, kInf}) EXPECT_EQ(check_lip_p_universal(e.action, p).holds, iso) << e.name << " p=" << p;
    EXPECT_EQ(check_theorem_main(e.action).holds, iso) << e.name;
    std::set<std::size_t> sub;
    for (auto k : isometry_subgroup(*e.group, e.action.space)) sub.insert(k);
    auto oracle_iso = oracle::isometries(e.action.space.dist);
    for (std::size_t k = 0; k < e.group->order(); ++k) EXPECT_EQ(sub.count(k) == 1, oracle_iso.count(e.group->elements[k]) == 1);
  }
}

TEST(Isometry, Lip1AgreesWithDAcrossModes) {
  for (const auto& e : population()) {
    const bool d = check_D(e.action).holds;
    EXPECT_EQ(check_lip1_universal(e.action).holds, d) << e.name;
    EXPECT_EQ(check_lip_p_universal(e.action, 1.0).holds, d) << e.name;
    EXPECT_EQ(check_D_balls(e.action).holds, d) << e.name;
    if (kappa_is_transpose(e.action)) EXPECT_EQ(check_D_commutant(e.action).holds, d) << e.name;
  }
  const Tolerance tol{1e-9};
  for (const auto& e : builtin_catalog<double>()) {
    const bool d = check_D(e.action, tol).holds;
    EXPECT_EQ(check_lip1_universal(e.action, tol).holds, d) << e.name;
    EXPECT_EQ(check_D_commutant(e.action, tol).holds, d) << e.name;
  }
}

TEST(IsometryProperty, TowerOfConditions) {
  int d_holds = 0, d_fails = 0;
  for (const auto& e : population()) {
    const auto& act = e.action;
    const bool d = check_D(act).holds;
    (d ? d_holds : d_fails)++;
    const bool l1 = check_lip1_universal(act).holds, l2 = check_lip_p_universal(act, 2.0).holds,
               l3 = check_lip_p_universal(act, 3.0).holds, linf = check_winf_universal(act).holds,
               main = check_theorem_main(act).holds;
    if (d) EXPECT_TRUE(l1 && l2 && l3 && linf && main) << e.name;
    if (l3) EXPECT_TRUE(l2) << e.name;
    if (l2) EXPECT_TRUE(l1) << e.name;
    if (linf) EXPECT_TRUE(l3) << e.name;
    if (main) EXPECT_TRUE(linf) << e.name;
    if (d) EXPECT_TRUE(check_injectivity(act)) << e.name;
  }
  EXPECT_GT(d_holds, 5);
  EXPECT_GT(d_fails, 3);
}

TEST(IsometryProperty, PerStateAgreesWithUniversal) {
  for (const auto& e : builtin_catalog<Q>()) {
    const auto& act = e.action;
    for (double p : {1.0, 2.0, kInf}) {
      const bool uni = check_lip_p_universal(act, p).holds;
      for (std::uint64_t s = 0; s < 15; ++s) {
        auto psi = random_state<Q>(act.qg().shape, s);
        const bool st = check_lip_p_state(act, psi, p).holds;
        if (uni) EXPECT_TRUE(st) << e.name << " p=" << p;
        if (!st) EXPECT_FALSE(uni) << e.name << " p=" << p;
      }
      // the witness state of a universal failure fails on its own
      auto v = check_lip_p_universal(act, p);
      if (!v.holds && v.witness->state) {
        auto w = p == kInf ? check_support_state(act, *v.witness->state, false) : check_lip_p_state(act, *v.witness->state, p);
        EXPECT_FALSE(w.holds) << e.name << " p=" << p;
      }
    }
    const bool main = check_theorem_main(act).holds;
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto psi = random_state<Q>(act.qg().shape, s);
      auto lv = check_support_state(act, psi, true), sv = check_support_state(act, psi, false);
      if (main) EXPECT_TRUE(lv.holds) << e.name;
      if (lv.holds) EXPECT_TRUE(sv.holds) << e.name;
      EXPECT_EQ(sv.holds, check_lip_p_state(act, psi, kInf).holds) << e.name;
    }
  }
}

TEST(IsometryProperty, OrthogonalityOnDIsometricActions) {
  std::mt19937_64 rng(21);
  int tested = 0;
  for (const auto& e : population()) {
    const auto& act = e.action;
    if (!check_D(act).holds) continue;
    const auto& sp = act.space;
    const std::size_t n = act.n();
    for (int t = 0; t < 40; ++t) {
      const std::size_t x = rng() % n, y = rng() % n;
      const Q delta = (rng() % 2) ? Q(1, 2) : Q(1);
      PointSet s;
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 2) s.insert(j);
      PointSet t_set;
      for (std::size_t j = 0; j < n; ++j) {
        bool far = true;
        for (auto i : s.members()) far = far && abs_value<Q>(sp.d(i, j) - sp.d(x, y)) >= delta;
        if (far && rng() % 3) t_set.insert(j);
      }
      EXPECT_TRUE(check_orthogonality(act, x, y, s, t_set, delta)) << e.name;
      ++tested;
    }
  }
  EXPECT_GT(tested, 200);
  auto z4 = entry<Q>("Z4-cycle").action;
  EXPECT_EQ(orthogonality_product(z4, 0, 1, PointSet(), PointSet::all(4), Q(1)), 0.0);
  // the pair (0, 1) itself sits at distance d(0, 1)
  EXPECT_THROW(orthogonality_product(z4, 0, 1, PointSet::single(0), PointSet::single(1), Q(1)), InvalidInput);
}

TEST(IsometryProperty, OrthogonalityOnTrivialAction) {
  auto space = entry<Q>("S4-path").action.space;
  auto one = std::make_shared<const QuantumGroup<Q>>(function_algebra<Q>(generate_group(4, {})));
  auto act = trivial_action(one, space);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      for (std::uint64_t sm = 0; sm < 16; ++sm)
        for (std::uint64_t tm = 0; tm < 16; ++tm) {
          PointSet s(sm), t(tm);
          bool ok = true;
          for (auto i : s.members())
            for (auto j : t.members()) ok = ok && abs_value<Q>(space.d(i, j) - space.d(x, y)) >= Q(1, 2);
          if (!ok) continue;
          // the scalar product [x in S][y in T] vanishes because (x, y) itself violates the hypothesis
          const bool expect_zero = !(s.contains(x) && t.contains(y));
          EXPECT_TRUE(expect_zero);
          EXPECT_TRUE(check_orthogonality(act, x, y, s, t, Q(1, 2)));
        }
}

TEST(IsometryProperty, Injectivity) {
  auto one = std::make_shared<const QuantumGroup<Q>>(function_algebra<Q>(generate_group(3, {})));
  EXPECT_TRUE(check_injectivity(trivial_action(one, entry<Q>("S3-isosceles").action.space)));
  for (const auto& e : builtin_catalog<Q>())
    if (e.classical() || check_D(e.action).holds) EXPECT_TRUE(check_injectivity(e.action)) << e.name;
}

TEST(IsometryProperty, SeminormAgreesWithLip1State) {
  int fails = 0;
  for (const auto& e : builtin_catalog<Q>()) {
    const auto& act = e.action;
    EXPECT_TRUE(check_lip_seminorm_state(act, act.qg().counit_functional(), 20, 1));
    for (std::uint64_t s = 0; s < 12; ++s) {
      auto psi = random_state<Q>(act.qg().shape, s);
      const bool sn = check_lip_seminorm_state(act, psi, 20, s);
      EXPECT_EQ(sn, check_lip_p_state(act, psi, 1.0).holds) << e.name << " seed " << s;
      fails += !sn;
    }
  }
  EXPECT_GT(fails, 0);
}

TEST(IsometryProperty, BoxedAndPointedPolytopesGiveSameMaximum) {
  for (const auto& e : builtin_catalog<Q>()) {
    if (e.action.n() != 3) continue;
    for (double p : {1.0, 2.0, 3.0}) {
      auto cost = power_cost(e.action.space, p);
      std::vector<std::vector<Q>> pointed;
      for (const auto& v : enumerate_dual_vertices(cost)) {
        auto fg = v.f;
        fg.insert(fg.end(), v.g.begin(), v.g.end());
        pointed.push_back(std::move(fg));
      }
      const double a = worst_excess(e.action, cost, pointed), b = worst_excess(e.action, cost, oracle::boxed_dual_vertices(cost));
      EXPECT_NEAR(a, b, 1e-9) << e.name << " p=" << p;
      EXPECT_EQ(a <= 1e-9, check_lip_p_universal(e.action, p).holds) << e.name << " p=" << p;
    }
  }
}
