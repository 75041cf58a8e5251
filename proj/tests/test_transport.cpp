#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qiso/transport.hpp"

using namespace qiso;
using Q = Rational;

namespace {

FiniteMetricSpace<Q> two_point() { return validate_metric<Q>(std::vector<std::vector<Q>>{{0, 1}, {1, 0}}); }
FiniteMetricSpace<Q> three_point() {
  return validate_metric<Q>(std::vector<std::vector<Q>>{{0, 1, 2}, {1, 0, 2}, {2, 2, 0}});
}
ProbVector<Q> pv(std::vector<Q> m) { return make_prob<Q>(std::move(m)); }
Q q(long a, long b = 1) { return Q(a) / Q(b); }

ProbVector<Q> random_prob(std::size_t n, std::mt19937_64& rng, int denom = 12) {
  std::uniform_int_distribution<int> w(0, denom);
  std::vector<Q> m(n);
  Q total(0);
  for (auto& x : m) {
    x = w(rng);
    total += x;
  }
  if (total == 0) {
    m[0] = 1;
    total = 1;
  }
  for (auto& x : m) x /= total;
  return pv(m);
}

}  // namespace

TEST(Transport, DiracCouplings) {
  auto s = three_point();
  auto c = power_cost(s, 1);
  auto same = solve_transport(dirac<Q>(3, 2), dirac<Q>(3, 2), c);
  EXPECT_EQ(same.value, 0);
  EXPECT_EQ(same.plan.plan(2, 2), 1);
  auto diff = solve_transport(dirac<Q>(3, 0), dirac<Q>(3, 2), c);
  EXPECT_EQ(diff.value, 2);
}

TEST(Transport, TwoPointExamples) {
  auto s = two_point();
  auto c = power_cost(s, 1);
  auto id = solve_transport(pv({q(1, 2), q(1, 2)}), pv({q(1, 2), q(1, 2)}), c);
  EXPECT_EQ(id.value, 0);
  EXPECT_EQ(id.plan.plan(0, 0), q(1, 2));
  auto r = solve_transport(pv({q(3, 4), q(1, 4)}), pv({q(1, 4), q(3, 4)}), c);
  EXPECT_EQ(r.value, q(1, 2));
  // oracle: vertices of the 2x2 transportation polytope
  EXPECT_EQ(r.value, oracle::transport_by_trees<Q>({q(3, 4), q(1, 4)}, {q(1, 4), q(3, 4)}, c));
  EXPECT_NEAR(wasserstein_p(s, pv({q(3, 4), q(1, 4)}), pv({q(1, 4), q(3, 4)}), 2), std::sqrt(0.5), 1e-15);
}

TEST(Transport, InfeasibleMarginals) {
  Mat<Q> c(2, 2);
  EXPECT_THROW(solve_transport(ProbVector<Q>{{q(1), q(0)}}, ProbVector<Q>{{q(1, 2), q(0)}}, c), InvalidInput);
}

TEST(Transport, KantorovichExamples) {
  auto s = three_point();
  auto same = kantorovich_w1(s, pv({q(1, 3), q(1, 3), q(1, 3)}), pv({q(1, 3), q(1, 3), q(1, 3)}));
  EXPECT_EQ(same.value, 0);
  auto k = kantorovich_w1(s, dirac<Q>(3, 0), dirac<Q>(3, 2));
  EXPECT_EQ(k.value, 2);
  EXPECT_LE(lipschitz_constant(s, k.witness), 1);
  auto t = two_point();
  EXPECT_EQ(kantorovich_w1(t, pv({q(3, 4), q(1, 4)}), pv({q(1, 4), q(3, 4)})).value, q(1, 2));
}

TEST(Transport, CouplingOnSupport) {
  auto mu = pv({q(1, 2), q(1, 2)});
  PairSet anti(2);
  anti.insert(0, 1);
  anti.insert(1, 0);
  auto r = feasible_coupling_on(mu, mu, anti);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.coupling->plan(0, 1), q(1, 2));
  EXPECT_EQ(r.coupling->plan(1, 0), q(1, 2));

  auto nu = pv({q(1, 4), q(3, 4)});
  auto all = feasible_coupling_on(pv({q(3, 4), q(1, 4)}), nu, PairSet(2, true));
  EXPECT_TRUE(all.feasible);
  auto diag = feasible_coupling_on(pv({q(3, 4), q(1, 4)}), nu, PairSet::diagonal(2));
  ASSERT_FALSE(diag.feasible);
  EXPECT_EQ(diag.violator, PointSet::single(0));
  EXPECT_LT(diag.nu_NS, diag.mu_S);
}

TEST(Transport, BottleneckExamples) {
  auto s = two_point();
  auto mu = pv({q(3, 4), q(1, 4)});
  EXPECT_EQ(wasserstein_inf(s, mu, mu).r, 0);
  EXPECT_EQ(wasserstein_inf(s, dirac<Q>(2, 0), dirac<Q>(2, 1)).r, 1);
  auto r = wasserstein_inf(s, mu, pv({q(1, 4), q(3, 4)}));
  EXPECT_EQ(r.r, 1);
  ASSERT_TRUE(r.below.has_value());
  EXPECT_FALSE(r.below->feasible);
}

TEST(Transport, LipschitzVerticesMatchActiveSetOracle) {
  auto t = two_point();
  auto v2 = enumerate_lipschitz_vertices(t);
  ASSERT_EQ(v2.size(), 2u);
  std::set<std::vector<Q>> got2(v2.begin(), v2.end());
  EXPECT_TRUE(got2.count({q(1), q(0)}));
  EXPECT_TRUE(got2.count({q(-1), q(0)}));

  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto s = seed == 0 ? three_point() : random_metric_space<Q>(3 + seed % 3, seed, MetricModel::ShortestPathGraph);
    auto verts = enumerate_lipschitz_vertices(s);
    auto brute = oracle::lipschitz_vertices(s.dist);
    std::set<std::vector<Q>> got;
    for (auto& v : verts) {
      EXPECT_LE(lipschitz_constant(s, v), 1);
      EXPECT_EQ(v.back(), 0);
      got.insert(std::vector<Q>(v.begin(), v.end() - 1));
      std::vector<Q> neg(v);
      for (auto& x : neg) x = -x;
      EXPECT_NE(std::find(verts.begin(), verts.end(), neg), verts.end());
    }
    EXPECT_EQ(got, std::set<std::vector<Q>>(brute.begin(), brute.end())) << "seed " << seed;
  }
}

TEST(Transport, BoxedDualVerticesMatchActiveSetOracle) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto s = seed == 0 ? two_point() : random_metric_space<Q>(seed == 3 ? 3 : 2, seed, MetricModel::ShortestPathGraph);
    for (double p : {1.0, 2.0}) {
      auto verts = enumerate_boxed_dual_vertices(s, p);
      auto cost = power_cost(s, p);
      auto brute = oracle::boxed_dual_vertices(cost);
      std::set<std::vector<Q>> got;
      for (auto& v : verts) {
        for (std::size_t i = 0; i < s.n; ++i)
          for (std::size_t j = 0; j < s.n; ++j) EXPECT_LE(v.f[i] + v.g[j], cost(i, j));
        std::vector<Q> flat(v.f);
        flat.insert(flat.end(), v.g.begin(), v.g.end());
        got.insert(flat);
      }
      EXPECT_EQ(got, std::set<std::vector<Q>>(brute.begin(), brute.end())) << "seed " << seed << " p " << p;
    }
  }
}

TEST(Transport, BoxedAndTightDualMaximaAgreeWithPrimal) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_metric_space<Q>(3 + seed % 2, seed, MetricModel::EuclideanSample);
    for (double p : {1.0, 2.0}) {
      auto mu = random_prob(s.n, rng), nu = random_prob(s.n, rng);
      Q primal = wasserstein_pp(s, mu, nu, p).value;
      auto best = [&](const std::vector<DualPotentials<Q>>& verts) {
        Q b(-1000000);
        for (auto& v : verts) {
          Q obj(0);
          for (std::size_t i = 0; i < s.n; ++i) obj += mu[i] * v.f[i] + nu[i] * v.g[i];
          b = std::max(b, obj);
        }
        return b;
      };
      EXPECT_EQ(best(enumerate_boxed_dual_vertices(s, p)), primal);
      EXPECT_EQ(best(enumerate_dual_vertices(power_cost(s, p))), primal);
    }
  }
}

TEST(Transport, SizeGuards) {
  auto s = random_metric_space<Q>(9, 1, MetricModel::ShortestPathGraph);
  EXPECT_THROW(enumerate_lipschitz_vertices(s), SizeGuardExceeded);
  EXPECT_THROW(enumerate_boxed_dual_vertices(s, 1), SizeGuardExceeded);
}

// Invariant properties on random rational instances.
TEST(TransportProperty, StrongDualityMetricAxiomsAndTower) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    std::size_t n = 2 + seed % 5;
    auto s = random_metric_space<Q>(n, seed, seed % 2 ? MetricModel::EuclideanSample : MetricModel::ShortestPathGraph);
    auto mu = random_prob(n, rng), nu = random_prob(n, rng), rho = random_prob(n, rng);
    auto r = wasserstein_pp(s, mu, nu, 1);
    EXPECT_EQ(r.value, r.duals.objective);
    EXPECT_EQ(r.duals.g.back(), 0);
    EXPECT_LE(r.basis.size(), 2 * n - 1);
    EXPECT_EQ(r.plan.marginal_residual(), 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_LE(r.duals.f[i] + r.duals.g[j], s.d(i, j));
    EXPECT_EQ(kantorovich_w1(s, mu, nu).value, r.value);
    EXPECT_EQ(wasserstein_pp(s, nu, mu, 1).value, r.value);
    EXPECT_EQ(wasserstein_pp(s, mu, mu, 2).value, 0);
    double w_mn = wasserstein_p(s, mu, nu, 2), w_nr = wasserstein_p(s, nu, rho, 2), w_mr = wasserstein_p(s, mu, rho, 2);
    EXPECT_LE(w_mr, w_mn + w_nr + 1e-12);
    double prev = 0, winf = to_double(wasserstein_inf(s, mu, nu).r);
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      double w = wasserstein_p(s, mu, nu, p);
      EXPECT_GE(w, prev - 1e-12);
      EXPECT_LE(w, winf + 1e-12);
      prev = w;
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) EXPECT_EQ(wasserstein_pp(s, dirac<Q>(n, x), dirac<Q>(n, y), 1).value, s.d(x, y));
  }
}

TEST(TransportProperty, SolverMatchesSpanningTreeOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + trial % 3;
    auto mu = random_prob(n, rng, 4), nu = random_prob(n, rng, 4);
    Mat<Q> c(n, n);
    std::uniform_int_distribution<int> w(0, 9);
    for (auto& x : c.data()) x = Q(w(rng)) / Q(1 + w(rng));
    EXPECT_EQ(solve_transport(mu, nu, c).value, oracle::transport_by_trees(mu.mass, nu.mass, c));
  }
}

TEST(TransportProperty, FloatModeAgreesWithRational) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = random_metric_space<Q>(5, seed, MetricModel::EuclideanSample);
    auto mu = random_prob(5, rng), nu = random_prob(5, rng);
    Mat<double> dd(5, 5);
    for (std::size_t i = 0; i < 25; ++i) dd.data()[i] = to_double(s.dist.data()[i]);
    auto sd = validate_metric(dd);
    ProbVector<double> mud, nud;
    for (std::size_t i = 0; i < 5; ++i) {
      mud.mass.push_back(to_double(mu[i]));
      nud.mass.push_back(to_double(nu[i]));
    }
    EXPECT_NEAR(wasserstein_p(sd, mud, nud, 1), to_double(wasserstein_pp(s, mu, nu, 1).value), 1e-9);
    EXPECT_NEAR(to_double(kantorovich_w1(sd, mud, nud).value), wasserstein_p(sd, mud, nud, 1), 1e-9);
    EXPECT_NEAR(to_double(wasserstein_inf(sd, mud, nud).r), to_double(wasserstein_inf(s, mu, nu).r), 1e-9);
  }
}
