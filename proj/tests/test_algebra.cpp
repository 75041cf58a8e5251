#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qiso/algebra.hpp"

using namespace qiso;
using Q = Rational;
using C = Cx<Q>;

namespace {

std::shared_ptr<const BlockShape> shape(std::vector<std::size_t> s) { return std::make_shared<const BlockShape>(std::move(s)); }

Element<Q> random_element(const std::shared_ptr<const BlockShape>& sh, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-3, 3);
  Element<Q> e(sh);
  for (std::size_t a = 0; a < sh->dim(); ++a) e[a] = C(Q(v(rng)), Q(v(rng)));
  return e;
}

std::vector<std::vector<C>> block(const Element<Q>& e, std::size_t k) {
  const std::size_t n = e.shape().size(k);
  std::vector<std::vector<C>> m(n, std::vector<C>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = e.at(k, i, j);
  return m;
}

C quadratic_form(const Element<Q>& e, std::size_t k, const CVec<Q>& xi) {
  C s;
  const std::size_t n = e.shape().size(k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += conj(xi[i]) * e.at(k, i, j) * xi[j];
  return s;
}

Element<double> to_float(const Element<Q>& e) {
  auto sh = std::make_shared<const BlockShape>(e.shape().sizes());
  Element<double> f(sh);
  for (std::size_t a = 0; a < sh->dim(); ++a) f[a] = Cx<double>(e[a].re.convert_to<double>(), e[a].im.convert_to<double>());
  return f;
}

}  // namespace

TEST(Algebra, ShapeIndexing) {
  auto sh = shape({1, 1, 2});
  EXPECT_EQ(sh->dim(), 6u);
  EXPECT_EQ(sh->index(2, 0, 1), 3u);
  EXPECT_EQ(sh->star_index(sh->index(2, 0, 1)), sh->index(2, 1, 0));
  EXPECT_EQ(sh->product_index(sh->index(2, 0, 1), sh->index(2, 1, 1)), sh->index(2, 0, 1));
  EXPECT_EQ(sh->product_index(sh->index(2, 0, 1), sh->index(2, 0, 1)), sh->dim());
  EXPECT_EQ(sh->product_index(sh->index(0, 0, 0), sh->index(1, 0, 0)), sh->dim());
  EXPECT_FALSE(sh->is_commutative());
  EXPECT_TRUE(shape({1, 1, 1})->is_commutative());
  EXPECT_THROW(shape({}), InvalidInput);
  EXPECT_THROW(shape({2, 0}), InvalidInput);
}

TEST(Algebra, UnitStarAndProducts) {
  std::mt19937_64 rng(3);
  auto sh = shape({1, 2, 3});
  auto one = Element<Q>::unit(sh);
  for (int t = 0; t < 20; ++t) {
    auto x = random_element(sh, rng), y = random_element(sh, rng), z = random_element(sh, rng);
    EXPECT_TRUE((one * x - x).exactly_zero());
    EXPECT_TRUE((x * one - x).exactly_zero());
    EXPECT_TRUE(((x * y) * z - x * (y * z)).exactly_zero());
    EXPECT_TRUE(((x * y).star() - y.star() * x.star()).exactly_zero());
    EXPECT_TRUE((x.star().star() - x).exactly_zero());
    EXPECT_TRUE((x * (y + z) - (x * y + x * z)).exactly_zero());
  }
}

TEST(Algebra, ProjectionsAndNorms) {
  auto sh = shape({1, 2});
  Element<Q> p(sh);
  p[sh->index(1, 0, 0)] = C(Q(1, 2));
  p[sh->index(1, 0, 1)] = C(Q(1, 2));
  p[sh->index(1, 1, 0)] = C(Q(1, 2));
  p[sh->index(1, 1, 1)] = C(Q(1, 2));
  EXPECT_TRUE(projection_exact(p));
  EXPECT_EQ(projection_residual(p), 0.0);
  EXPECT_DOUBLE_EQ(p.block_norm(1), 1.0);
  EXPECT_EQ(p.block_norm(0), 0.0);
  Element<Q> n(sh);
  n[sh->index(1, 0, 1)] = C(Q(1));
  EXPECT_FALSE(projection_exact(n));
  EXPECT_GT(projection_residual(n), 0.5);
}

TEST(Algebra, PsdMatchesPrincipalMinorOracle) {
  std::mt19937_64 rng(17);
  auto sh = shape({1, 2, 3});
  int negatives = 0, singular = 0;
  for (int t = 0; t < 300; ++t) {
    // half of the cases are G G^* with G of deficient rank, the rest Hermitian parts of random matrices
    auto g = random_element(sh, rng);
    Element<Q> a(sh);
    if (t % 2 == 0) {
      for (std::size_t k = 0; k < sh->blocks(); ++k)
        for (std::size_t i = 0; i < sh->size(k); ++i) g[sh->index(k, i, 0)] = C();
      a = g * g.star();
      ++singular;
    } else {
      a = g + g.star();
      a = C(Q(1, 2)) * a;
    }
    auto cert = check_psd(a);
    bool oracle_psd = true;
    for (std::size_t k = 0; k < sh->blocks(); ++k) oracle_psd = oracle_psd && oracle::psd_by_principal_minors<Q>(block(a, k));
    ASSERT_EQ(cert.psd, oracle_psd) << "trial " << t;
    if (!cert.psd) {
      ++negatives;
      // the witness is exact
      EXPECT_LT(quadratic_form(a, cert.block, cert.witness).re, 0);
      EXPECT_EQ(quadratic_form(a, cert.block, cert.witness).im, 0);
      EXPECT_LT(cert.min_eigenvalue, 0.0);
    }
    auto fc = check_psd(to_float(a), Tolerance{1e-9});
    if (std::abs(fc.min_eigenvalue) > 1e-6) EXPECT_EQ(fc.psd, cert.psd);
  }
  EXPECT_GT(negatives, 50);
  EXPECT_GT(singular, 50);
}

TEST(Algebra, LambdaMax) {
  auto sh = shape({1, 2});
  Element<Q> a(sh);
  a[sh->index(0, 0, 0)] = C(Q(3));
  a[sh->index(1, 0, 0)] = C(Q(1));
  a[sh->index(1, 1, 1)] = C(Q(1));
  a[sh->index(1, 0, 1)] = C(Q(2));
  a[sh->index(1, 1, 0)] = C(Q(2));
  Eigen::VectorXcd v;
  auto [l, k] = lambda_max(a, &v);
  EXPECT_NEAR(l, 3.0, 1e-12);  // block 1 has eigenvalues -1 and 3; block 0 ties at 3
  a[sh->index(0, 0, 0)] = C(Q(2));
  auto [l2, k2] = lambda_max(a, &v);
  EXPECT_NEAR(l2, 3.0, 1e-12);
  EXPECT_EQ(k2, 1u);
  EXPECT_NEAR(std::abs(v(0)), std::abs(v(1)), 1e-12);
}

TEST(Algebra, StatesAndDensities) {
  auto sh = shape({1, 2});
  auto one = Element<Q>::unit(sh);
  // extreme state on a 1x1 block is the character picking that block
  auto chi = extreme_state<Q>(sh, 0, {C(Q(1))});
  EXPECT_TRUE(is_state(chi));
  EXPECT_EQ(chi(one), C(Q(1)));
  Element<Q> b(sh);
  b[sh->index(0, 0, 0)] = C(Q(7));
  b[sh->index(1, 1, 1)] = C(Q(5));
  EXPECT_EQ(chi(b), C(Q(7)));

  CVec<Q> xi{C(Q(1)), C(Q(0), Q(1))};
  auto vs = vector_state<Q>(sh, 1, xi);
  EXPECT_TRUE(is_state(vs));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    auto x = random_element(sh, rng);
    // <xi, x xi> / |xi|^2 evaluated directly
    EXPECT_EQ(vs(x), quadratic_form(x, 1, xi) * C(Q(1, 2)));
  }
  EXPECT_THROW(extreme_state<Q>(sh, 1, xi), InvalidInput);
  EXPECT_THROW(vector_state<Q>(sh, 1, {C(), C()}), InvalidInput);

  auto rho = vs.densities();
  auto back = Functional<Q>::from_densities(sh, rho);
  EXPECT_EQ(back.values(), vs.values());

  // not positive: negative weight on a block
  auto bad = Functional<Q>::from_densities(sh, {{{C(Q(2))}}, {{C(Q(-1, 2)), C()}, {C(), C(Q(-1, 2))}}});
  EXPECT_EQ(bad(one), C(Q(1)));
  EXPECT_FALSE(is_state(bad));
}

TEST(Algebra, RandomStates) {
  auto sh = shape({1, 1, 2, 3});
  auto one = Element<Q>::unit(sh);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = random_state<Q>(sh, seed);
    EXPECT_TRUE(is_state(s));
    EXPECT_EQ(s(one), C(Q(1)));
    EXPECT_EQ(random_state<Q>(sh, seed).values(), s.values());
    EXPECT_NE(random_state<Q>(sh, seed + 100).values(), s.values());
    auto f = random_state<double>(std::make_shared<const BlockShape>(sh->sizes()), seed);
    EXPECT_TRUE(is_state(f, Tolerance{1e-10}));
  }
}
