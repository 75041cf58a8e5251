#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qiso/catalog.hpp"
#include "qiso/envelope.hpp"

using namespace qiso;
using Q = Rational;

namespace {

template <Field R>
CatalogEntry<R> entry(const std::string& name) {
  for (auto& e : builtin_catalog<R>())
    if (e.name == name) return e;
  throw std::runtime_error("no catalog entry " + name);
}

/// Indices of the elements of G that preserve d, from the permutation oracle.
std::set<std::size_t> isometric_elements(const CatalogEntry<Q>& e) {
  auto iso = oracle::isometries(e.action.space.dist);
  std::set<std::size_t> out;
  for (std::size_t k = 0; k < e.group->order(); ++k)
    if (iso.count(e.group->elements[k])) out.insert(k);
  return out;
}

/// Subgroups of G contained in `within`, by brute force over subsets.
std::size_t count_subgroups(const PermutationGroup& g, const std::set<std::size_t>& within) {
  std::vector<std::size_t> pool(within.begin(), within.end());
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << pool.size()); ++m) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if ((m >> i) & 1u) s.insert(pool[i]);
    if (!s.count(0)) continue;
    bool closed = true;
    for (auto a : s)
      for (auto b : s) closed = closed && s.count(g.mult[a][b]);
    count += closed;
  }
  return count;
}

std::vector<CatalogEntry<Q>> population() {
  auto out = builtin_catalog<Q>();
  for (std::uint64_t s = 0; s < 10; ++s) {
    out.push_back(random_classical_action<Q>(3 + s % 3, 300 + s));
    out.push_back(random_dual_action<Q>(6, 400 + s));
  }
  return out;
}

}  // namespace

TEST(Envelope, CommutatorElements) {
  auto z4 = entry<Q>("Z4-cycle").action;
  auto cs = commutator_elements(z4);
  EXPECT_EQ(cs.size(), 16u);
  for (const auto& c : cs) EXPECT_TRUE(c.exactly_zero());
  auto s3 = entry<Q>("S3-isosceles").action;
  bool nonzero = false;
  for (const auto& c : commutator_elements(s3)) nonzero = nonzero || !c.exactly_zero();
  EXPECT_TRUE(nonzero);
  // kappa(c_xy) = -c_yx
  for (const auto& e : builtin_catalog<Q>()) {
    auto c = commutator_elements(e.action);
    const std::size_t n = e.action.n();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        EXPECT_TRUE((e.action.qg().antipode(c[x * n + y]) + c[y * n + x]).exactly_zero()) << e.name;
  }
}

TEST(Envelope, GeneratedIdealExamples) {
  auto g = QuantumGroup<Q>::make({1, 1, 2});
  EXPECT_TRUE(generated_ideal(g, {g.zero(), g.zero()}).empty());
  EXPECT_TRUE(generated_ideal(g, {g.unit()}).full());
  Element<Q> b(g.shape);
  b[g.shape->index(2, 1, 0)] = Cx<Q>(Q(3));
  auto i = generated_ideal(g, {b});
  EXPECT_EQ(i.blocks(), (std::vector<std::size_t>{2}));
}

TEST(Envelope, SaturationExamples) {
  auto s3 = entry<Q>("S3-isosceles").action;
  auto fd = fusion_data(s3.qg());
  EXPECT_EQ(fd.counit_block, 0u);
  auto none = hopf_saturate(fd, BlockIdeal(fd.blocks));
  EXPECT_TRUE(none.ideal.empty());
  EXPECT_EQ(none.iterations, 0u);
  // killing a 3-cycle forces its inverse and, through products, every element outside a subgroup
  BlockIdeal one(fd.blocks);
  one.included[1] = true;
  auto sat = hopf_saturate(fd, one);
  EXPECT_TRUE(is_hopf_ideal(fd, sat.ideal));
  EXPECT_GT(sat.ideal.size(), 1u);
  for (auto k : one.blocks()) EXPECT_TRUE(sat.ideal.contains(k));
}

TEST(Envelope, Examples) {
  auto s3 = entry<Q>("S3-isosceles");
  auto env = envelope(s3.action);
  ASSERT_FALSE(env.reached_full_algebra);
  EXPECT_EQ(env.quotient.group->dim(), 2u);
  std::set<std::size_t> kept(env.quotient.kept.begin(), env.quotient.kept.end());
  EXPECT_EQ(kept, isometric_elements(s3));
  EXPECT_EQ(s3.group->elements[*std::next(kept.begin())], (std::vector<std::size_t>{1, 0, 2}));

  auto rh = entry<Q>("Z4-rhombus");
  auto er = envelope(rh.action);
  EXPECT_EQ(er.quotient.group->dim(), isometric_elements(rh).size());
  EXPECT_EQ(er.quotient.group->dim(), 2u);

  auto z4 = entry<Q>("Z4-cycle");
  auto ez = envelope(z4.action);
  EXPECT_TRUE(ez.ideal.empty());
  EXPECT_EQ(ez.quotient.group->dim(), 4u);
}

TEST(EnvelopeProperty, InvariantsOnPopulation) {
  std::size_t saturation_rounds = 0;
  for (const auto& e : population()) {
    const auto& act = e.action;
    auto env = envelope(act);
    ASSERT_FALSE(env.reached_full_algebra) << e.name;
    auto fd = fusion_data(act.qg());
    saturation_rounds += env.iterations;
    EXPECT_FALSE(env.ideal.contains(fd.counit_block)) << e.name;
    EXPECT_TRUE(is_hopf_ideal(fd, env.ideal)) << e.name;
    EXPECT_EQ(kappa_image(fd, env.generated), env.generated) << e.name;
    EXPECT_EQ(hopf_saturate(fd, kappa_image(fd, env.generated)).ideal, env.ideal) << e.name;
    EXPECT_EQ(env.quotient.well_defined, 0.0) << e.name;

    const auto& b = *env.quotient.group;
    EXPECT_TRUE(verify_quantum_group(b).passed) << e.name;
    EXPECT_TRUE(verify_coaction(env.induced).passed) << e.name;
    EXPECT_TRUE(check_D(env.induced).holds) << e.name;
    EXPECT_EQ(check_D(act).holds, env.ideal.empty()) << e.name;

    // idempotence
    auto again = envelope(env.induced);
    EXPECT_TRUE(again.ideal.empty()) << e.name;
    EXPECT_EQ(again.quotient.group->dim(), b.dim()) << e.name;

    // T intertwines the comultiplications and the counits
    const auto& a = act.qg();
    for (std::size_t beta = 0; beta < a.dim(); ++beta) {
      auto basis = a.basis(beta);
      auto tb = env.quotient.project(basis);
      std::map<std::size_t, Cx<Q>> lhs = b.comultiply(tb), rhs;
      for (const auto& [idx, c] : a.comultiply(basis)) {
        const std::size_t x = env.quotient.index[idx / a.dim()], y = env.quotient.index[idx % a.dim()];
        if (x < b.dim() && y < b.dim()) rhs[x * b.dim() + y] += c;
      }
      std::erase_if(lhs, [](const auto& kv) { return kv.second.exactly_zero(); });
      std::erase_if(rhs, [](const auto& kv) { return kv.second.exactly_zero(); });
      if (env.quotient.index[beta] < b.dim()) EXPECT_EQ(lhs, rhs) << e.name;
      EXPECT_EQ(b.counit(tb), a.counit(basis)) << e.name;
    }
    // (id (x) T) rho_A = rho_B
    for (std::size_t i = 0; i < act.n(); ++i)
      for (std::size_t j = 0; j < act.n(); ++j)
        EXPECT_TRUE((env.quotient.project(act.u[i][j]) - env.induced.u[i][j]).exactly_zero());
  }
  EXPECT_EQ(saturation_rounds, 0u);
}

TEST(EnvelopeProperty, ClassicalAgreement) {
  for (const auto& e : population()) {
    if (!e.classical()) continue;
    auto env = envelope(e.action);
    auto iso = isometric_elements(e);
    EXPECT_EQ(env.quotient.group->dim(), iso.size()) << e.name;
    std::set<std::size_t> kept(env.quotient.kept.begin(), env.quotient.kept.end());
    EXPECT_EQ(kept, iso) << e.name;
  }
}

TEST(EnvelopeProperty, UniversalProperty) {
  for (const auto& e : population()) {
    auto env = envelope(e.action);
    auto rep = verify_universal_property(e.action, env);
    EXPECT_TRUE(rep.envelope_found) << e.name;
    EXPECT_EQ(rep.factorization_failures, 0u) << e.name;
    EXPECT_EQ(rep.larger_isometric, 0u) << e.name;
    EXPECT_GE(rep.isometric, 1u) << e.name;  // the counit quotient at least
    if (e.classical() && e.group->order() <= 12) {
      std::set<std::size_t> all;
      for (std::size_t k = 0; k < e.group->order(); ++k) all.insert(k);
      EXPECT_EQ(rep.closed_sets, count_subgroups(*e.group, all)) << e.name;
      EXPECT_EQ(rep.isometric, count_subgroups(*e.group, isometric_elements(e))) << e.name;
    }
  }
}

TEST(EnvelopeProperty, AnnihilatorClosedUnderConvolution) {
  for (const auto& e : builtin_catalog<Q>()) {
    const auto& g = e.action.qg();
    BlockIdeal none(g.shape->blocks()), all(g.shape->blocks());
    all.included.assign(all.included.size(), true);
    EXPECT_TRUE(annihilator_convolution_check(g, none, 20, 1));
    EXPECT_TRUE(annihilator_convolution_check(g, all, 20, 1));
    auto env = envelope(e.action);
    EXPECT_TRUE(annihilator_convolution_check(g, env.ideal, 100, 7)) << e.name;
  }
  for (const auto& e : builtin_catalog<double>()) {
    auto env = envelope(e.action, Tolerance{1e-10});
    EXPECT_TRUE(annihilator_convolution_check(e.action.qg(), env.ideal, 100, 3, Tolerance{1e-9})) << e.name;
  }
  // a non-Hopf block set: killing a single 3-cycle of C(S3) leaves a non-closed annihilator
  auto g = entry<Q>("S3-isosceles").action.qg();
  BlockIdeal bad(g.shape->blocks());
  bad.included[1] = true;
  EXPECT_FALSE(annihilator_convolution_check(g, bad, 50, 2));
}
