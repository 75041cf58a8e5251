// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qiso/catalog.hpp"
#include "qiso/envelope.hpp"
#include "qiso/hall.hpp"
#include "qiso/isometry.hpp"
#include "qiso/transport.hpp"

using namespace qiso;
using Q = Rational;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

int failures = 0;

void run(int id, const std::string& title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) o.fail("runtime " + std::to_string(secs) + " s over the limit");
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << o.detail.str() << "("
            << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
  if (!o.pass) ++failures;
}

/// Probability vectors of length n whose entries are k/q for some q <= max_den.
std::vector<std::vector<Q>> grid(std::size_t n, int max_den) {
  std::set<std::vector<Q>> out;
  for (int q = 1; q <= max_den; ++q) {
    std::vector<int> parts(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == n) {
        parts[i] = left;
        std::vector<Q> v;
        for (int p : parts) v.push_back(Q(p, q));
        out.insert(v);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        parts[i] = k;
        rec(i + 1, left - k);
      }
    };
    rec(0, q);
  }
  return {out.begin(), out.end()};
}

ProbVector<Q> random_distribution(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 6);
  std::vector<Q> m(n);
  int total = 0;
  for (auto& x : m) {
    int v = w(rng);
    x = Q(v);
    total += v;
  }
  if (total == 0) {
    m[rng() % n] = Q(1);
    total = 1;
  }
  for (auto& x : m) x /= Q(total);
  return make_prob(m);
}

std::vector<CatalogEntry<Q>> population(std::size_t random_count) {
  auto out = builtin_catalog<Q>();
  for (std::size_t i = 0; i < random_count / 2; ++i) {
    out.push_back(random_classical_action<Q>(3 + i % 3, 5000 + i));
    out.push_back(random_dual_action<Q>(6, 7000 + i));
  }
  return out;
}

std::set<std::size_t> isometric_elements(const CatalogEntry<Q>& e) {
  auto iso = oracle::isometries(e.action.space.dist);
  std::set<std::size_t> out;
  for (std::size_t k = 0; k < e.group->order(); ++k)
    if (iso.count(e.group->elements[k])) out.insert(k);
  return out;
}

}  // namespace

int main() {
  std::cout << std::unitbuf;

  run(1, "transport equals brute-force vertex enumeration", 60, [](Outcome& o) {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> num(0, 12), den(1, 4);
    std::size_t instances = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<Mat<Q>> costs;
      for (int c = 0; c < 25; ++c) {
        Mat<Q> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) m(i, j) = Q(num(rng), den(rng));
        costs.push_back(m);
      }
      auto g = grid(n, 4);
      const auto trees = oracle::spanning_trees(n, n);
      for (const auto& a : g)
        for (const auto& b : g) {
          auto verts = oracle::transport_vertices(a, b, trees);
          for (const auto& cost : costs) {
            std::optional<Q> best;
            for (const auto& v : verts) {
              Q total(0);
              for (std::size_t cell = 0; cell < n * n; ++cell) total += v[cell] * cost(cell / n, cell % n);
              if (!best || total < *best) best = total;
            }
            auto r = solve_transport(make_prob(a), make_prob(b), cost);
            ++instances;
            if (r.value != *best) o.fail("n=" + std::to_string(n) + " value mismatch");
            if (r.plan.marginal_residual() != 0) o.fail("plan marginals");
          }
        }
    }
    o.detail << instances << " instances, n <= 4, denominators <= 4, 25 costs per n; ";
  });

  run(2, "strong duality and Kantorovich-Rubinstein", 60, [](Outcome& o) {
    std::mt19937_64 rng(202);
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = 2 + t % 5;
      auto space = random_metric_space<Q>(n, 9000 + t, t % 2 ? MetricModel::ShortestPathGraph : MetricModel::EuclideanSample);
      auto mu = random_distribution(n, rng), nu = random_distribution(n, rng);
      auto cost = power_cost(space, 1.0);
      auto r = solve_transport(mu, nu, cost);
      Q dual(0);
      for (std::size_t i = 0; i < n; ++i) dual += r.duals.f[i] * mu[i] + r.duals.g[i] * nu[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (r.duals.f[i] + r.duals.g[j] > cost(i, j)) o.fail("dual infeasible");
      Q primal(0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) primal += r.plan.plan(i, j) * cost(i, j);
      auto kr = kantorovich_w1(space, mu, nu);
      if (!(primal == r.value && dual == r.value && r.duals.objective == r.value && kr.value == r.value))
        o.fail("instance " + std::to_string(t));
    }
    o.detail << "500 instances, n <= 6, exact; ";
  });

  run(3, "Wasserstein tower up to p = 32 and W_inf", 120, [](Outcome& o) {
    std::mt19937_64 rng(303);
    const std::vector<double> ps{1, 2, 3, 4, 8, 16, 32};
    const double tol = 1e-9;
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = 2 + t % 5;
      auto space = random_metric_space<Q>(n, 11000 + t, MetricModel::ShortestPathGraph);
      auto mu = random_distribution(n, rng), nu = random_distribution(n, rng);
      std::vector<double> w;
      for (double p : ps) w.push_back(wasserstein_p(space, mu, nu, p));
      const double winf = to_double(wasserstein_inf(space, mu, nu).r);
      for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k - 1] > w[k] + tol * std::max(1.0, w[k])) o.fail("W_q > W_p at instance " + std::to_string(t));
      for (double x : w)
        if (x > winf + tol * std::max(1.0, winf)) o.fail("W_p > W_inf at instance " + std::to_string(t));
      if (winf - w.back() < -tol) o.fail("W_inf < W_32");
    }
    o.detail << "500 instances, p in {1, 2, 3, 4, 8, 16, 32, inf}; ";
  });

  run(4, "Hall equivalence, exhaustive for n = 2, 3", 600, [](Outcome& o) {
    std::size_t count = 0;
    for (std::size_t n : {2, 3}) {
      auto g = grid(n, 3);
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (n * n)); ++mask) {
        PairSet y(n);
        for (std::size_t c = 0; c < n * n; ++c)
          if ((mask >> c) & 1u) y.insert(c / n, c % n);
        for (const auto& a : g)
          for (const auto& b : g) {
            HallInstance<Q> inst{make_prob(a), make_prob(b), y};
            auto v = decide_hall(inst);
            ++count;
            if (hall_condition(inst).holds != v.feasible) o.fail("mismatch");
            if (v.feasible && (!v.coupling || v.coupling->marginal_residual() != 0 || !v.coupling->supported_on(y)))
              o.fail("bad coupling");
            if (!v.feasible && !(v.violator && v.nu_NS < v.mu_S)) o.fail("bad violator");
          }
      }
    }
    o.detail << count << " instances; ";
  });

  run(5, "perfect matchings agree with permutation search", 60, [](Outcome& o) {
    std::mt19937_64 rng(505);
    std::size_t perfect = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + rng() % 7;
      std::bernoulli_distribution edge(0.15 + 0.05 * (t % 10));
      std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
      for (auto& row : adj)
        for (std::size_t j = 0; j < n; ++j) row[j] = edge(rng);
      auto m = perfect_matching(adj);
      if (m.perfect != oracle::has_perfect_matching(adj)) o.fail("graph " + std::to_string(t));
      perfect += m.perfect;
    }
    o.detail << "1000 graphs, " << perfect << " with a perfect matching; ";
  });

  run(6, "(D) implies the level-set coupling, injectivity and aa = 0", 0, [](Outcome& o) {
    std::vector<const CatalogEntry<Q>*> isometric;
    static const auto cat = builtin_catalog<Q>();
    for (const auto& e : cat) {
      if (!check_D(e.action).holds) continue;
      isometric.push_back(&e);
      if (!check_theorem_main(e.action).holds) o.fail(e.name + " theorem main");
      if (!check_injectivity(e.action)) o.fail(e.name + " injectivity");
    }
    for (const auto& e : builtin_catalog<double>()) {
      const Tolerance tol{1e-9};
      if (!check_D(e.action, tol).holds) continue;
      if (!check_theorem_main(e.action, tol).holds) o.fail(e.name + " theorem main (float)");
      if (!check_injectivity(e.action, tol)) o.fail(e.name + " injectivity (float)");
    }
    std::mt19937_64 rng(606);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto& act = isometric[rng() % isometric.size()]->action;
      const std::size_t n = act.n(), x = rng() % n, y = rng() % n;
      const Q delta = Q(1 + static_cast<long>(rng() % 4), 4);
      PointSet s, tt;
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 2) s.insert(j);
      for (std::size_t j = 0; j < n; ++j) {
        bool far = true;
        for (auto i : s.members()) far = far && abs_value<Q>(act.space.d(i, j) - act.space.d(x, y)) >= delta;
        if (far && rng() % 4) tt.insert(j);
      }
      worst = std::max(worst, orthogonality_product(act, x, y, s, tt, delta));
    }
    if (worst > 1e-9) o.fail("product norm " + std::to_string(worst));
    o.detail << isometric.size() << " (D)-isometric entries, 1000 samples, largest product " << worst << "; ";
  });

  static const auto pop = population(200);
  struct Verdicts {
    bool d, l1, l2, l3, linf, lip1_direct, commutant_ok;
  };
  static std::vector<Verdicts> verdicts;

  run(7, "tower of conditions on catalog and 200 random actions", 0, [](Outcome& o) {
    std::size_t holds = 0;
    for (const auto& e : pop) {
      const auto& act = e.action;
      Verdicts v{};
      v.d = check_D(act).holds;
      v.l1 = check_lip_p_universal(act, 1.0).holds;
      v.l2 = check_lip_p_universal(act, 2.0).holds;
      v.l3 = check_lip_p_universal(act, 3.0).holds;
      v.linf = check_winf_universal(act).holds;
      v.lip1_direct = check_lip1_universal(act).holds;
      v.commutant_ok = !kappa_is_transpose(act) || check_D_commutant(act).holds == v.d;
      verdicts.push_back(v);
      holds += v.d;
      const bool chain[] = {v.d, v.linf, v.l3, v.l2, v.l1};
      for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a + 1; b < 5; ++b)
          if (chain[a] && !chain[b]) o.fail(e.name);
    }
    o.detail << pop.size() << " actions, " << holds << " satisfy (D), no broken implication; ";
  });

  run(8, "(D) iff (Lip_1) and (D) iff commutant", 0, [](Outcome& o) {
    if (verdicts.size() != pop.size()) {
      o.fail("criterion 7 did not complete");
      return;
    }
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const auto& v = verdicts[i];
      if (v.d != v.lip1_direct || v.d != v.l1 || !v.commutant_ok) {
        ++disagreements;
        o.fail(pop[i].name);
      }
    }
    const Tolerance tol{1e-9};
    for (const auto& e : builtin_catalog<double>()) {
      const bool d = check_D(e.action, tol).holds;
      if (d != check_lip1_universal(e.action, tol).holds) o.fail(e.name + " (float)");
      if (kappa_is_transpose(e.action, tol) && d != check_D_commutant(e.action, tol).holds) o.fail(e.name + " commutant (float)");
    }
    o.detail << pop.size() << " actions, " << disagreements << " discrepancies; ";
  });

  run(9, "envelope dimension, idempotence, universal property, annihilator", 300, [](Outcome& o) {
    std::size_t classical = 0, rounds = 0;
    for (const auto& e : builtin_catalog<Q>()) {
      auto env = envelope(e.action);
      if (env.reached_full_algebra) {
        o.fail(e.name + " saturated to the full algebra");
        continue;
      }
      rounds += env.iterations;
      if (e.classical()) {
        ++classical;
        if (env.quotient.group->dim() != isometric_elements(e).size()) o.fail(e.name + " dimension");
      }
      if (!check_D(env.induced).holds) o.fail(e.name + " induced action");
      if (!envelope(env.induced).ideal.empty()) o.fail(e.name + " idempotence");
      auto up = verify_universal_property(e.action, env);
      if (up.factorization_failures != 0 || up.larger_isometric != 0 || !up.envelope_found) o.fail(e.name + " universal property");
      if (!annihilator_convolution_check(e.action.qg(), env.ideal, 500, 9)) o.fail(e.name + " annihilator");
    }
    for (const auto& e : builtin_catalog<double>()) {
      const Tolerance tol{1e-10};
      auto env = envelope(e.action, tol);
      if (!check_D(env.induced, Tolerance{1e-9}).holds) o.fail(e.name + " induced action (float)");
      auto up = verify_universal_property(e.action, env, Tolerance{1e-9});
      if (up.factorization_failures != 0) o.fail(e.name + " universal property (float)");
      if (!annihilator_convolution_check(e.action.qg(), env.ideal, 500, 9, Tolerance{1e-9})) o.fail(e.name + " annihilator (float)");
    }
    o.detail << classical << " classical entries, saturation rounds " << rounds << "; ";
  });

  run(10, "verifier passes the catalog and detects injected faults", 0, [](Outcome& o) {
    const Tolerance tol{1e-10};
    auto cat = builtin_catalog<double>();
    for (const auto& e : cat) {
      if (!verify_quantum_group(e.action.qg(), tol).passed) o.fail(e.name + " quantum group");
      if (!verify_coaction(e.action, tol).passed) o.fail(e.name + " coaction");
    }
    for (const auto& e : builtin_catalog<Q>())
      if (!verify_quantum_group(e.action.qg()).passed) o.fail(e.name + " quantum group (exact)");
    std::mt19937_64 rng(1010);
    std::size_t detected = 0;
    const Cx<double> eps(1e-3);
    for (int t = 0; t < 50; ++t) {
      const auto& e = cat[rng() % cat.size()];
      auto g = e.action.qg();
      const std::size_t d = g.dim(), col = rng() % d;
      double worst = 0;
      switch (t % 4) {
        case 0: {
          const std::size_t row = rng() % (d * d);
          g.set_delta_entry(row, col, g.delta_entry(row, col) + eps);
          worst = verify_quantum_group(g, tol).worst;
          break;
        }
        case 1:
          g.epsilon[col] += eps;
          worst = verify_quantum_group(g, tol).worst;
          break;
        case 2: {
          const std::size_t row = rng() % d;
          g.set_kappa_entry(row, col, g.kappa_entry(row, col) + eps);
          worst = verify_quantum_group(g, tol).worst;
          break;
        }
        default: {
          auto act = e.action;
          act.u[rng() % act.n()][rng() % act.n()][col] += eps;
          for (const auto& c : verify_coaction(act, tol).checks) worst = std::max(worst, c.max_violation);
        }
      }
      if (worst >= 1e-4) ++detected;
      else o.fail("fault " + std::to_string(t) + " in " + e.name);
    }
    o.detail << cat.size() << " entries, " << detected << "/50 faults detected; ";
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
