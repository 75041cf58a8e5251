#pragma once

// Batch runs over the catalog and random actions, with implication tallies and report emission.

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qiso/catalog.hpp"
#include "qiso/envelope.hpp"
#include "qiso/io.hpp"
#include "qiso/isometry.hpp"

namespace qiso {

struct SearchConfig {
  std::size_t n_min = 2, n_max = 6;
  MetricModel model = MetricModel::ShortestPathGraph;
  std::vector<std::string> catalog{"all"};  // names, "all", or empty for none
  std::size_t random_classical = 0;
  std::size_t random_dual = 0;
  std::size_t state_samples = 20;
  std::vector<double> p_list{1, 2, 3, kInfinity};
  std::uint64_t seed = 1;
  double time_budget = 0;  // seconds, 0 = unlimited
  std::size_t jobs = 1;
  std::string output;
  Tolerance tol{};
};

inline SearchConfig config_from_json(const json& j) {
  SearchConfig c;
  if (j.contains("n_range")) {
    auto r = j["n_range"].get<std::vector<std::size_t>>();
    require(r.size() == 2 && r[0] <= r[1] && r[0] >= 2, "InvalidInput", "n_range must be [min, max] with 2 <= min <= max");
    c.n_min = r[0];
    c.n_max = r[1];
  }
  if (j.contains("metric_model")) {
    auto m = j["metric_model"].get<std::string>();
    require(m == "euclidean" || m == "graph", "InvalidInput", "metric_model is euclidean or graph");
    c.model = m == "euclidean" ? MetricModel::EuclideanSample : MetricModel::ShortestPathGraph;
  }
  if (j.contains("catalog")) {
    if (j["catalog"].is_string()) c.catalog = {j["catalog"].get<std::string>()};
    else c.catalog = j["catalog"].get<std::vector<std::string>>();
  }
  c.random_classical = j.value("random_classical", c.random_classical);
  c.random_dual = j.value("random_dual", c.random_dual);
  c.state_samples = j.value("state_samples", c.state_samples);
  if (j.contains("p_list")) {
    c.p_list.clear();
    for (const auto& p : j["p_list"]) {
      double v = p.is_string() && p.get<std::string>() == "inf" ? kInfinity : p.get<double>();
      require(v >= 1, "InvalidInput", "p must be >= 1");
      c.p_list.push_back(v);
    }
    require(!c.p_list.empty(), "InvalidInput", "p_list must be non-empty");
  }
  c.seed = j.value("seed", c.seed);
  c.time_budget = j.value("time_budget", c.time_budget);
  c.jobs = std::max<std::size_t>(1, j.value("jobs", c.jobs));
  c.output = j.value("output", c.output);
  if (j.contains("tol")) c.tol.eps = j["tol"].get<double>();
  return c;
}

inline const char* kHolds = "holds";
inline const char* kFails = "fails";
inline const char* kUndecided = "undecided-exact, sampled-only";
inline const char* kNotApplicable = "n/a";

struct VerdictRecord {
  std::string condition;
  std::string status;
  double margin = 0;
  json witness;  // null unless failing
  std::string sampled;  // summary of the sampled fallback after a size guard
};

struct EnvelopeSummary {
  std::size_t dim = 0;
  std::size_t iterations = 0;
  std::vector<std::size_t> ideal;
  bool full = false;
  std::size_t factorization_failures = 0;
};

struct InstanceRecord {
  std::string name;
  std::string kind;  // catalog | random-classical | random-dual
  std::uint64_t seed = 0;
  std::size_t n = 0, dim = 0;
  std::vector<VerdictRecord> verdicts;
  std::optional<EnvelopeSummary> envelope;
  double seconds = 0;

  const VerdictRecord* find(const std::string& c) const {
    for (const auto& v : verdicts)
      if (v.condition == c) return &v;
    return nullptr;
  }
  std::optional<bool> holds(const std::string& c) const {
    auto v = find(c);
    if (!v) return std::nullopt;
    if (v->status == kHolds) return true;
    if (v->status == kFails) return false;
    return std::nullopt;
  }
};

struct Dossier {
  std::string instance;
  std::uint64_t seed = 0;
  std::string reason;
  json data;
};

struct RunReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<std::string> conditions;
  std::vector<InstanceRecord> instances;
  std::vector<Dossier> dossiers;
  std::vector<std::string> violations;  // broken implications, one line each
  json stats = json::object();
  bool truncated = false;
  double seconds = 0;
};

inline std::string p_label(double p) {
  if (std::isinf(p)) return "Lip_inf";
  std::ostringstream os;
  os << "Lip_" << p;
  return os.str();
}

/// Implications every run must respect, checked over decided verdicts.
inline std::vector<std::string> implication_violations(const InstanceRecord& rec, const std::vector<double>& ps) {
  std::vector<std::string> out;
  auto implies = [&](const std::string& a, const std::string& b) {
    auto ha = rec.holds(a), hb = rec.holds(b);
    if (ha && hb && *ha && !*hb) out.push_back(rec.name + ": " + a + " holds but " + b + " fails");
  };
  auto equiv = [&](const std::string& a, const std::string& b) {
    implies(a, b);
    implies(b, a);
  };
  for (double p : ps) implies("D", p_label(p));
  for (double p : ps)
    for (double q : ps)
      if (q < p) implies(p_label(p), p_label(q));
  equiv("D", "Lip_1");
  equiv("D", "D_commutant");
  implies("D", "TheoremMain");
  implies("D", "injective");
  implies("TheoremMain", "Lip_inf");
  return out;
}

/// matrix[a][b] = number of instances where a holds and b fails.
inline std::map<std::string, std::map<std::string, std::size_t>> implication_matrix(const RunReport& r) {
  std::map<std::string, std::map<std::string, std::size_t>> m;
  for (const auto& a : r.conditions)
    for (const auto& b : r.conditions) m[a][b] = 0;
  for (const auto& rec : r.instances)
    for (const auto& a : r.conditions)
      for (const auto& b : r.conditions) {
        auto ha = rec.holds(a), hb = rec.holds(b);
        if (ha && hb && *ha && !*hb) ++m[a][b];
      }
  return m;
}

/// Observed truth patterns over the report's conditions ('1' holds, '0' fails, '?' undecided).
inline std::map<std::string, std::size_t> verdict_patterns(const RunReport& r) {
  std::map<std::string, std::size_t> out;
  for (const auto& rec : r.instances) {
    std::string key;
    for (const auto& c : r.conditions) {
      auto h = rec.holds(c);
      key.push_back(h ? (*h ? '1' : '0') : '?');
    }
    ++out[key];
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Instance evaluation

template <Field R>
struct Instance {
  CatalogEntry<R> entry;
  std::string kind;
  std::uint64_t seed = 0;
};

template <Field R>
std::vector<Instance<R>> build_population(const SearchConfig& cfg) {
  std::vector<Instance<R>> out;
  bool all = std::find(cfg.catalog.begin(), cfg.catalog.end(), "all") != cfg.catalog.end();
  if (all || !cfg.catalog.empty()) {
    std::vector<std::string> found;
    for (auto& e : builtin_catalog<R>()) {
      bool pick = all || std::find(cfg.catalog.begin(), cfg.catalog.end(), e.name) != cfg.catalog.end();
      if (!pick) continue;
      found.push_back(e.name);
      out.push_back({std::move(e), "catalog", 0});
    }
    if (!all)
      for (const auto& name : cfg.catalog)
        if (std::find(found.begin(), found.end(), name) == found.end())
          throw InvalidInput("CatalogEntryInvalid", "no catalog entry named " + name);
  }
  std::mt19937_64 rng(cfg.seed);
  const std::size_t cmax = std::min<std::size_t>(cfg.n_max, 5);
  for (std::size_t i = 0; i < cfg.random_classical; ++i) {
    std::uint64_t s = cfg.seed * 1000003 + i;
    std::size_t n = cfg.n_min + static_cast<std::size_t>(rng() % (std::max(cmax, cfg.n_min) - cfg.n_min + 1));
    out.push_back({random_classical_action<R>(n, s), "random-classical", s});
  }
  for (std::size_t i = 0; i < cfg.random_dual; ++i) {
    std::uint64_t s = cfg.seed * 2000003 + i;
    out.push_back({random_dual_action<R>(std::max<std::size_t>(4, cfg.n_max), s), "random-dual", s});
  }
  return out;
}

namespace detail {

template <Field R>
VerdictRecord record_of(const std::string& label, const IsometryVerdict<R>& v) {
  VerdictRecord r{label, v.holds ? kHolds : kFails, v.margin, json(), {}};
  if (!v.holds) r.witness = verdict_to_json(v).value("witness", json());
  return r;
}

/// Exact verdict, or the sampled per-state fallback when a size guard trips.
template <Field R, class Exact, class Sampled>
VerdictRecord decide(const std::string& label, Exact exact, Sampled sampled) {
  try {
    return record_of(label, exact());
  } catch (const SizeGuardExceeded&) {
    VerdictRecord r{label, kUndecided, 0, json(), sampled()};
    return r;
  }
}

}  // namespace detail

template <Field R>
InstanceRecord evaluate_instance(const Instance<R>& inst, const SearchConfig& cfg, bool with_envelope = true) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& act = inst.entry.action;
  const auto& tol = cfg.tol;
  InstanceRecord rec;
  rec.name = inst.entry.name;
  rec.kind = inst.kind;
  rec.seed = inst.seed;
  rec.n = act.n();
  rec.dim = act.qg().dim();

  std::vector<Functional<R>> states;
  auto sample_states = [&]() -> const std::vector<Functional<R>>& {
    if (states.empty())
      for (std::size_t k = 0; k < cfg.state_samples; ++k) states.push_back(random_state<R>(act.qg().shape, inst.seed * 7919 + k));
    return states;
  };
  auto sampled_lip = [&](double p) {
    return [&, p] {
      std::size_t held = 0;
      for (const auto& s : sample_states()) held += check_lip_p_state(act, s, p, tol).holds;
      return "held on " + std::to_string(held) + " of " + std::to_string(states.size()) + " sampled states";
    };
  };
  auto sampled_support = [&](bool level) {
    return [&, level] {
      std::size_t held = 0;
      for (const auto& s : sample_states()) held += check_support_state(act, s, level, tol).holds;
      return "held on " + std::to_string(held) + " of " + std::to_string(states.size()) + " sampled states";
    };
  };

  rec.verdicts.push_back(detail::record_of("D", check_D(act, tol)));
  if (kappa_is_transpose(act, tol)) rec.verdicts.push_back(detail::record_of("D_commutant", check_D_commutant(act, tol)));
  else rec.verdicts.push_back({"D_commutant", kNotApplicable, 0, json(), {}});
  for (double p : cfg.p_list) {
    const std::string label = p_label(p);
    if (std::isinf(p)) {
      rec.verdicts.push_back(detail::decide<R>(label, [&] { return check_winf_universal(act, tol); }, sampled_support(false)));
    } else if (p == 1) {
      rec.verdicts.push_back(detail::decide<R>(label, [&] { return check_lip1_universal(act, tol); }, sampled_lip(1)));
    } else {
      rec.verdicts.push_back(detail::decide<R>(label, [&] { return check_lip_p_universal(act, p, tol); }, sampled_lip(p)));
    }
  }
  rec.verdicts.push_back(detail::decide<R>("TheoremMain", [&] { return check_theorem_main(act, tol); }, sampled_support(true)));
  rec.verdicts.push_back({"injective", check_injectivity(act, tol) ? kHolds : kFails, 0, json(), {}});

  if (with_envelope) {
    auto env = envelope(act, tol);
    EnvelopeSummary es;
    es.iterations = env.iterations;
    es.ideal = env.ideal.blocks();
    es.full = env.reached_full_algebra;
    if (!es.full) {
      es.dim = env.quotient.group->dim();
      es.factorization_failures = verify_universal_property(act, env, tol).factorization_failures;
    }
    rec.envelope = es;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

namespace detail {

/// Evaluates f(i) for every instance on a worker pool, in chunks so the time budget can stop the run
/// between chunks. Results land at their own index.
template <class Result, class F>
std::vector<std::optional<Result>> run_pool(std::size_t count, std::size_t jobs, double budget, bool& truncated, F f) {
  std::vector<std::optional<Result>> out(count);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t chunk = std::max<std::size_t>(1, jobs);
  truncated = false;
  for (std::size_t start = 0; start < count; start += chunk) {
    if (budget > 0 && std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > budget) {
      truncated = true;
      break;
    }
    const std::size_t stop = std::min(count, start + chunk);
    if (jobs <= 1) {
      for (std::size_t i = start; i < stop; ++i) out[i] = f(i);
      continue;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(stop - start);
    for (std::size_t i = start; i < stop; ++i)
      workers.emplace_back([&, i] {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i - start] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return out;
}

inline std::vector<std::string> condition_columns(const SearchConfig& cfg) {
  std::vector<std::string> c{"D", "D_commutant"};
  for (double p : cfg.p_list) c.push_back(p_label(p));
  c.push_back("TheoremMain");
  c.push_back("injective");
  return c;
}

}  // namespace detail

/// Verifies every instance and tallies the implication structure; any broken implication is a
/// violation with a dossier.
template <Field R>
RunReport run_catalog_verification(const SearchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto population = build_population<R>(cfg);
  for (const auto& inst : population) validate_catalog_entry(inst.entry, cfg.tol);
  RunReport rep;
  rep.kind = "catalog-verification";
  rep.seed = cfg.seed;
  rep.conditions = detail::condition_columns(cfg);
  auto results = detail::run_pool<InstanceRecord>(population.size(), cfg.jobs, cfg.time_budget, rep.truncated,
                                                  [&](std::size_t i) { return evaluate_instance(population[i], cfg); });
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    auto& rec = *results[i];
    auto bad = implication_violations(rec, cfg.p_list);
    if (rec.envelope && rec.envelope->factorization_failures > 0)
      bad.push_back(rec.name + ": envelope universal property failed");
    for (const auto& b : bad) rep.violations.push_back(b);
    if (!bad.empty())
      rep.dossiers.push_back({rec.name, rec.seed, bad.front(), coaction_to_json(population[i].entry.action)});
    rep.instances.push_back(std::move(rec));
  }
  rep.stats["instances"] = rep.instances.size();
  rep.stats["skipped_by_budget"] = population.size() - rep.instances.size();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Looks for actions whose sublevel couplings exist for every state while (D) fails.
template <Field R>
RunReport search_conjecture_sublevel(const SearchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto population = build_population<R>(cfg);
  RunReport rep;
  rep.kind = "conjecture-sublevel";
  rep.seed = cfg.seed;
  rep.conditions = {"D", "Lip_inf", "TheoremMain"};
  auto results = detail::run_pool<InstanceRecord>(
      population.size(), cfg.jobs, cfg.time_budget, rep.truncated, [&](std::size_t i) {
        const auto& inst = population[i];
        SearchConfig local = cfg;
        local.p_list = {kInfinity};
        auto rec = evaluate_instance(inst, local, false);
        std::vector<VerdictRecord> keep;
        for (auto& v : rec.verdicts)
          if (v.condition == "D" || v.condition == "Lip_inf" || v.condition == "TheoremMain") keep.push_back(std::move(v));
        rec.verdicts = std::move(keep);
        return rec;
      });
  std::size_t d_fails = 0, undecided = 0;
  std::map<std::size_t, std::size_t> by_n;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    auto& rec = *results[i];
    ++by_n[rec.n];
    auto d = rec.holds("D"), w = rec.holds("Lip_inf");
    if (!w) ++undecided;
    if (d && !*d) ++d_fails;
    if (d && w && !*d && *w)
      rep.dossiers.push_back({rec.name, rec.seed, "sublevel couplings exist for all states but (D) fails",
                              coaction_to_json(population[i].entry.action)});
    rep.instances.push_back(std::move(rec));
  }
  json cov = json::object();
  for (auto [n, c] : by_n) cov[std::to_string(n)] = c;
  rep.stats["instances"] = rep.instances.size();
  rep.stats["d_fails"] = d_fails;
  rep.stats["undecided"] = undecided;
  rep.stats["hits"] = rep.dossiers.size();
  rep.stats["coverage_by_n"] = cov;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Samples (Lip_p)-isometric states until their span stops growing, then tests states inside the
/// span. A state in the span that fails (Lip_p) is a hit.
template <Field R>
RunReport search_conjecture_span(const SearchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto population = build_population<R>(cfg);
  RunReport rep;
  rep.kind = "conjecture-span";
  rep.seed = cfg.seed;
  rep.conditions = {};
  json per = json::array();
  std::vector<std::optional<std::pair<json, std::vector<Dossier>>>> results;
  bool truncated = false;
  results = detail::run_pool<std::pair<json, std::vector<Dossier>>>(
      population.size(), cfg.jobs, cfg.time_budget, truncated, [&](std::size_t i) {
        const auto& inst = population[i];
        const auto& act = inst.entry.action;
        const auto& g = act.qg();
        std::vector<Dossier> hits;
        json entry;
        entry["instance"] = inst.entry.name;
        entry["seed"] = inst.seed;
        json by_p = json::array();
        for (double p : cfg.p_list) {
          SpanBuilder<Cx<R>> span(g.dim(), cfg.tol);
          std::vector<Functional<R>> members;
          std::vector<std::size_t> trace;
          auto consider = [&](const Functional<R>& s) {
            if (!check_lip_p_state(act, s, p, cfg.tol).holds) return;
            if (span.add(s.values())) members.push_back(s);
            trace.push_back(span.dimension());
          };
          consider(g.counit_functional());
          try {
            consider(haar_state(g, cfg.tol).h);
          } catch (const Error&) {
          }
          // extreme states on each block from matrix units, then random states
          for (std::size_t k = 0; k < g.shape->blocks(); ++k)
            for (std::size_t a = 0; a < g.shape->size(k); ++a) {
              CVec<R> xi(g.shape->size(k));
              xi[a] = Cx<R>(1);
              consider(vector_state(g.shape, k, xi));
            }
          for (std::size_t s = 0; s < cfg.state_samples; ++s) consider(random_state<R>(g.shape, inst.seed * 104729 + s));
          // states in the span: random affine combinations that stay positive
          std::mt19937_64 rng(inst.seed + 17);
          std::uniform_int_distribution<int> coef(-2, 6);
          std::size_t tested = 0, failed = 0;
          for (std::size_t attempt = 0; attempt < 4 * cfg.state_samples && members.size() > 1; ++attempt) {
            Functional<R> f(g.shape);
            R total(0);
            for (const auto& m : members) {
              R c(coef(rng));
              total += c;
              f += Cx<R>(c) * m;
            }
            if (total == 0) continue;
            f *= Cx<R>(R(1) / total);
            if (!is_state(f, cfg.tol)) continue;
            ++tested;
            auto v = check_lip_p_state(act, f, p, cfg.tol);
            if (!v.holds) {
              ++failed;
              json d = coaction_to_json(act);
              d["state"] = state_to_json(f);
              d["p"] = p_to_json(p);
              hits.push_back({inst.entry.name, inst.seed, "state in the span of " + p_label(p) + " states fails", d});
            }
          }
          json pj;
          pj["p"] = p_to_json(p);
          pj["span_dimension"] = span.dimension();
          pj["dimension_trace"] = trace;
          pj["in_span_tested"] = tested;
          pj["in_span_failed"] = failed;
          by_p.push_back(pj);
        }
        entry["by_p"] = by_p;
        return std::make_pair(entry, hits);
      });
  rep.truncated = truncated;
  for (auto& r : results) {
    if (!r) continue;
    per.push_back(r->first);
    for (auto& d : r->second) rep.dossiers.push_back(std::move(d));
  }
  rep.stats["instances"] = per.size();
  rep.stats["hits"] = rep.dossiers.size();
  rep.stats["per_instance"] = per;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Emission

inline json report_to_json(const RunReport& r) {
  json j;
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  j["conditions"] = r.conditions;
  json inst = json::array();
  for (const auto& rec : r.instances) {
    json x;
    x["name"] = rec.name;
    x["kind"] = rec.kind;
    x["seed"] = rec.seed;
    x["n"] = rec.n;
    x["dim"] = rec.dim;
    json vs = json::array();
    for (const auto& v : rec.verdicts) {
      json vj;
      vj["condition"] = v.condition;
      vj["status"] = v.status;
      vj["margin"] = v.margin;
      if (!v.witness.is_null()) vj["witness"] = v.witness;
      if (!v.sampled.empty()) vj["sampled"] = v.sampled;
      vs.push_back(vj);
    }
    x["verdicts"] = vs;
    if (rec.envelope) {
      const auto& e = *rec.envelope;
      x["envelope"] = {{"dim", e.dim},
                       {"iterations", e.iterations},
                       {"ideal", e.ideal},
                       {"full", e.full},
                       {"factorization_failures", e.factorization_failures}};
    }
    x["seconds"] = rec.seconds;
    inst.push_back(x);
  }
  j["instances"] = inst;
  json m = json::object();
  for (const auto& [a, row] : implication_matrix(r)) {
    json rj = json::object();
    for (const auto& [b, c] : row) rj[b] = c;
    m[a] = rj;
  }
  j["implication_matrix"] = m;
  json pats = json::object();
  for (const auto& [k, c] : verdict_patterns(r)) pats[k] = c;
  j["patterns"] = pats;
  j["violations"] = r.violations;
  json ds = json::array();
  for (const auto& d : r.dossiers) ds.push_back({{"instance", d.instance}, {"seed", d.seed}, {"reason", d.reason}, {"data", d.data}});
  j["dossiers"] = ds;
  j["stats"] = r.stats;
  j["truncated"] = r.truncated;
  j["seconds"] = r.seconds;
  return j;
}

inline RunReport report_from_json(const json& j) {
  RunReport r;
  r.kind = j.at("kind").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.conditions = j.at("conditions").get<std::vector<std::string>>();
  for (const auto& x : j.at("instances")) {
    InstanceRecord rec;
    rec.name = x.at("name").get<std::string>();
    rec.kind = x.at("kind").get<std::string>();
    rec.seed = x.at("seed").get<std::uint64_t>();
    rec.n = x.at("n").get<std::size_t>();
    rec.dim = x.at("dim").get<std::size_t>();
    for (const auto& v : x.at("verdicts"))
      rec.verdicts.push_back({v.at("condition").get<std::string>(), v.at("status").get<std::string>(),
                              v.at("margin").get<double>(), v.value("witness", json()), v.value("sampled", std::string())});
    if (x.contains("envelope")) {
      const auto& e = x["envelope"];
      rec.envelope = EnvelopeSummary{e.at("dim").get<std::size_t>(), e.at("iterations").get<std::size_t>(),
                                     e.at("ideal").get<std::vector<std::size_t>>(), e.at("full").get<bool>(),
                                     e.at("factorization_failures").get<std::size_t>()};
    }
    rec.seconds = x.at("seconds").get<double>();
    r.instances.push_back(std::move(rec));
  }
  r.violations = j.at("violations").get<std::vector<std::string>>();
  for (const auto& d : j.at("dossiers"))
    r.dossiers.push_back({d.at("instance").get<std::string>(), d.at("seed").get<std::uint64_t>(),
                          d.at("reason").get<std::string>(), d.at("data")});
  r.stats = j.at("stats");
  r.truncated = j.at("truncated").get<bool>();
  r.seconds = j.at("seconds").get<double>();
  return r;
}

enum class ReportFormat { Json, Csv, Markdown };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw InvalidInput("InvalidInput", "unknown report format " + s);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string emit_report(const RunReport& r, ReportFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case ReportFormat::Json:
      os << report_to_json(r).dump(2) << "\n";
      break;
    case ReportFormat::Csv: {
      os << "name,kind,seed,n,dim";
      for (const auto& c : r.conditions) os << "," << c;
      os << ",envelope_dim,saturation_rounds,seconds\n";
      for (const auto& rec : r.instances) {
        os << csv_escape(rec.name) << "," << rec.kind << "," << rec.seed << "," << rec.n << "," << rec.dim;
        for (const auto& c : r.conditions) {
          auto v = rec.find(c);
          os << "," << csv_escape(v ? v->status : std::string(kNotApplicable));
        }
        if (rec.envelope) os << "," << rec.envelope->dim << "," << rec.envelope->iterations;
        else os << ",,";
        os << "," << rec.seconds << "\n";
      }
      break;
    }
    case ReportFormat::Markdown: {
      os << "# Run report: " << r.kind << "\n\n";
      os << "Seed " << r.seed << ", " << r.instances.size() << " instances, " << r.violations.size()
         << " implication violations, " << r.dossiers.size() << " dossiers" << (r.truncated ? " (truncated by time budget)" : "")
         << ".\n\n";
      os << "## Implication matrix\n\nEntry (row, column) counts instances where the row condition holds and the column condition fails.\n\n";
      os << "| holds \\ fails |";
      for (const auto& c : r.conditions) os << " " << c << " |";
      os << "\n|---|";
      for (std::size_t i = 0; i < r.conditions.size(); ++i) os << "---|";
      os << "\n";
      auto m = implication_matrix(r);
      for (const auto& a : r.conditions) {
        os << "| " << a << " |";
        for (const auto& b : r.conditions) os << " " << m[a][b] << " |";
        os << "\n";
      }
      os << "\n## Instances\n\n| name | kind | n | dim |";
      for (const auto& c : r.conditions) os << " " << c << " |";
      os << " envelope dim |\n|---|---|---|---|";
      for (std::size_t i = 0; i < r.conditions.size(); ++i) os << "---|";
      os << "---|\n";
      for (const auto& rec : r.instances) {
        os << "| " << rec.name << " | " << rec.kind << " | " << rec.n << " | " << rec.dim << " |";
        for (const auto& c : r.conditions) {
          auto v = rec.find(c);
          os << " " << (v ? v->status : std::string(kNotApplicable)) << " |";
        }
        os << " " << (rec.envelope ? std::to_string(rec.envelope->dim) : std::string("")) << " |\n";
      }
      os << "\n## Violations\n\n";
      if (r.violations.empty()) os << "None.\n";
      for (const auto& v : r.violations) os << "- " << v << "\n";
      os << "\n## Dossiers\n\n";
      if (r.dossiers.empty()) os << "None.\n";
      for (const auto& d : r.dossiers) os << "- " << d.instance << " (seed " << d.seed << "): " << d.reason << "\n";
      break;
    }
  }
  return os.str();
}

}  // namespace qiso
