// qiso: command-line front end for transport, Hall, isometry checks, envelopes and batch runs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qiso/search.hpp"

namespace fs = std::filesystem;
using namespace qiso;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kFailed = 3, kGuard = 4 };

struct Globals {
  std::string mode = "rational";
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string out;
  bool seed_set = false, jobs_set = false;
};

struct Args {
  std::string file, space, mu, nu, pairs, state, config, kind = "verify", format = "json", export_dir;
  std::string condition = "d", p = "1", level, sublevel;
  bool universal = false, list = false;
  std::vector<std::string> names;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) std::cout << text;
  else write_text_file(g.out, text);
}

void emit(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  double p = 0;
  try {
    p = std::stod(s);
  } catch (const std::exception&) {
    throw InvalidInput("InvalidInput", "p must be a number >= 1 or inf");
  }
  require(p >= 1, "InvalidInput", "p must be >= 1");
  return p;
}

template <Field R>
json transport_json(const TransportResult<R>& t) {
  json j;
  j["value"] = scalar_to_json(t.value);
  j["plan"] = plan_to_json(t.plan.plan);
  j["duals"] = {{"f", scalars_to_json(t.duals.f)}, {"g", scalars_to_json(t.duals.g)}, {"objective", scalar_to_json(t.duals.objective)}};
  json basis = json::array();
  for (auto [i, k] : t.basis) basis.push_back({i, k});
  j["certificate"] = {{"basis", basis},
                      {"pivots", t.pivots},
                      {"marginal_residual", t.plan.marginal_residual()},
                      {"duality_gap", std::abs(to_double(R(t.value - t.duals.objective)))}};
  return j;
}

template <Field R>
json feasibility_json(const CouplingFeasibility<R>& c) {
  json j;
  j["feasible"] = c.feasible;
  if (c.coupling) j["plan"] = plan_to_json(c.coupling->plan);
  if (!c.feasible)
    j["certificate"] = {{"subset", pointset_to_json(c.violator)}, {"mu_S", scalar_to_json(c.mu_S)}, {"nu_N_S", scalar_to_json(c.nu_NS)}};
  return j;
}

template <Field R>
int cmd_validate(const Globals& g, const Args& a, const Tolerance& tol) {
  auto j = read_json_file(a.file);
  const fs::path base = fs::path(a.file).parent_path();
  json out;
  int code = kOk;
  if (j.contains("u")) {
    auto act = coaction_from_json<R>(j, base, tol);
    auto qr = verify_quantum_group(act.qg(), tol);
    auto cr = verify_coaction(act, tol, true);
    out["kind"] = "coaction";
    out["group_axioms"] = axioms_to_json(qr.axioms);
    json checks = json::object();
    for (const auto& c : cr.checks) checks[c.name] = c.max_violation;
    out["coaction_checks"] = checks;
    out["faithful"] = cr.faithful;
    out["kappa_transpose"] = cr.kappa_transpose;
    out["valid"] = qr.passed && cr.passed;
    if (!(qr.passed && cr.passed)) code = kInvalid;
  } else if (j.contains("delta") || j.contains("blocks")) {
    auto lg = quantum_group_from_json<R>(j, tol);
    auto qr = verify_quantum_group(lg.qg, tol);
    out["kind"] = "quantum-group";
    out["dim"] = lg.qg.dim();
    out["axioms"] = axioms_to_json(qr.axioms);
    out["kac"] = qr.kac_ok(tol.eps);
    out["valid"] = qr.passed;
    if (!qr.passed) code = kInvalid;
  } else if (j.contains("pairs")) {
    auto h = hall_from_json<R>(j, tol);
    out["kind"] = "hall";
    out["n"] = h.mu.size();
    out["valid"] = true;
  } else if (j.contains("dist")) {
    auto s = metric_from_json<R>(j, tol);
    out["kind"] = "metric";
    out["n"] = s.n;
    out["realized"] = scalars_to_json(s.realized);
    out["valid"] = true;
  } else if (j.contains("mass")) {
    auto d = distribution_from_json<R>(j, tol);
    out["kind"] = "distribution";
    out["n"] = d.size();
    out["valid"] = true;
  } else {
    throw InvalidInput("InvalidInput", "unrecognized document: expected a metric, distribution, group, coaction or Hall file");
  }
  emit(g, out);
  return code;
}

template <Field R>
struct TransportInputs {
  FiniteMetricSpace<R> space;
  ProbVector<R> mu, nu;
};

template <Field R>
TransportInputs<R> transport_inputs(const Args& a, const Tolerance& tol) {
  require(!a.space.empty() && !a.mu.empty() && !a.nu.empty(), "InvalidInput", "--space, --mu and --nu are required");
  TransportInputs<R> in{metric_from_json<R>(read_json_file(a.space), tol), distribution_from_json<R>(read_json_file(a.mu), tol),
                        distribution_from_json<R>(read_json_file(a.nu), tol)};
  require(in.mu.size() == in.space.n && in.nu.size() == in.space.n, "DimensionMismatch", "distribution length differs from n");
  return in;
}

template <Field R>
int cmd_wasserstein(const Globals& g, const Args& a, const Tolerance& tol) {
  auto in = transport_inputs<R>(a, tol);
  const double p = parse_p(a.p);
  json out;
  out["p"] = p_to_json(p);
  if (std::isinf(p)) {
    auto b = wasserstein_inf(in.space, in.mu, in.nu, tol);
    out["value"] = scalar_to_json(b.r);
    out["plan"] = plan_to_json(b.plan.plan);
  } else {
    auto t = wasserstein_pp(in.space, in.mu, in.nu, p, tol);
    out = transport_json(t);
    out["p"] = p_to_json(p);
    out["value_pth_power"] = out["value"];
    out["value"] = wasserstein_p(in.space, in.mu, in.nu, p, tol);
    if (p == 1) {
      auto k = kantorovich_w1(in.space, in.mu, in.nu, tol);
      out["value"] = scalar_to_json(t.value);
      out["kantorovich"] = {{"value", scalar_to_json(k.value)}, {"witness", scalars_to_json(k.witness)}};
    }
  }
  emit(g, out);
  return kOk;
}

template <Field R>
int cmd_winf(const Globals& g, const Args& a, const Tolerance& tol) {
  auto in = transport_inputs<R>(a, tol);
  auto b = wasserstein_inf(in.space, in.mu, in.nu, tol);
  json out;
  out["value"] = scalar_to_json(b.r);
  out["plan"] = plan_to_json(b.plan.plan);
  if (b.below) out["certificate"] = feasibility_json(*b.below)["certificate"];
  emit(g, out);
  return kOk;
}

template <Field R>
int cmd_coupling_on(const Globals& g, const Args& a, const Tolerance& tol) {
  require(!a.mu.empty() && !a.nu.empty(), "InvalidInput", "--mu and --nu are required");
  auto mu = distribution_from_json<R>(read_json_file(a.mu), tol);
  auto nu = distribution_from_json<R>(read_json_file(a.nu), tol);
  require(mu.size() == nu.size(), "DimensionMismatch", "mu and nu differ in length");
  const int chosen = !a.pairs.empty() + !a.level.empty() + !a.sublevel.empty();
  require(chosen == 1, "InvalidInput", "give exactly one of --pairs, --level, --sublevel");
  PairSet y(mu.size());
  if (!a.pairs.empty()) {
    auto pj = read_json_file(a.pairs);
    y = pairs_from_json(pj.is_object() ? pj.at("pairs") : pj, mu.size());
  } else {
    require(!a.space.empty(), "InvalidInput", "--level and --sublevel need --space");
    auto space = metric_from_json<R>(read_json_file(a.space), tol);
    require(space.n == mu.size(), "DimensionMismatch", "distribution length differs from n");
    auto r = scalar_from_json<R>(json(a.level.empty() ? a.sublevel : a.level));
    y = a.level.empty() ? sublevel_set(space, r) : level_set(space, r);
  }
  auto c = feasible_coupling_on(mu, nu, y, tol);
  emit(g, feasibility_json(c));
  return c.feasible ? kOk : kFailed;
}

template <Field R>
int cmd_hall(const Globals& g, const Args& a, const Tolerance& tol) {
  auto inst = hall_from_json<R>(read_json_file(a.file), tol);
  auto v = decide_hall(inst, tol);
  json out;
  out["feasible"] = v.feasible;
  if (v.coupling) out["plan"] = plan_to_json(v.coupling->plan);
  if (v.violator)
    out["certificate"] = {{"subset", pointset_to_json(*v.violator)}, {"mu_S", scalar_to_json(v.mu_S)}, {"nu_N_S", scalar_to_json(v.nu_NS)}};
  emit(g, out);
  return v.feasible ? kOk : kFailed;
}

template <Field R>
int cmd_check(const Globals& g, const Args& a, const Tolerance& tol) {
  auto act = load_coaction<R>(a.file, tol);
  auto cr = verify_coaction(act, tol);
  if (!cr.passed) throw InvalidInput("InvalidCoaction", "coaction fails its axioms");
  require(a.universal != !a.state.empty(), "InvalidInput", "give exactly one of --universal or --state");
  const double p = parse_p(a.p);
  std::optional<Functional<R>> psi;
  if (!a.state.empty()) psi = state_from_json<R>(act.qg().shape, read_json_file(a.state), tol);
  IsometryVerdict<R> v;
  const std::string& c = a.condition;
  if (c == "d") {
    require(!psi, "InvalidInput", "condition d is universal only");
    v = check_D(act, tol);
  } else if (c == "d-commutant") {
    require(!psi, "InvalidInput", "condition d-commutant is universal only");
    v = check_D_commutant(act, tol);
  } else if (c == "lip") {
    if (psi) v = check_lip_p_state(act, *psi, p, tol);
    else if (std::isinf(p)) v = check_winf_universal(act, tol);
    else if (p == 1) v = check_lip1_universal(act, tol);
    else v = check_lip_p_universal(act, p, tol);
  } else if (c == "winf") {
    v = psi ? check_support_state(act, *psi, false, tol) : check_winf_universal(act, tol);
  } else if (c == "thm-main") {
    v = psi ? check_support_state(act, *psi, true, tol) : check_theorem_main(act, tol);
  } else {
    throw InvalidInput("InvalidInput", "unknown condition " + c);
  }
  emit(g, verdict_to_json(v));
  return v.holds ? kOk : kFailed;
}

template <Field R>
int cmd_envelope(const Globals& g, const Args& a, const Tolerance& tol) {
  auto act = load_coaction<R>(a.file, tol);
  auto cr = verify_coaction(act, tol, true);
  if (!cr.passed) throw InvalidInput("InvalidCoaction", "coaction fails its axioms");
  auto env = envelope(act, tol);
  json out;
  out["generated_ideal"] = ideal_to_json(env.generated);
  out["ideal"] = ideal_to_json(env.ideal);
  out["saturation_rounds"] = env.iterations;
  out["reached_full_algebra"] = env.reached_full_algebra;
  if (!env.reached_full_algebra) {
    out["kept_blocks"] = env.quotient.kept;
    out["quotient"] = quantum_group_to_json(*env.quotient.group);
    auto qr = verify_quantum_group(*env.quotient.group, tol);
    auto up = verify_universal_property(act, env, tol);
    out["report"] = {{"well_defined_residual", env.quotient.well_defined},
                     {"quotient_axioms", axioms_to_json(qr.axioms)},
                     {"quotient_valid", qr.passed},
                     {"induced_D", check_D(env.induced, tol).holds},
                     {"closed_sets", up.closed_sets},
                     {"isometric_quotients", up.isometric},
                     {"factorization_failures", up.factorization_failures},
                     {"larger_isometric", up.larger_isometric}};
    out["induced_action"] = coaction_to_json(env.induced);
  }
  emit(g, out);
  return kOk;
}

template <Field R>
SearchConfig load_config(const Globals& g, const Args& a, const Tolerance& tol) {
  SearchConfig cfg;
  if (!a.config.empty()) cfg = config_from_json(read_json_file(a.config));
  if (a.config.empty() || g.seed_set) cfg.seed = g.seed;
  if (a.config.empty() || g.jobs_set) cfg.jobs = std::max<std::size_t>(1, g.jobs);
  cfg.tol = tol;
  if (!a.names.empty()) cfg.catalog = a.names;
  return cfg;
}

template <Field R>
int finish_run(const Globals& g, const RunReport& r, const std::string& format) {
  emit(g, emit_report(r, parse_format(format)));
  return r.violations.empty() ? kOk : kFailed;
}

template <Field R>
int cmd_catalog(const Globals& g, const Args& a, const Tolerance& tol) {
  if (a.list) {
    json out = json::array();
    for (const auto& e : builtin_catalog<R>())
      out.push_back({{"name", e.name}, {"n", e.action.n()}, {"dim", e.action.qg().dim()}, {"classical", e.classical()}, {"note", e.note}});
    emit(g, out);
    return kOk;
  }
  if (!a.export_dir.empty()) {
    fs::create_directories(a.export_dir);
    json written = json::array();
    for (const auto& e : builtin_catalog<R>()) {
      if (!a.names.empty() && std::find(a.names.begin(), a.names.end(), e.name) == a.names.end()) continue;
      auto path = fs::path(a.export_dir) / (e.name + ".json");
      write_text_file(path, coaction_to_json(e.action).dump(1) + "\n");
      written.push_back(path.string());
    }
    emit(g, written);
    return kOk;
  }
  return finish_run<R>(g, run_catalog_verification<R>(load_config<R>(g, a, tol)), a.format);
}

template <Field R>
int cmd_search(const Globals& g, const Args& a, const Tolerance& tol) {
  auto cfg = load_config<R>(g, a, tol);
  if (a.kind == "verify") return finish_run<R>(g, run_catalog_verification<R>(cfg), a.format);
  RunReport r;
  if (a.kind == "sublevel") r = search_conjecture_sublevel<R>(cfg);
  else if (a.kind == "span") r = search_conjecture_span<R>(cfg);
  else throw InvalidInput("InvalidInput", "search kind is verify, sublevel or span");
  // conjecture searches report evidence; hits are not failures of the run
  emit(g, emit_report(r, parse_format(a.format)));
  return kOk;
}

template <Field R>
int dispatch(const std::string& sub, const Globals& g, const Args& a) {
  const Tolerance tol{g.tol};
  if (sub == "validate") return cmd_validate<R>(g, a, tol);
  if (sub == "wasserstein") return cmd_wasserstein<R>(g, a, tol);
  if (sub == "winf") return cmd_winf<R>(g, a, tol);
  if (sub == "coupling-on") return cmd_coupling_on<R>(g, a, tol);
  if (sub == "hall") return cmd_hall<R>(g, a, tol);
  if (sub == "check") return cmd_check<R>(g, a, tol);
  if (sub == "envelope") return cmd_envelope<R>(g, a, tol);
  if (sub == "catalog") return cmd_catalog<R>(g, a, tol);
  return cmd_search<R>(g, a, tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum isometry toolkit: transport, Hall couplings, isometry conditions and envelopes"};
  app.require_subcommand(1);
  Globals g;
  Args a;
  app.add_option("--mode", g.mode, "Arithmetic: rational or float")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--tol", g.tol, "Tolerance for float mode");
  auto seed_opt = app.add_option("--seed", g.seed, "Random seed");
  auto jobs_opt = app.add_option("--jobs", g.jobs, "Worker threads for batch runs");
  app.add_option("--out", g.out, "Write output to this file instead of stdout");

  auto validate = app.add_subcommand("validate", "Validate a metric, distribution, group, coaction or Hall file");
  validate->add_option("file", a.file)->required();

  for (auto* sub : {app.add_subcommand("wasserstein", "Exact W_p between two distributions"),
                    app.add_subcommand("winf", "W_inf with an infeasibility certificate just below it")}) {
    sub->add_option("--space", a.space, "Metric file")->required();
    sub->add_option("--mu", a.mu, "Distribution file")->required();
    sub->add_option("--nu", a.nu, "Distribution file")->required();
    if (sub->get_name() == "wasserstein") sub->add_option("--p", a.p, "Exponent, or inf");
  }

  auto coupling = app.add_subcommand("coupling-on", "Find a coupling supported on a pair set");
  coupling->add_option("--mu", a.mu)->required();
  coupling->add_option("--nu", a.nu)->required();
  coupling->add_option("--pairs", a.pairs, "File with a list of [i, j] pairs");
  coupling->add_option("--space", a.space, "Metric file, for --level or --sublevel");
  coupling->add_option("--level", a.level, "Use the pairs at exactly this distance");
  coupling->add_option("--sublevel", a.sublevel, "Use the pairs at distance at most this");

  auto hall = app.add_subcommand("hall", "Decide a Hall coupling instance");
  hall->add_option("file", a.file)->required();

  auto check = app.add_subcommand("check", "Decide an isometry condition for a coaction");
  check->add_option("file", a.file, "Coaction file")->required();
  check->add_option("--condition", a.condition)->check(CLI::IsMember({"d", "d-commutant", "lip", "winf", "thm-main"}));
  check->add_option("--p", a.p, "Exponent for lip, or inf");
  check->add_flag("--universal", a.universal, "Quantify over all states");
  check->add_option("--state", a.state, "State file");

  auto env = app.add_subcommand("envelope", "Build the isometric envelope of a coaction");
  env->add_option("file", a.file, "Coaction file")->required();

  auto catalog = app.add_subcommand("catalog", "List, export or verify the built-in catalog");
  catalog->add_flag("--list", a.list);
  catalog->add_option("--export", a.export_dir, "Write one coaction file per entry into this directory");
  catalog->add_option("--name", a.names, "Restrict to these entries");
  catalog->add_option("--config", a.config, "Search configuration file");
  catalog->add_option("--format", a.format)->check(CLI::IsMember({"json", "csv", "markdown", "md"}));

  auto search = app.add_subcommand("search", "Batch verification or conjecture search");
  search->add_option("--kind", a.kind)->check(CLI::IsMember({"verify", "sublevel", "span"}));
  search->add_option("--config", a.config, "Search configuration file");
  search->add_option("--format", a.format)->check(CLI::IsMember({"json", "csv", "markdown", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }
  g.seed_set = seed_opt->count() > 0;
  g.jobs_set = jobs_opt->count() > 0;
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    return g.mode == "rational" ? dispatch<Rational>(sub, g, a) : dispatch<double>(sub, g, a);
  } catch (const SizeGuardExceeded& e) {
    std::cerr << e.what() << "\n";
    return kGuard;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "InvalidInput: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
