#pragma once

// JSON formats. Scalars are numbers or strings ("3", "-2/7", "0.25"); complex numbers are
// [re, im] pairs or plain scalars.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qiso/coaction.hpp"
#include "qiso/envelope.hpp"
#include "qiso/errors.hpp"
#include "qiso/isometry.hpp"
#include "qiso/metric.hpp"
#include "qiso/quantum_group.hpp"
#include "qiso/transport.hpp"

namespace qiso {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("IoError", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("IoError", path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("IoError", "cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInput("IoError", "write failed for " + path.string());
}

template <Field R>
R scalar_from_json(const json& j) {
  try {
    if (j.is_string()) {
      const auto text = j.get<std::string>();
      auto slash = text.find('/');
      if (slash != std::string::npos && text.find_first_not_of("0+- ", slash + 1) == std::string::npos)
        throw InvalidInput("InvalidInput", "zero denominator in " + text);
      return parse_scalar<R>(text);
    }
    if (j.is_number_integer()) return R(j.get<long long>());
    if (j.is_number()) {
      if constexpr (is_exact_v<R>) return parse_scalar<R>(j.dump());
      else return j.get<double>();
    }
  } catch (const std::exception& e) {
    throw InvalidInput("InvalidInput", std::string("bad scalar ") + j.dump() + ": " + e.what());
  }
  throw InvalidInput("InvalidInput", "expected a scalar, got " + j.dump());
}

template <Field R>
json scalar_to_json(const R& x) {
  return format_scalar(x);
}

template <Field R>
Cx<R> complex_from_json(const json& j) {
  if (j.is_array()) {
    require(j.size() == 2, "InvalidInput", "complex numbers are [re, im] pairs");
    return Cx<R>(scalar_from_json<R>(j[0]), scalar_from_json<R>(j[1]));
  }
  return Cx<R>(scalar_from_json<R>(j));
}

template <Field R>
json complex_to_json(const Cx<R>& z) {
  return json::array({scalar_to_json(z.re), scalar_to_json(z.im)});
}

template <Field R>
std::vector<R> scalars_from_json(const json& j) {
  require(j.is_array(), "InvalidInput", "expected an array");
  std::vector<R> out;
  for (const auto& x : j) out.push_back(scalar_from_json<R>(x));
  return out;
}

template <Field R>
json scalars_to_json(const std::vector<R>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

// ---------------------------------------------------------------------------------------------
// Metric spaces, distributions, Hall instances

template <Field R>
FiniteMetricSpace<R> metric_from_json(const json& j, const Tolerance& tol = {}) {
  require(j.contains("dist"), "InvalidInput", "metric needs \"dist\"");
  std::vector<std::vector<R>> rows;
  for (const auto& r : j["dist"]) rows.push_back(scalars_from_json<R>(r));
  if (j.contains("n")) require(j["n"].get<std::size_t>() == rows.size(), "DimensionMismatch", "n disagrees with dist");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  auto s = validate_metric<R>(rows, tol);
  if (!labels.empty()) {
    require(labels.size() == s.n, "DimensionMismatch", "one label per point");
    s.labels = std::move(labels);
  }
  return s;
}

template <Field R>
json metric_to_json(const FiniteMetricSpace<R>& s) {
  json j;
  j["n"] = s.n;
  json rows = json::array();
  for (std::size_t i = 0; i < s.n; ++i) rows.push_back(scalars_to_json(s.row(i)));
  j["dist"] = rows;
  if (!s.labels.empty()) j["labels"] = s.labels;
  j["mode"] = is_exact_v<R> ? "rational" : "float";
  return j;
}

template <Field R>
ProbVector<R> distribution_from_json(const json& j, const Tolerance& tol = {}) {
  const json& m = j.is_object() ? j.at("mass") : j;
  return make_prob(scalars_from_json<R>(m), tol);
}

inline PairSet pairs_from_json(const json& j, std::size_t n) {
  PairSet y(n);
  require(j.is_array(), "InvalidInput", "pairs must be a list");
  for (const auto& p : j) {
    require(p.is_array() && p.size() == 2, "InvalidInput", "pairs are [i, j]");
    auto a = p[0].get<std::size_t>(), b = p[1].get<std::size_t>();
    require(a < n && b < n, "DimensionMismatch", "pair index out of range");
    y.insert(a, b);
  }
  return y;
}

template <Field R>
HallInstance<R> hall_from_json(const json& j, const Tolerance& tol = {}) {
  auto mu = distribution_from_json<R>(j.at("mu"), tol);
  auto nu = distribution_from_json<R>(j.at("nu"), tol);
  require(mu.size() == nu.size(), "DimensionMismatch", "mu and nu differ in length");
  return HallInstance<R>{mu, nu, pairs_from_json(j.at("pairs"), mu.size())};
}

template <Field R>
json plan_to_json(const Mat<R>& plan) {
  json rows = json::array();
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < plan.cols(); ++k) r.push_back(scalar_to_json(plan(i, k)));
    rows.push_back(r);
  }
  return rows;
}

inline json pointset_to_json(PointSet s) {
  return s.members();
}

// ---------------------------------------------------------------------------------------------
// Quantum groups and coactions

namespace detail {

template <Field R>
Element<R> element_from_blocks(const std::shared_ptr<const BlockShape>& shape, const json& j) {
  require(j.is_array() && j.size() == shape->blocks(), "ShapeMismatch", "element needs one matrix per block");
  Element<R> e(shape);
  for (std::size_t k = 0; k < shape->blocks(); ++k) {
    const std::size_t n = shape->size(k);
    require(j[k].size() == n, "ShapeMismatch", "block matrix size");
    for (std::size_t a = 0; a < n; ++a) {
      require(j[k][a].size() == n, "ShapeMismatch", "block matrix size");
      for (std::size_t b = 0; b < n; ++b) e[shape->index(k, a, b)] = complex_from_json<R>(j[k][a][b]);
    }
  }
  return e;
}

template <Field R>
json element_to_blocks(const Element<R>& e) {
  const auto& sh = e.shape();
  json out = json::array();
  for (std::size_t k = 0; k < sh.blocks(); ++k) {
    json m = json::array();
    for (std::size_t a = 0; a < sh.size(k); ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < sh.size(k); ++b) row.push_back(complex_to_json(e.at(k, a, b)));
      m.push_back(row);
    }
    out.push_back(m);
  }
  return out;
}

template <Field R>
Mat<Cx<R>> complex_matrix(const json& j, std::size_t rows, std::size_t cols, const char* what) {
  require(j.is_array() && j.size() == rows, "ShapeMismatch", std::string(what) + " has the wrong number of rows");
  Mat<Cx<R>> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, "ShapeMismatch", std::string(what) + " has the wrong number of columns");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json<R>(j[i][k]);
  }
  return m;
}

}  // namespace detail

/// Change of basis for coordinate vectors: columns of the result are basis elements in matrix units.
template <Field R>
struct BasisChange {
  Mat<Cx<R>> to_units;    // B
  Mat<Cx<R>> from_units;  // B^{-1}
  bool identity = true;
};

template <Field R>
BasisChange<R> basis_from_json(const std::shared_ptr<const BlockShape>& shape, const json& j, const Tolerance& tol) {
  const std::size_t d = shape->dim();
  BasisChange<R> bc{Mat<Cx<R>>::identity(d), Mat<Cx<R>>::identity(d), true};
  if (j.is_null()) return bc;
  require(j.is_array() && j.size() == d, "ShapeMismatch", "basis needs dim elements");
  for (std::size_t b = 0; b < d; ++b) {
    auto e = detail::element_from_blocks<R>(shape, j[b]);
    for (std::size_t a = 0; a < d; ++a) bc.to_units(a, b) = e[a];
  }
  auto inv = inverse(bc.to_units, tol);
  require(inv.has_value(), "ShapeMismatch", "basis elements are linearly dependent");
  bc.from_units = *inv;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (!(bc.to_units(a, b) == Cx<R>(a == b ? 1 : 0))) bc.identity = false;
  return bc;
}

template <Field R>
struct LoadedGroup {
  QuantumGroup<R> qg;
  BasisChange<R> basis;
};

/// Structure maps given over the file's basis are rewritten over matrix units.
template <Field R>
LoadedGroup<R> quantum_group_from_json(const json& j, const Tolerance& tol = {}) {
  auto blocks = j.at("blocks").get<std::vector<std::size_t>>();
  auto g = QuantumGroup<R>::make(blocks, j.value("name", std::string()));
  const std::size_t d = g.dim();
  auto bc = basis_from_json<R>(g.shape, j.contains("basis") ? j["basis"] : json(), tol);
  auto delta = detail::complex_matrix<R>(j.at("delta"), d * d, d, "delta");
  require(j.at("epsilon").is_array() && j["epsilon"].size() == d, "ShapeMismatch", "epsilon needs dim entries");
  std::vector<Cx<R>> eps;
  for (const auto& x : j["epsilon"]) eps.push_back(complex_from_json<R>(x));
  auto kappa = detail::complex_matrix<R>(j.at("kappa"), d, d, "kappa");
  if (!bc.identity) {
    // Delta_units = (B (x) B) Delta B^{-1}, eps_units = eps B^{-1}, kappa_units = B kappa B^{-1}
    Mat<Cx<R>> d1 = delta * bc.from_units;
    Mat<Cx<R>> d2(d * d, d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t col = 0; col < d; ++col) {
          Cx<R> s;
          for (std::size_t x = 0; x < d; ++x) {
            if (bc.to_units(a, x).exactly_zero()) continue;
            for (std::size_t y = 0; y < d; ++y)
              if (!bc.to_units(c, y).exactly_zero()) s += bc.to_units(a, x) * bc.to_units(c, y) * d1(x * d + y, col);
          }
          d2(a * d + c, col) = s;
        }
    delta = std::move(d2);
    std::vector<Cx<R>> e2(d);
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t x = 0; x < d; ++x) e2[b] += eps[x] * bc.from_units(x, b);
    eps = std::move(e2);
    kappa = bc.to_units * kappa * bc.from_units;
  }
  for (std::size_t col = 0; col < d; ++col) {
    for (std::size_t row = 0; row < d * d; ++row)
      if (!delta(row, col).exactly_zero()) g.delta[col].emplace_back(row, delta(row, col));
    for (std::size_t row = 0; row < d; ++row)
      if (!kappa(row, col).exactly_zero()) g.kappa[col].emplace_back(row, kappa(row, col));
  }
  g.epsilon = std::move(eps);
  return {std::move(g), std::move(bc)};
}

/// Emitted over matrix units, so no basis is written.
template <Field R>
json quantum_group_to_json(const QuantumGroup<R>& g) {
  const std::size_t d = g.dim();
  json j;
  if (!g.name.empty()) j["name"] = g.name;
  j["blocks"] = g.shape->sizes();
  const json zero = complex_to_json(Cx<R>());
  json delta = json::array();
  for (std::size_t row = 0; row < d * d; ++row) delta.push_back(json::array());
  for (std::size_t row = 0; row < d * d; ++row)
    for (std::size_t col = 0; col < d; ++col) delta[row].push_back(zero);
  for (std::size_t col = 0; col < d; ++col)
    for (const auto& [row, c] : g.delta[col]) delta[row][col] = complex_to_json(c);
  j["delta"] = std::move(delta);
  json eps = json::array();
  for (const auto& e : g.epsilon) eps.push_back(complex_to_json(e));
  j["epsilon"] = std::move(eps);
  json kappa = json::array();
  for (std::size_t row = 0; row < d; ++row) kappa.push_back(json::array());
  for (std::size_t row = 0; row < d; ++row)
    for (std::size_t col = 0; col < d; ++col) kappa[row].push_back(zero);
  for (std::size_t col = 0; col < d; ++col)
    for (const auto& [row, c] : g.kappa[col]) kappa[row][col] = complex_to_json(c);
  j["kappa"] = std::move(kappa);
  return j;
}

/// Coaction file. "group" and "space" are paths relative to `base` or inline objects.
template <Field R>
CoAction<R> coaction_from_json(const json& j, const std::filesystem::path& base = {}, const Tolerance& tol = {}) {
  auto load = [&](const char* key) {
    const json& v = j.at(key);
    if (v.is_string()) return read_json_file(base / v.get<std::string>());
    return v;
  };
  auto lg = quantum_group_from_json<R>(load("group"), tol);
  auto space = metric_from_json<R>(load("space"), tol);
  auto g = std::make_shared<const QuantumGroup<R>>(std::move(lg.qg));
  const std::size_t n = space.n, d = g->dim();
  CoAction<R> act{g, space, {}, j.value("name", std::string())};
  const json& u = j.at("u");
  require(u.is_array() && u.size() == n, "ShapeMismatch", "u must be n x n");
  act.u.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    require(u[i].is_array() && u[i].size() == n, "ShapeMismatch", "u must be n x n");
    for (std::size_t k = 0; k < n; ++k) {
      require(u[i][k].is_array() && u[i][k].size() == d, "ShapeMismatch", "u entries are dim-length coefficient vectors");
      Element<R> e(g->shape);
      for (std::size_t b = 0; b < d; ++b) {
        Cx<R> c = complex_from_json<R>(u[i][k][b]);
        if (c.exactly_zero()) continue;
        for (std::size_t a = 0; a < d; ++a)
          if (!lg.basis.to_units(a, b).exactly_zero()) e[a] += lg.basis.to_units(a, b) * c;
      }
      act.u[i].push_back(std::move(e));
    }
  }
  return act;
}

template <Field R>
CoAction<R> load_coaction(const std::filesystem::path& path, const Tolerance& tol = {}) {
  return coaction_from_json<R>(read_json_file(path), path.parent_path(), tol);
}

/// Coaction with the group and space written inline.
template <Field R>
json coaction_to_json(const CoAction<R>& act) {
  json j;
  if (!act.name.empty()) j["name"] = act.name;
  j["group"] = quantum_group_to_json(act.qg());
  j["space"] = metric_to_json(act.space);
  json u = json::array();
  for (const auto& row : act.u) {
    json r = json::array();
    for (const auto& e : row) {
      json v = json::array();
      for (const auto& z : e.data()) v.push_back(complex_to_json(z));
      r.push_back(v);
    }
    u.push_back(r);
  }
  j["u"] = std::move(u);
  return j;
}

/// State file: {"densities": [block matrices]} or {"values": [phi(E_alpha)]}.
template <Field R>
Functional<R> state_from_json(const std::shared_ptr<const BlockShape>& shape, const json& j, const Tolerance& tol = {}) {
  Functional<R> f(shape);
  if (j.contains("densities")) {
    std::vector<std::vector<std::vector<Cx<R>>>> rho;
    for (const auto& blk : j["densities"]) {
      std::vector<std::vector<Cx<R>>> m;
      for (const auto& row : blk) {
        std::vector<Cx<R>> r;
        for (const auto& z : row) r.push_back(complex_from_json<R>(z));
        m.push_back(std::move(r));
      }
      rho.push_back(std::move(m));
    }
    f = Functional<R>::from_densities(shape, rho);
  } else {
    const json& v = j.at("values");
    require(v.size() == shape->dim(), "ShapeMismatch", "one value per matrix unit");
    for (std::size_t a = 0; a < shape->dim(); ++a) f[a] = complex_from_json<R>(v[a]);
  }
  require(is_state(f, tol), "BadVector", "functional is not a state");
  return f;
}

template <Field R>
json state_to_json(const Functional<R>& f) {
  json dens = json::array();
  for (const auto& blk : f.densities()) {
    json m = json::array();
    for (const auto& row : blk) {
      json r = json::array();
      for (const auto& z : row) r.push_back(complex_to_json(z));
      m.push_back(r);
    }
    dens.push_back(m);
  }
  return json{{"densities", dens}};
}

// ---------------------------------------------------------------------------------------------
// Reports

inline json p_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

template <Field R>
json verdict_to_json(const IsometryVerdict<R>& v) {
  json j;
  j["condition"] = v.label();
  j["p"] = p_to_json(v.p);
  j["universal"] = v.universal;
  j["holds"] = v.holds;
  j["checked"] = v.checked;
  j["margin"] = v.margin;
  if (v.witness) {
    const auto& w = *v.witness;
    json wj;
    wj["pair"] = {w.x, w.y};
    wj["violation"] = w.violation;
    if (w.subset) wj["subset"] = pointset_to_json(*w.subset);
    if (!w.f.empty()) wj["f"] = scalars_to_json(w.f);
    if (!w.g.empty()) wj["g"] = scalars_to_json(w.g);
    if (w.state) wj["state"] = state_to_json(*w.state);
    j["witness"] = std::move(wj);
  }
  return j;
}

inline json axioms_to_json(const std::vector<AxiomResult>& axioms) {
  json j = json::object();
  for (const auto& a : axioms) j[a.name] = a.max_violation;
  return j;
}

inline json ideal_to_json(const BlockIdeal& i) {
  return i.blocks();
}

}  // namespace qiso
