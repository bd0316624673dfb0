#pragma once

// JSON readers/writers for the on-disk formats: graphs (explicit edge lists
// plus a homogeneous network/prototypes shorthand on input), fitted
// parameters, generator coefficients, effect estimates, and evaluation
// scenarios. Writers emit a fixed key order so artifacts are byte-stable.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcg/estimate.hpp"
#include "netcg/evaluate.hpp"
#include "netcg/graph.hpp"
#include "netcg/model.hpp"
#include "netcg/search.hpp"
#include "netcg/simulate.hpp"

namespace netcg {

using json = nlohmann::ordered_json;

inline json load_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path + " for writing");
  os << text;
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Graphs

inline json graph_to_json(const TieredChainGraph& g) {
  json j;
  j["m"] = g.m();
  j["p"] = g.p();
  json tmpl = json::array();
  for (const auto& [a, b] : g.unit_template()) tmpl.push_back({a.name(), b.name()});
  j["unit_edges"] = tmpl;
  json cross = json::array();
  for (const auto& e : g.cross_edges()) {
    json je;
    je["tail"] = {e.tail.template_var().name(), e.tail.unit};
    je["to"] = {e.head.template_var().name(), e.head.unit};
    je["kind"] = e.kind == EdgeKind::directed ? "directed" : "undirected";
    cross.push_back(je);
  }
  j["cross_edges"] = cross;
  return j;
}

namespace detail {

inline VariableId var_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer())
    throw InputError(where + ": endpoint must be [\"var\", unit]");
  TemplateVar tv = template_var_from_name(j[0].get<std::string>());
  return {tv.tier, j[1].get<int>(), tv.cov};
}

inline EdgeKind kind_from_string(const std::string& s, const std::string& where) {
  if (s == "directed") return EdgeKind::directed;
  if (s == "undirected") return EdgeKind::undirected;
  throw InputError(where + ": edge kind must be directed|undirected, got '" + s + "'");
}

}  // namespace detail

inline TieredChainGraph graph_from_json(const json& j, const std::string& origin = "graph") {
  if (!j.is_object()) throw InputError(origin + ": expected a JSON object");
  if (!j.contains("m") || !j.contains("p"))
    throw InputError(origin + ": missing required fields m, p");
  int m = j.at("m").get<int>();
  int p = j.at("p").get<int>();

  std::vector<UnitTemplateEdge> tmpl;
  if (j.contains("unit_edges")) {
    for (const auto& je : j.at("unit_edges")) {
      if (!je.is_array() || je.size() != 2)
        throw InputError(origin + ": unit_edges entries must be [\"a\",\"b\"]");
      tmpl.push_back({template_var_from_name(je[0].get<std::string>()),
                      template_var_from_name(je[1].get<std::string>())});
    }
  } else {
    tmpl = default_unit_template(p);
  }

  std::vector<Edge> cross;
  if (j.contains("network") || j.contains("prototypes")) {
    if (j.contains("cross_edges"))
      throw InputError(origin + ": give either cross_edges or the network/prototypes shorthand");
    std::vector<UnitPair> net;
    for (const auto& jp : j.value("network", json::array())) {
      if (!jp.is_array() || jp.size() != 2)
        throw InputError(origin + ": network entries must be [i, j]");
      int i = jp[0].get<int>(), jj = jp[1].get<int>();
      if (i == jj) throw InputError(origin + ": network pair connects a unit to itself");
      net.push_back(make_pair_sorted(i, jj));
    }
    std::vector<EdgePrototype> protos;
    for (const auto& jp : j.value("prototypes", json::array())) {
      if (!jp.is_array() || jp.size() != 3)
        throw InputError(origin + ": prototypes entries must be [tail, head, kind]");
      protos.push_back(EdgePrototype{template_var_from_name(jp[0].get<std::string>()),
                                     template_var_from_name(jp[1].get<std::string>()),
                                     detail::kind_from_string(jp[2].get<std::string>(), origin)}
                           .canonical());
    }
    for (const auto& pr : net)
      for (const auto& proto : protos)
        for (const auto& e : instantiate_prototype(proto, pr.i, pr.j)) cross.push_back(e);
  } else {
    for (const auto& je : j.value("cross_edges", json::array())) {
      Edge e;
      e.tail = detail::var_from_json(je.at("tail"), origin);
      e.head = detail::var_from_json(je.at("to"), origin);
      e.kind = detail::kind_from_string(je.value("kind", "directed"), origin);
      cross.push_back(e);
    }
  }

  TieredChainGraph g(m, p, std::move(tmpl), std::move(cross));
  auto v = validate_tiered_cg(g);
  if (!v.ok) {
    std::string msg = origin + ": invalid tiered chain graph:";
    for (const auto& viol : v.violations) msg += "\n  " + viol;
    throw InputError(msg);
  }
  return g;
}

inline TieredChainGraph read_graph_file(const std::string& path) {
  return graph_from_json(load_json_file(path), path);
}

inline void write_graph_file(const std::string& path, const TieredChainGraph& g) {
  write_json_file(path, graph_to_json(g));
}

// ---------------------------------------------------------------------------
// Model parameters

inline json params_to_json(const ModelParams& params) {
  json j;
  j["sharing"] = sharing_name(params.sharing);
  json main = json::object();
  for (const auto& [v, value] : params.main) main[v.name()] = value;
  j["main"] = main;
  json pw = json::object();
  for (const auto& [e, value] : params.pairwise) pw[e.name()] = value;
  j["pairwise"] = pw;
  return j;
}

namespace detail {

inline VariableId var_from_name(const std::string& s, const std::string& where) {
  auto pos = s.rfind('_');
  if (pos == std::string::npos) throw InputError(where + ": bad variable name '" + s + "'");
  TemplateVar tv = template_var_from_name(s.substr(0, pos));
  int unit = 0;
  try {
    unit = std::stoi(s.substr(pos + 1));
  } catch (const std::exception&) {
    throw InputError(where + ": bad unit index in '" + s + "'");
  }
  return {tv.tier, unit, tv.cov};
}

inline Edge edge_from_name(const std::string& s, const std::string& where) {
  auto arrow = s.find("->");
  auto dash = s.find("--");
  if (arrow != std::string::npos) {
    return make_edge(var_from_name(s.substr(0, arrow), where),
                     var_from_name(s.substr(arrow + 2), where), EdgeKind::directed);
  }
  if (dash != std::string::npos) {
    return make_edge(var_from_name(s.substr(0, dash), where),
                     var_from_name(s.substr(dash + 2), where), EdgeKind::undirected);
  }
  throw InputError(where + ": bad edge key '" + s + "'");
}

}  // namespace detail

inline ModelParams params_from_json(const json& j, const std::string& origin = "params") {
  ModelParams params;
  params.sharing = sharing_from_name(j.value("sharing", "none"));
  const json mains = j.value("main", json::object());
  for (const auto& [key, value] : mains.items())
    params.main[detail::var_from_name(key, origin)] = value.get<double>();
  const json pairwise = j.value("pairwise", json::object());
  for (const auto& [key, value] : pairwise.items())
    params.pairwise[detail::edge_from_name(key, origin)] = value.get<double>();
  return params;
}

// ---------------------------------------------------------------------------
// Generator coefficients

inline json coeffs_to_json(const GenCoefficients& c) {
  json j;
  j["tau1"] = c.tau1;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["nu1"] = c.nu1;
  j["nu2"] = c.nu2;
  j["nu3"] = c.nu3;
  j["nu4"] = c.nu4;
  return j;
}

inline GenCoefficients coeffs_from_json(const json& j) {
  GenCoefficients c;
  c.tau1 = j.value("tau1", c.tau1);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.nu1 = j.value("nu1", c.nu1);
  c.nu2 = j.value("nu2", c.nu2);
  c.nu3 = j.value("nu3", c.nu3);
  c.nu4 = j.value("nu4", c.nu4);
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Effect estimates

inline json effect_to_json(const EffectEstimate& est) {
  json j;
  j["paoe"] = est.paoe;
  j["per_policy_means"] = {est.mean_policy1, est.mean_policy2};
  j["T"] = est.T;
  json cfg;
  cfg["policy1"] = est.policy1.name();
  cfg["policy2"] = est.policy2.name();
  cfg["burn_in"] = est.config.burn_in;
  cfg["thin"] = est.config.thin;
  cfg["seed"] = est.config.seed;
  cfg["sharing"] = sharing_name(est.sharing);
  j["config"] = cfg;
  return j;
}

// ---------------------------------------------------------------------------
// Evaluation scenarios and reports

inline BootstrapScenario bootstrap_scenario_from_json(const json& j, const std::string& origin) {
  BootstrapScenario sc;
  sc.m = j.value("m", sc.m);
  sc.k = j.value("k", sc.k);
  sc.p = j.value("p", sc.p);
  sc.n = j.value("n", sc.n);
  if (j.contains("coeffs")) sc.coeffs = coeffs_from_json(j.at("coeffs"));
  sc.condition = j.value("condition", sc.condition);
  sc.fresh_data = j.value("fresh_data", sc.fresh_data);
  if (j.contains("policy1")) sc.policy1 = Policy::parse(j.at("policy1").get<std::string>());
  if (j.contains("policy2")) sc.policy2 = Policy::parse(j.at("policy2").get<std::string>());
  sc.estimator.T = j.value("T", sc.estimator.T);
  sc.estimator.burn_in = j.value("burn_in", sc.estimator.burn_in);
  sc.estimator.thin = j.value("thin", sc.estimator.thin);
  sc.gen_burn_in = j.value("gen_burn_in", sc.gen_burn_in);
  sc.gen_thin = j.value("gen_thin", sc.gen_thin);
  if (j.contains("sharing")) sc.sharing = sharing_from_name(j.at("sharing").get<std::string>());
  if (j.contains("truth_paoe")) sc.truth_paoe = j.at("truth_paoe").get<double>();
  sc.truth_mc_T = j.value("truth_mc_T", sc.truth_mc_T);
  (void)origin;
  return sc;
}

inline SweepSpec sweep_spec_from_json(const json& j) {
  SweepSpec spec;
  if (j.contains("m_list")) spec.m_list = j.at("m_list").get<std::vector<int>>();
  spec.k = j.value("k", spec.k);
  spec.p = j.value("p", spec.p);
  if (j.contains("n_list")) spec.n_list = j.at("n_list").get<std::vector<int>>();
  if (j.contains("modes")) spec.modes = j.at("modes").get<std::vector<std::string>>();
  spec.replicates = j.value("replicates", spec.replicates);
  if (j.contains("coeffs")) spec.coeffs = coeffs_from_json(j.at("coeffs"));
  spec.gen_burn_in = j.value("gen_burn_in", spec.gen_burn_in);
  spec.gen_thin = j.value("gen_thin", spec.gen_thin);
  return spec;
}

inline json bootstrap_report_to_json(const BootstrapReport& r) {
  json j;
  j["condition"] = r.condition;
  j["B"] = r.B;
  j["truth"] = r.truth;
  j["bias"] = r.bias;
  j["variance"] = r.variance;
  j["failed_replicates"] = r.failed_replicates;
  j["flagged"] = r.flagged;
  return j;
}

inline json sweep_cells_to_json(const std::vector<SweepCell>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    json j;
    j["m"] = c.m;
    j["k"] = c.k;
    j["n"] = c.n;
    j["mode"] = c.mode;
    j["replicates"] = c.replicates;
    j["precision_mean"] = c.precision_mean;
    j["precision_sd"] = c.precision_sd;
    j["recall_mean"] = c.recall_mean;
    j["recall_sd"] = c.recall_sd;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace netcg
