#pragma once

// Test-side oracles: independent brute-force implementations used to pin
// expected values. These deliberately avoid the library's scoring/caching
// machinery and recompute everything from edge lists.

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "netcg/netcg.hpp"

namespace oracles {

using namespace netcg;

// Maximal cliques by subset enumeration (vertex count <= ~16).
inline std::vector<std::vector<VariableId>> brute_force_cliques(const UndirectedGraph& g) {
  int n = g.size();
  std::vector<uint32_t> cliques;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool is_clique = true;
    for (int i = 0; i < n && is_clique; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int j = i + 1; j < n && is_clique; ++j)
        if ((mask >> j & 1) && !g.adjacent(i, j)) is_clique = false;
    }
    if (is_clique) cliques.push_back(mask);
  }
  std::vector<std::vector<VariableId>> out;
  for (uint32_t c : cliques) {
    bool maximal = true;
    for (uint32_t c2 : cliques)
      if (c2 != c && (c & c2) == c) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    std::vector<VariableId> clique;
    for (int i = 0; i < n; ++i)
      if (c >> i & 1) clique.push_back(g.vertices()[i]);
    out.push_back(clique);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// From-scratch PBIC: per-vertex maximized conditional log-likelihoods and
// the parameter count recomputed directly from the edge lists.
inline double oracle_pbic(const BlockDataset& data, const TieredChainGraph& g) {
  auto edges = g.all_edges();
  double fit = 0.0;
  for (const auto& v : g.all_variables()) {
    std::set<VariableId> bd;
    for (const auto& e : edges) {
      if (e.kind == EdgeKind::undirected) {
        if (e.tail == v) bd.insert(e.head);
        if (e.head == v) bd.insert(e.tail);
      } else if (e.head == v) {
        bd.insert(e.tail);
      }
    }
    LogisticProblem prob;
    prob.n_params = 1 + int(bd.size());
    prob.y.resize(data.n());
    prob.rows.resize(data.n());
    std::vector<int> cols;
    for (const auto& u : bd) cols.push_back(data.col_of(u));
    for (int b = 0; b < data.n(); ++b) {
      prob.y[b] = data.at(b, data.col_of(v));
      prob.rows[b].push_back({0, 1.0});
      for (size_t i = 0; i < cols.size(); ++i)
        prob.rows[b].push_back({int(i) + 1, double(data.at(b, cols[i]))});
    }
    fit += logistic_fit(prob).loglik;
  }
  int k = g.var_count() + int(edges.size());
  return 2.0 * fit - k * std::log(double(data.n()));
}

// Plain (slow) fixed-step gradient ascent on the joint symmetric
// pseudolikelihood (per-block average minus ridge, like the library's
// objective), for cross-checking fit_pseudolikelihood.
inline std::map<std::string, double> slow_joint_mple(const BlockDataset& data,
                                                     const TieredChainGraph& g,
                                                     double ridge = 1e-4) {
  std::vector<VariableId> vars = g.all_variables();
  std::vector<Edge> edges = g.all_edges();
  std::map<std::string, int> ids;
  for (const auto& v : vars) ids["m:" + v.name()] = int(ids.size());
  for (const auto& e : edges) ids["e:" + e.name()] = int(ids.size());
  int kparams = int(ids.size());
  std::vector<double> theta(kparams, 0.0);

  std::map<VariableId, double> row_weight;  // 1 / (n * |block(v)|)
  for (const auto& block : blocks(g))
    for (const auto& v : block) row_weight[v] = 1.0 / (double(data.n()) * double(block.size()));

  auto others_of = [&](const VariableId& v) {
    std::vector<std::pair<int, VariableId>> out;  // (edge param id, other endpoint)
    for (const auto& e : edges) {
      if (e.kind == EdgeKind::undirected && e.tail == v) out.push_back({ids.at("e:" + e.name()), e.head});
      else if (e.kind == EdgeKind::undirected && e.head == v) out.push_back({ids.at("e:" + e.name()), e.tail});
      else if (e.kind == EdgeKind::directed && e.head == v) out.push_back({ids.at("e:" + e.name()), e.tail});
    }
    return out;
  };

  for (int it = 0; it < 100000; ++it) {
    std::vector<double> grad(kparams, 0.0);
    for (const auto& v : vars) {
      auto terms = others_of(v);
      double w = row_weight.at(v);
      int mid = ids.at("m:" + v.name());
      for (int b = 0; b < data.n(); ++b) {
        double z = theta[mid];
        for (const auto& [eid, u] : terms) z += theta[eid] * data.at(b, data.col_of(u));
        double resid = (data.at(b, data.col_of(v)) - expit(z)) * w;
        grad[mid] += resid;
        for (const auto& [eid, u] : terms) grad[eid] += resid * data.at(b, data.col_of(u));
      }
    }
    double gmax = 0;
    for (int j = 0; j < kparams; ++j) {
      grad[j] -= 2.0 * ridge * theta[j];
      gmax = std::max(gmax, std::fabs(grad[j]));
    }
    if (gmax < 1e-9) break;
    for (int j = 0; j < kparams; ++j) theta[j] += 0.4 * grad[j];
  }

  std::map<std::string, double> out;
  for (const auto& [name, id] : ids) out[name] = theta[id];
  return out;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  double m = mean(xs);
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  return xs.size() > 1 ? std::sqrt(v / double(xs.size() - 1)) : 0.0;
}

inline BlockDataset random_dataset(int n, int m, int p, SplitRng& rng) {
  BlockDataset data(n, m, p);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < data.d(); ++c) data.at(b, c) = rng.bernoulli(0.5) ? 1 : 0;
  return data;
}

// Random tier-legal subgraph of the complete tiered graph.
inline TieredChainGraph random_graph(int m, int p, SplitRng& rng, double keep = 0.5) {
  TieredChainGraph complete = complete_tiered_graph(m, p);
  std::vector<Edge> cross;
  for (const auto& e : complete.cross_edges())
    if (rng.bernoulli(keep)) cross.push_back(e);
  return TieredChainGraph(m, p, default_unit_template(p), cross);
}

}  // namespace oracles
