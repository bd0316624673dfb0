#pragma once

// Binary pairwise conditional-MRF parameterization of a tiered chain graph:
// every variable gets a main effect, every edge one interaction, and each
// variable's conditional is expit(main + sum of boundary interactions).
//
// Two parameter regimes:
//  * fitting (fit_pseudolikelihood): joint maximization with undirected-edge
//    symmetry (and homogeneous tying when requested), producing the
//    coherent Gibbs factors estimation needs;
//  * scoring (pbic / local_score_diff): per-vertex score components, each
//    the maximized conditional log-likelihood of one variable given its
//    boundary. Components depend only on (vertex, boundary), which is what
//    makes the local-set score update exact and cacheable. The PBIC penalty
//    still counts each edge parameter once.
// Under homogeneous sharing, components pool by tier and a structural edit
// re-scores the affected tier(s) in full.

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "netcg/dataset.hpp"
#include "netcg/graph.hpp"
#include "netcg/logistic.hpp"

namespace netcg {

enum class Sharing { none, homogeneous };

inline const char* sharing_name(Sharing s) {
  return s == Sharing::none ? "none" : "homogeneous";
}

inline Sharing sharing_from_name(const std::string& s) {
  if (s == "none") return Sharing::none;
  if (s == "homogeneous") return Sharing::homogeneous;
  throw InputError("unknown sharing '" + s + "' (expected none|homogeneous)");
}

struct ModelParams {
  Sharing sharing = Sharing::none;
  std::map<VariableId, double> main;
  std::map<Edge, double> pairwise;

  double main_of(const VariableId& v) const {
    auto it = main.find(v);
    if (it == main.end()) throw Error("missing main-effect parameter for " + v.name());
    return it->second;
  }

  double pairwise_of(const Edge& e) const {
    auto it = pairwise.find(e.canonical());
    if (it == pairwise.end()) throw Error("missing pairwise parameter for " + e.name());
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Conditionals and pseudolikelihood at given parameters.

inline double conditional_logit(const ModelParams& params, const TieredChainGraph& g,
                                const VariableId& v, const std::map<VariableId, int>& assign) {
  double z = params.main_of(v);
  for (const auto& u : g.neighbors(v)) {
    auto it = assign.find(u);
    if (it == assign.end()) throw Error("assignment missing boundary value for " + u.name());
    z += params.pairwise_of(make_edge(u, v, EdgeKind::undirected)) * it->second;
  }
  for (const auto& u : g.parents(v)) {
    auto it = assign.find(u);
    if (it == assign.end()) throw Error("assignment missing boundary value for " + u.name());
    z += params.pairwise_of(make_edge(u, v, EdgeKind::directed)) * it->second;
  }
  return z;
}

inline double conditional_prob(const ModelParams& params, const TieredChainGraph& g,
                               const VariableId& v, const std::map<VariableId, int>& assign) {
  return expit(conditional_logit(params, g, v, assign));
}

inline double log_pseudolikelihood(const BlockDataset& data, const TieredChainGraph& g,
                                   const ModelParams& params) {
  data.require_match(g);
  double total = 0.0;
  for (const auto& v : g.all_variables()) {
    double main = params.main_of(v);
    std::vector<std::pair<int, double>> feats;  // (column, coefficient)
    for (const auto& u : g.neighbors(v))
      feats.push_back({data.col_of(u), params.pairwise_of(make_edge(u, v, EdgeKind::undirected))});
    for (const auto& u : g.parents(v))
      feats.push_back({data.col_of(u), params.pairwise_of(make_edge(u, v, EdgeKind::directed))});
    int vc = data.col_of(v);
    for (int b = 0; b < data.n(); ++b) {
      double z = main;
      for (const auto& [c, w] : feats) z += w * data.at(b, c);
      total += data.at(b, vc) ? log_expit(z) : log_expit(-z);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Model dimension.

inline int param_count(const TieredChainGraph& g, Sharing sharing) {
  if (sharing == Sharing::none)
    return g.var_count() + static_cast<int>(g.all_edges().size());
  return (g.p() + 2) + static_cast<int>(g.unit_template().size()) +
         static_cast<int>(prototypes(g).size());
}

// ---------------------------------------------------------------------------
// Local set (the vertices whose score components a single-edge change touches).

struct LocalSet {
  std::vector<VariableId> vertices;
  std::vector<VariableId> b_loc;
};

inline LocalSet local_set(const TieredChainGraph& g, const VariableId& vi, const VariableId& vj,
                          EdgeKind kind) {
  if (kind == EdgeKind::undirected) {
    if (vi.tier != vj.tier)
      throw Error("illegal edge type: cross-tier undirected " + vi.name() + " -- " + vj.name());
  } else if (static_cast<int>(vi.tier) >= static_cast<int>(vj.tier)) {
    throw Error("illegal edge type: directed " + vi.name() + " -> " + vj.name() +
                " violates causal ordering");
  }
  Edge e = make_edge(vi, vj, kind);
  const bool present =
      e.cross() ? g.has_cross_edge(e)
                : [&] {
                    auto inst = g.unit_edge_instances();
                    return std::binary_search(inst.begin(), inst.end(), e);
                  }();
  TieredChainGraph host = g;
  if (!present) {
    if (!e.cross())
      throw Error("unit-level edge " + e.name() + " absent from the template");
    host = g.with_cross_edge(e);
  }
  auto b_loc = block_of(host, vj);
  auto aug = augmented_block_graph(host, b_loc);
  auto pa = parents_of_set(host, b_loc);
  std::set<VariableId> pa_set(pa.begin(), pa.end());
  std::set<VariableId> verts;
  for (const auto& clique : maximal_cliques(aug)) {
    bool has_i = std::binary_search(clique.begin(), clique.end(), vi);
    bool has_j = std::binary_search(clique.begin(), clique.end(), vj);
    if (!has_i || !has_j) continue;
    bool subset_of_pa = true;
    for (const auto& c : clique)
      if (!pa_set.count(c)) {
        subset_of_pa = false;
        break;
      }
    if (subset_of_pa) continue;
    verts.insert(clique.begin(), clique.end());
  }
  LocalSet loc;
  loc.vertices.assign(verts.begin(), verts.end());
  loc.b_loc = b_loc;
  return loc;
}

// ---------------------------------------------------------------------------
// Scorer: PBIC with cached score components.

class Scorer {
 public:
  Scorer(const BlockDataset& data, Sharing sharing, double ridge = 1e-4)
      : data_(&data), sharing_(sharing), ridge_(ridge) {}

  Sharing sharing() const { return sharing_; }
  const BlockDataset& data() const { return *data_; }

  double pbic(const TieredChainGraph& g) const {
    data_->require_match(g);
    double fit = 0.0;
    if (sharing_ == Sharing::none) {
      for (const auto& v : g.all_variables()) fit += vertex_component(g, v);
    } else {
      for (Tier t : {Tier::L, Tier::A, Tier::Y}) fit += tier_component(g, t);
    }
    return 2.0 * fit - param_count(g, sharing_) * std::log(double(data_->n()));
  }

  // PBIC(g without e) - PBIC(g), touching only the components the edit can
  // change: loc(e) ∩ B_loc under sharing=none, the owning tier(s) otherwise.
  double local_score_diff(const TieredChainGraph& g, const Edge& edge) const {
    Edge e = edge.canonical();
    if (!e.cross())
      throw Error("unit-level edges are immutable; cannot delete " + e.name());
    if (!g.has_cross_edge(e)) throw Error("edge not present: " + e.name());
    TieredChainGraph g2 = g.without_cross_edge(e);
    double logn = std::log(double(data_->n()));
    if (sharing_ == Sharing::none) {
      auto loc = local_set(g, e.tail, e.head, e.kind);
      std::set<VariableId> bset(loc.b_loc.begin(), loc.b_loc.end());
      double diff = 0.0;
      for (const auto& v : loc.vertices) {
        if (!bset.count(v)) continue;
        diff += 2.0 * (vertex_component(g2, v) - vertex_component(g, v));
      }
      return diff + logn;  // one fewer edge parameter
    }
    Tier t = owning_tier(e);
    double diff = 2.0 * (tier_component(g2, t) - tier_component(g, t));
    diff += (param_count(g, sharing_) - param_count(g2, sharing_)) * logn;
    return diff;
  }

  // Maximized conditional log-likelihood of v given its boundary in g
  // (per-conditional parameters). Cached by (vertex, boundary).
  double vertex_component(const TieredChainGraph& g, const VariableId& v) const {
    auto bd = g.boundary(v);
    uint64_t sig = 0x9e3779b97f4a7c15ULL;
    for (const auto& u : bd) sig = mix(sig, uint64_t(g.var_index(u)) + 1);
    std::pair<int, uint64_t> key{g.var_index(v), sig};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = vertex_cache_.find(key);
      if (it != vertex_cache_.end()) return it->second;
    }
    double value = fit_vertex(g, v, bd).loglik;
    std::lock_guard<std::mutex> lock(mu_);
    return vertex_cache_.emplace(key, value).first->second;
  }

  // Pooled (homogeneously tied) conditional log-likelihood of one tier.
  double tier_component(const TieredChainGraph& g, Tier t) const {
    uint64_t sig = mix(0x2545f4914f6cdd1dULL, uint64_t(t));
    sig = mix(sig, uint64_t(g.m()) << 16 | uint64_t(g.p()));
    for (const auto& [a, b] : g.unit_template()) {
      Tier own = a.tier == b.tier ? a.tier : b.tier;
      if (own != t) continue;
      sig = mix(sig, tv_code(a));
      sig = mix(sig, tv_code(b));
    }
    for (const auto& e : g.cross_edges()) {
      if (owning_tier(e) != t) continue;
      sig = mix(sig, uint64_t(g.var_index(e.tail)) * 3 + uint64_t(e.kind == EdgeKind::directed));
      sig = mix(sig, uint64_t(g.var_index(e.head)) + 1);
    }
    std::pair<int, uint64_t> key{int(t), sig};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = tier_cache_.find(key);
      if (it != tier_cache_.end()) return it->second;
    }
    double value = fit_tier(g, t).loglik;
    std::lock_guard<std::mutex> lock(mu_);
    return tier_cache_.emplace(key, value).first->second;
  }

  // --- fitting paths (shared with fit_pseudolikelihood) ---

  LogisticFitResult fit_vertex(const TieredChainGraph& g, const VariableId& v,
                               const std::vector<VariableId>& bd) const {
    LogisticProblem prob;
    prob.ridge = ridge_;
    prob.n_params = 1 + int(bd.size());
    const int n = data_->n();
    prob.y.resize(n);
    prob.rows.resize(n);
    int vc = data_->col_of(v);
    std::vector<int> cols;
    cols.reserve(bd.size());
    for (const auto& u : bd) cols.push_back(data_->col_of(u));
    for (int b = 0; b < n; ++b) {
      prob.y[b] = data_->at(b, vc);
      auto& row = prob.rows[b];
      row.reserve(1 + cols.size());
      row.push_back({0, 1.0});
      for (size_t i = 0; i < cols.size(); ++i) {
        uint8_t x = data_->at(b, cols[i]);
        if (x) row.push_back({int(i) + 1, 1.0});
      }
    }
    return logistic_fit(prob);
  }

  struct TierFit {
    double loglik = 0.0;
    std::vector<double> theta;
    std::map<TemplateVar, int> main_ids;
    std::map<UnitTemplateEdge, int> unit_ids;
    std::map<EdgePrototype, int> proto_ids;
  };

  TierFit fit_tier(const TieredChainGraph& g, Tier t) const {
    TierFit tf;
    int next = 0;
    if (t == Tier::L)
      for (int k = 1; k <= g.p(); ++k) tf.main_ids[{Tier::L, k}] = next++;
    else
      tf.main_ids[{t, 0}] = next++;
    for (const auto& te : g.unit_template()) {
      Tier own = te.first.tier == te.second.tier ? te.first.tier : te.second.tier;
      if (own == t) tf.unit_ids.emplace(te, next++);
    }
    for (const auto& proto : prototypes(g))
      if (owning_tier(proto) == t) tf.proto_ids.emplace(proto, next++);

    // one feature plan per site: (param id, data column) with implicit +1
    struct SitePlan {
      int ycol;
      int main_id;
      std::vector<std::pair<int, int>> terms;
    };
    std::vector<SitePlan> plans;
    for (const auto& v : g.all_variables()) {
      if (v.tier != t) continue;
      SitePlan sp;
      sp.ycol = data_->col_of(v);
      sp.main_id = tf.main_ids.at(v.template_var());
      auto classify = [&](const VariableId& u, EdgeKind kind) {
        if (u.unit == v.unit) {
          UnitTemplateEdge te{u.template_var(), v.template_var()};
          if (kind == EdgeKind::undirected && te.second < te.first) std::swap(te.first, te.second);
          sp.terms.push_back({tf.unit_ids.at(te), data_->col_of(u)});
        } else {
          EdgePrototype proto = prototype_of(make_edge(u, v, kind));
          sp.terms.push_back({tf.proto_ids.at(proto), data_->col_of(u)});
        }
      };
      for (const auto& u : g.neighbors(v)) classify(u, EdgeKind::undirected);
      for (const auto& u : g.parents(v)) classify(u, EdgeKind::directed);
      plans.push_back(std::move(sp));
    }

    // collapse identical (y, feature-vector) rows; deterministic order
    std::map<std::vector<int>, double> counts;
    std::vector<int> pattern;
    std::vector<int> acc(next);
    for (const auto& sp : plans) {
      for (int b = 0; b < data_->n(); ++b) {
        std::fill(acc.begin(), acc.end(), 0);
        acc[sp.main_id] = 1;
        for (const auto& [pid, col] : sp.terms) acc[pid] += data_->at(b, col);
        pattern.assign(1, int(data_->at(b, sp.ycol)));
        pattern.insert(pattern.end(), acc.begin(), acc.end());
        counts[pattern] += 1.0;
      }
    }
    LogisticProblem prob;
    prob.ridge = ridge_;
    prob.n_params = next;
    for (const auto& [pat, w] : counts) {
      prob.y.push_back(uint8_t(pat[0]));
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < next; ++j)
        if (pat[j + 1] != 0) row.push_back({j, double(pat[j + 1])});
      prob.rows.push_back(std::move(row));
      prob.weights.push_back(w);
    }
    auto res = logistic_fit(prob);
    tf.loglik = res.loglik;
    tf.theta = std::move(res.theta);
    return tf;
  }

 private:
  static uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h * 0xff51afd7ed558ccdULL;
  }
  static uint64_t tv_code(const TemplateVar& v) {
    return (uint64_t(v.tier) << 32) | uint64_t(uint32_t(v.cov));
  }

  const BlockDataset* data_;
  Sharing sharing_;
  double ridge_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, uint64_t>, double> vertex_cache_;
  mutable std::map<std::pair<int, uint64_t>, double> tier_cache_;
};

inline double pbic(const BlockDataset& data, const TieredChainGraph& g, Sharing sharing) {
  return Scorer(data, sharing).pbic(g);
}

inline double local_score_diff(const BlockDataset& data, const TieredChainGraph& g,
                               const Edge& edge, Sharing sharing) {
  return Scorer(data, sharing).local_score_diff(g, edge);
}

// ---------------------------------------------------------------------------
// Joint pseudolikelihood fit (symmetric undirected parameters; homogeneous
// tying on request). The Gibbs factors for estimation come from here.

inline ModelParams fit_pseudolikelihood(const BlockDataset& data, const TieredChainGraph& g,
                                        Sharing sharing, double ridge = 1e-4) {
  data.require_match(g);
  ModelParams params;
  params.sharing = sharing;

  if (sharing == Sharing::homogeneous) {
    Scorer scorer(data, sharing, ridge);
    for (Tier t : {Tier::L, Tier::A, Tier::Y}) {
      auto tf = scorer.fit_tier(g, t);
      for (const auto& v : g.all_variables())
        if (v.tier == t) params.main[v] = tf.theta[tf.main_ids.at(v.template_var())];
      for (int u = 1; u <= g.m(); ++u) {
        for (const auto& [te, id] : tf.unit_ids) {
          Edge e = make_edge({te.first.tier, u, te.first.cov}, {te.second.tier, u, te.second.cov},
                             te.first.tier == te.second.tier ? EdgeKind::undirected
                                                             : EdgeKind::directed);
          params.pairwise[e] = tf.theta[id];
        }
      }
      for (const auto& e : g.cross_edges())
        if (owning_tier(e) == t) params.pairwise[e] = tf.theta[tf.proto_ids.at(prototype_of(e))];
    }
    return params;
  }

  // sharing = none: the objective decomposes over blocks; fit each block's
  // conditional MRF jointly over its mains, within-block undirected edges
  // and incoming directed edges.
  for (const auto& block : blocks(g)) {
    std::map<VariableId, int> main_ids;
    std::map<Edge, int> edge_ids;
    int next = 0;
    for (const auto& v : block) main_ids[v] = next++;
    for (const auto& v : block) {
      for (const auto& u : g.neighbors(v)) edge_ids.emplace(make_edge(u, v, EdgeKind::undirected), 0);
      for (const auto& u : g.parents(v)) edge_ids.emplace(make_edge(u, v, EdgeKind::directed), 0);
    }
    for (auto& [e, id] : edge_ids) id = next++;

    LogisticProblem prob;
    prob.ridge = ridge;
    prob.n_params = next;
    const int n = data.n();
    prob.y.reserve(block.size() * n);
    prob.rows.reserve(block.size() * n);
    for (const auto& v : block) {
      int vc = data.col_of(v);
      std::vector<std::pair<int, int>> feats;  // (param id, data column)
      for (const auto& u : g.neighbors(v))
        feats.push_back({edge_ids.at(make_edge(u, v, EdgeKind::undirected)), data.col_of(u)});
      for (const auto& u : g.parents(v))
        feats.push_back({edge_ids.at(make_edge(u, v, EdgeKind::directed)), data.col_of(u)});
      int mid = main_ids.at(v);
      for (int b = 0; b < n; ++b) {
        prob.y.push_back(data.at(b, vc));
        std::vector<std::pair<int, double>> row;
        row.reserve(1 + feats.size());
        row.push_back({mid, 1.0});
        for (const auto& [pid, col] : feats)
          if (data.at(b, col)) row.push_back({pid, 1.0});
        prob.rows.push_back(std::move(row));
      }
    }
    auto res = logistic_fit(prob);
    for (const auto& [v, id] : main_ids) params.main[v] = res.theta[id];
    for (const auto& [e, id] : edge_ids) params.pairwise[e] = res.theta[id];
  }
  return params;
}

}  // namespace netcg
