#pragma once

// Systematic-scan Gibbs machinery over one tier of a parameterized graph.
// A TierPlan precomputes, per site, the main effect and (coefficient, column)
// terms of the conditional logit, so a sweep is a flat loop. State vectors
// are indexed like dataset columns (canonical variable order).

#include <cstdint>
#include <vector>

#include "netcg/graph.hpp"
#include "netcg/logistic.hpp"
#include "netcg/model.hpp"
#include "netcg/rng.hpp"

namespace netcg {

struct SitePlan {
  int col = 0;
  double main = 0.0;
  std::vector<std::pair<double, int>> terms;  // (coefficient, state column)
};

struct TierPlan {
  Tier tier = Tier::L;
  std::vector<SitePlan> sites;  // canonical site order
};

inline int state_col(const TieredChainGraph& g, const VariableId& v) { return g.var_index(v); }

inline TierPlan make_tier_plan(const TieredChainGraph& g, const ModelParams& params, Tier tier) {
  TierPlan plan;
  plan.tier = tier;
  for (const auto& v : g.all_variables()) {
    if (v.tier != tier) continue;
    SitePlan sp;
    sp.col = state_col(g, v);
    sp.main = params.main_of(v);
    for (const auto& u : g.neighbors(v))
      sp.terms.push_back({params.pairwise_of(make_edge(u, v, EdgeKind::undirected)),
                          state_col(g, u)});
    for (const auto& u : g.parents(v))
      sp.terms.push_back({params.pairwise_of(make_edge(u, v, EdgeKind::directed)),
                          state_col(g, u)});
    plan.sites.push_back(std::move(sp));
  }
  return plan;
}

inline void gibbs_sweep(const TierPlan& plan, std::vector<uint8_t>& state, SplitRng& rng) {
  for (const auto& sp : plan.sites) {
    double z = sp.main;
    for (const auto& [w, c] : sp.terms) z += w * state[c];
    state[sp.col] = rng.bernoulli(expit(z)) ? 1 : 0;
  }
}

inline void init_tier_uniform(const TierPlan& plan, std::vector<uint8_t>& state, SplitRng& rng) {
  for (const auto& sp : plan.sites) state[sp.col] = rng.bernoulli(0.5) ? 1 : 0;
}

}  // namespace netcg
