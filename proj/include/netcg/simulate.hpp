#pragma once

// Ground-truth construction and data generation: k-regular circulant
// networks carrying {A--A, Y--Y, A->Y} ties, block data drawn tier by tier
// with a per-block Gibbs chain, plus the misspecified baselines (empty
// template-only graphs and networks with shuffled adjacencies).

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "netcg/dataset.hpp"
#include "netcg/graph.hpp"
#include "netcg/model.hpp"
#include "netcg/parallel.hpp"
#include "netcg/rng.hpp"
#include "netcg/sampler.hpp"

namespace netcg {

// Generating-equation coefficients. nu4 scales the within-tier outcome
// interaction carried by the Y--Y ties of the generating networks. Defaults
// give moderate detectable dependence with a non-degenerate outcome rate and
// a natural treatment prevalence well below 0.7.
struct GenCoefficients {
  double tau1 = 0.5;    // L main effect
  double beta1 = -1.0;  // L_i -> A_i
  double beta2 = 0.3;   // A_i -- A_j
  double nu1 = -1.0;    // L_i -> Y_i
  double nu2 = 1.5;     // A_i -> Y_i
  double nu3 = 0.5;     // A_j -> Y_i across ties
  double nu4 = 0.4;     // Y_i -- Y_j

  void validate() const {
    for (double v : {tau1, beta1, beta2, nu1, nu2, nu3, nu4})
      if (!std::isfinite(v)) throw InputError("generating coefficients must be finite");
  }
};

struct SamplerConfig {
  int burn_in = 1000;
  int thin = 100;
  uint64_t seed = 0;
  int n = 1;

  void validate() const {
    if (burn_in < 0) throw InputError("burn_in must be >= 0");
    if (thin < 1) throw InputError("thin must be >= 1");
    if (n < 1) throw InputError("n must be >= 1");
  }
};

inline std::vector<EdgePrototype> truth_prototypes() {
  return {EdgePrototype{{Tier::A, 0}, {Tier::A, 0}, EdgeKind::undirected},
          EdgePrototype{{Tier::A, 0}, {Tier::Y, 0}, EdgeKind::directed},
          EdgePrototype{{Tier::Y, 0}, {Tier::Y, 0}, EdgeKind::undirected}};
}

// Circulant k-regular network: unit i adjacent to offsets 1..k/2 in both
// directions, plus the antipode m/2 when k is odd (m even).
inline std::vector<UnitPair> k_regular_network(int m, int k) {
  if (k < 0 || k >= m || (k * m) % 2 != 0)
    throw InputError("infeasible regularity: need 0 <= k < m and k*m even (got m=" +
                     std::to_string(m) + ", k=" + std::to_string(k) + ")");
  std::set<UnitPair> pairs;
  int half = k / 2;
  for (int i = 1; i <= m; ++i) {
    for (int o = 1; o <= half; ++o) {
      int j = (i - 1 + o) % m + 1;
      if (i != j) pairs.insert(make_pair_sorted(i, j));
    }
    if (k % 2 == 1) {
      int j = (i - 1 + m / 2) % m + 1;
      pairs.insert(make_pair_sorted(i, j));
    }
  }
  return {pairs.begin(), pairs.end()};
}

inline TieredChainGraph build_k_regular_truth(int m, int k, int p = 1) {
  return make_homogeneous_graph(m, p, k_regular_network(m, k), truth_prototypes());
}

inline TieredChainGraph empty_graph(int m, int p) { return empty_network_graph(m, p); }

// Maps generating coefficients onto the truth graph's parameterization.
inline ModelParams truth_params(const TieredChainGraph& g, const GenCoefficients& c) {
  c.validate();
  ModelParams params;
  params.sharing = Sharing::homogeneous;
  for (const auto& v : g.all_variables())
    params.main[v] = v.tier == Tier::L ? c.tau1 : 0.0;
  for (const auto& e : g.all_edges()) {
    double value = 0.0;
    Tier a = e.tail.tier, b = e.head.tier;
    if (!e.cross()) {
      if (a == Tier::L && b == Tier::A) value = c.beta1;
      else if (a == Tier::L && b == Tier::Y) value = c.nu1;
      else if (a == Tier::A && b == Tier::Y) value = c.nu2;
      else throw Error("no generating coefficient for unit edge " + e.name());
    } else {
      if (a == Tier::A && b == Tier::A) value = c.beta2;
      else if (a == Tier::A && b == Tier::Y) value = c.nu3;
      else if (a == Tier::Y && b == Tier::Y) value = c.nu4;
      else throw Error("no generating coefficient for cross edge " + e.name());
    }
    params.pairwise[e.canonical()] = value;
  }
  return params;
}

// Draws n iid blocks. Each block runs its own chain on a seed substream:
// L sampled directly (no within-tier ties in the truth family), then the A
// tier and the Y tier equilibrated by burn_in + thin systematic scans each.
inline BlockDataset gibbs_generate(const TieredChainGraph& truth, const GenCoefficients& coeffs,
                                   const SamplerConfig& config, int threads = 1) {
  config.validate();
  ModelParams params = truth_params(truth, coeffs);
  TierPlan lp = make_tier_plan(truth, params, Tier::L);
  TierPlan ap = make_tier_plan(truth, params, Tier::A);
  TierPlan yp = make_tier_plan(truth, params, Tier::Y);
  for (const auto& sp : lp.sites)
    if (!sp.terms.empty())
      throw Error("truth graphs must not carry L-tier ties; use the generic sampler instead");

  BlockDataset data(config.n, truth.m(), truth.p());
  SplitRng master = SplitRng(config.seed).child("gibbs-generate");
  const int sweeps = config.burn_in + config.thin;
  const int d = truth.var_count();

  parallel_for(size_t(config.n), threads, [&](size_t b) {
    SplitRng rng = master.child(uint64_t(b));
    std::vector<uint8_t> state(d, 0);
    for (const auto& sp : lp.sites) state[sp.col] = rng.bernoulli(expit(sp.main)) ? 1 : 0;
    init_tier_uniform(ap, state, rng);
    for (int s = 0; s < sweeps; ++s) gibbs_sweep(ap, state, rng);
    init_tier_uniform(yp, state, rng);
    for (int s = 0; s < sweeps; ++s) gibbs_sweep(yp, state, rng);
    for (int c = 0; c < d; ++c) data.at(int(b), c) = state[c];
  });
  return data;
}

// Rewires the network to a uniformly random one of the same size that
// differs from the truth, keeping the prototype set.
inline TieredChainGraph shuffle_network(const TieredChainGraph& truth, uint64_t seed) {
  auto true_net = truth.network();
  if (true_net.empty()) throw Error("shuffle_network requires a nonempty network");
  std::vector<UnitPair> all;
  for (int i = 1; i <= truth.m(); ++i)
    for (int j = i + 1; j <= truth.m(); ++j) all.push_back({i, j});
  size_t want = true_net.size();
  if (all.size() <= want)
    throw Error("no distinct network of size " + std::to_string(want) + " exists on m=" +
                std::to_string(truth.m()) + " units");
  std::set<UnitPair> truth_set(true_net.begin(), true_net.end());
  SplitRng rng = SplitRng(seed).child("shuffle-network");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<UnitPair> pool = all;
    for (size_t i = 0; i < want; ++i) {
      size_t j = i + size_t(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::set<UnitPair> picked(pool.begin(), pool.begin() + want);
    if (picked != truth_set)
      return make_homogeneous_graph(truth.m(), truth.p(),
                                    {picked.begin(), picked.end()}, prototypes(truth));
  }
  throw Error("failed to draw a network distinct from the truth");
}

}  // namespace netcg
