#pragma once

// Auto-g-computation of the population average overall effect: fit the Gibbs
// factors by pseudolikelihood, then sample tiers block-sequentially (L, then
// A from the policy, then Y) and contrast mean outcomes under two policies.
// Both policy arms consume the same substream, so equal policies give a
// difference of exactly zero and swapping policies flips the sign exactly.
//
// exact_paoe enumerates the chain-graph factorization outright and is the
// oracle the Monte Carlo path is tested against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "netcg/dataset.hpp"
#include "netcg/graph.hpp"
#include "netcg/model.hpp"
#include "netcg/rng.hpp"
#include "netcg/sampler.hpp"

namespace netcg {

struct Policy {
  enum class Kind { bernoulli, natural };
  Kind kind = Kind::natural;
  double alpha = 0.5;

  static Policy bernoulli(double a) {
    if (!(a > 0.0 && a < 1.0)) throw InputError("bernoulli policy needs alpha in (0,1)");
    return Policy{Kind::bernoulli, a};
  }
  static Policy natural() { return Policy{Kind::natural, 0.0}; }

  friend bool operator==(const Policy& a, const Policy& b) {
    return a.kind == b.kind && (a.kind == Kind::natural || a.alpha == b.alpha);
  }

  std::string name() const {
    if (kind == Kind::natural) return "natural";
    char buf[40];
    snprintf(buf, sizeof(buf), "bernoulli:%.17g", alpha);
    return buf;
  }

  static Policy parse(const std::string& s) {
    if (s == "natural") return natural();
    const std::string prefix = "bernoulli:";
    if (s.rfind(prefix, 0) == 0) {
      char* end = nullptr;
      double a = std::strtod(s.c_str() + prefix.size(), &end);
      if (end == nullptr || *end != '\0')
        throw InputError("bad policy '" + s + "'");
      return bernoulli(a);
    }
    throw InputError("bad policy '" + s + "' (expected natural or bernoulli:<alpha>)");
  }
};

struct EstimatorConfig {
  long T = 10000;
  int burn_in = 1000;
  int thin = 100;
  uint64_t seed = 0;

  void validate() const {
    if (T <= 0) throw InputError("T must be positive");
    if (burn_in < 0 || thin < 1) throw InputError("burn_in must be >= 0 and thin >= 1");
  }
};

struct EffectEstimate {
  double paoe = 0.0;
  double mean_policy1 = 0.0;
  double mean_policy2 = 0.0;
  long T = 0;
  Policy policy1, policy2;
  EstimatorConfig config;
  Sharing sharing = Sharing::none;
};

// Mean outcome per unit under one policy: persistent per-tier chains,
// advanced burn_in scans before the first retained draw and thin scans
// between draws; the treatment tier is refreshed from the policy at every
// retained draw. The stream depends only on (seed, policy), not arm order.
inline double policy_mean(const ModelParams& params, const TieredChainGraph& g,
                          const Policy& policy, const EstimatorConfig& cfg) {
  cfg.validate();
  TierPlan lp = make_tier_plan(g, params, Tier::L);
  TierPlan ap = make_tier_plan(g, params, Tier::A);
  TierPlan yp = make_tier_plan(g, params, Tier::Y);

  SplitRng rng = SplitRng(cfg.seed).child("auto-g-arm");
  const int d = g.var_count();
  std::vector<uint8_t> state(d, 0);
  SplitRng init_rng = rng.child("init");
  init_tier_uniform(lp, state, init_rng);
  init_tier_uniform(ap, state, init_rng);
  init_tier_uniform(yp, state, init_rng);

  double total = 0.0;
  const int mcount = g.m();
  for (long t = 0; t < cfg.T; ++t) {
    int scans = (t == 0) ? cfg.burn_in + cfg.thin : cfg.thin;
    for (int s = 0; s < scans; ++s) gibbs_sweep(lp, state, rng);
    if (policy.kind == Policy::Kind::bernoulli) {
      for (const auto& sp : ap.sites) state[sp.col] = rng.bernoulli(policy.alpha) ? 1 : 0;
    } else {
      for (int s = 0; s < scans; ++s) gibbs_sweep(ap, state, rng);
    }
    for (int s = 0; s < scans; ++s) gibbs_sweep(yp, state, rng);
    for (const auto& sp : yp.sites) total += state[sp.col];
  }
  return total / (double(mcount) * double(cfg.T));
}

inline EffectEstimate auto_g_paoe_with_params(const ModelParams& params,
                                              const TieredChainGraph& g, const Policy& pi1,
                                              const Policy& pi2, const EstimatorConfig& cfg) {
  EffectEstimate est;
  est.T = cfg.T;
  est.policy1 = pi1;
  est.policy2 = pi2;
  est.config = cfg;
  est.sharing = params.sharing;
  est.mean_policy1 = policy_mean(params, g, pi1, cfg);
  est.mean_policy2 = policy_mean(params, g, pi2, cfg);
  est.paoe = est.mean_policy1 - est.mean_policy2;
  return est;
}

inline EffectEstimate auto_g_paoe(const BlockDataset& data, const TieredChainGraph& g,
                                  const Policy& pi1, const Policy& pi2,
                                  const EstimatorConfig& cfg, Sharing sharing) {
  data.require_match(g);
  ModelParams params = fit_pseudolikelihood(data, g, sharing);
  return auto_g_paoe_with_params(params, g, pi1, pi2, cfg);
}

// One equilibrated draw of the treatment tier given covariate values, from
// the fitted conditional MRF ("naturally observed" assignment).
inline std::vector<uint8_t> natural_policy_sampler(const ModelParams& params,
                                                   const TieredChainGraph& g,
                                                   const std::vector<uint8_t>& l_values,
                                                   const EstimatorConfig& cfg, SplitRng& rng) {
  TierPlan ap = make_tier_plan(g, params, Tier::A);
  std::vector<uint8_t> state(g.var_count(), 0);
  int lcols = g.m() * g.p();
  if (int(l_values.size()) != lcols)
    throw Error("expected " + std::to_string(lcols) + " covariate values");
  for (int c = 0; c < lcols; ++c) state[c] = l_values[c];
  init_tier_uniform(ap, state, rng);
  for (int s = 0; s < cfg.burn_in + cfg.thin; ++s) gibbs_sweep(ap, state, rng);
  std::vector<uint8_t> out;
  out.reserve(ap.sites.size());
  for (const auto& sp : ap.sites) out.push_back(state[sp.col]);
  return out;
}

// ---------------------------------------------------------------------------
// Exact enumeration of the identifying functional.

namespace detail {

struct TierTerms {
  // per site: base main; couplings within the tier; couplings to earlier cols
  struct Site {
    int col;
    double main;
    std::vector<std::pair<double, int>> given;   // (coef, column of L/A value)
    std::vector<std::pair<double, int>> within;  // (coef, site index in tier)
  };
  std::vector<Site> sites;
};

inline TierTerms tier_terms(const TieredChainGraph& g, const ModelParams& params, Tier t) {
  TierTerms terms;
  std::vector<VariableId> tier_vars;
  for (const auto& v : g.all_variables())
    if (v.tier == t) tier_vars.push_back(v);
  for (const auto& v : tier_vars) {
    TierTerms::Site site;
    site.col = g.var_index(v);
    site.main = params.main_of(v);
    for (const auto& u : g.neighbors(v)) {
      double w = params.pairwise_of(make_edge(u, v, EdgeKind::undirected));
      auto it = std::find(tier_vars.begin(), tier_vars.end(), u);
      site.within.push_back({w, int(it - tier_vars.begin())});
    }
    for (const auto& u : g.parents(v)) {
      double w = params.pairwise_of(make_edge(u, v, EdgeKind::directed));
      site.given.push_back({w, g.var_index(u)});
    }
    terms.sites.push_back(std::move(site));
  }
  return terms;
}

// Enumerates the tier's conditional MRF given fixed earlier-tier values in
// `state`; returns the normalized distribution over 2^s tier configurations.
inline std::vector<double> tier_conditional(const TierTerms& terms,
                                            const std::vector<uint8_t>& state) {
  int s = int(terms.sites.size());
  std::vector<double> eta(s);
  for (int i = 0; i < s; ++i) {
    double z = terms.sites[i].main;
    for (const auto& [w, col] : terms.sites[i].given) z += w * state[col];
    eta[i] = z;
  }
  size_t count = size_t(1) << s;
  std::vector<double> logw(count, 0.0);
  double maxw = -1e300;
  for (size_t mask = 0; mask < count; ++mask) {
    double z = 0.0;
    for (int i = 0; i < s; ++i) {
      if (!(mask >> i & 1)) continue;
      z += eta[i];
      for (const auto& [w, j] : terms.sites[i].within)
        if (j < i && (mask >> j & 1)) z += w;
    }
    logw[mask] = z;
    maxw = std::max(maxw, z);
  }
  double zsum = 0.0;
  for (auto& w : logw) {
    w = std::exp(w - maxw);
    zsum += w;
  }
  for (auto& w : logw) w /= zsum;
  return logw;
}

}  // namespace detail

// Exact PAOE by full enumeration of the factorization; feasible only for
// small blocks (the default cap keeps the state spaces around 2^18).
inline double exact_paoe(const TieredChainGraph& g, const ModelParams& params, const Policy& pi1,
                         const Policy& pi2, int max_m = 6) {
  if (g.m() > max_m || g.m() * g.p() > 2 * max_m)
    throw Error("block too large for exact enumeration (m=" + std::to_string(g.m()) +
                "); use a long-run Monte Carlo truth instead");
  if (pi1 == pi2) return 0.0;

  const int m = g.m();
  const int lsites = g.m() * g.p();
  auto lt = detail::tier_terms(g, params, Tier::L);
  auto at = detail::tier_terms(g, params, Tier::A);
  auto yt = detail::tier_terms(g, params, Tier::Y);

  std::vector<uint8_t> state(g.var_count(), 0);
  auto policy_dist = [&](const Policy& pi, const std::vector<double>& natural) {
    if (pi.kind == Policy::Kind::natural) return natural;
    std::vector<double> out(size_t(1) << m);
    for (size_t mask = 0; mask < out.size(); ++mask) {
      double pr = 1.0;
      for (int i = 0; i < m; ++i) pr *= (mask >> i & 1) ? pi.alpha : 1.0 - pi.alpha;
      out[mask] = pr;
    }
    return out;
  };

  double acc = 0.0;
  auto pl = detail::tier_conditional(lt, state);  // L has no parents
  for (size_t lmask = 0; lmask < pl.size(); ++lmask) {
    if (pl[lmask] == 0.0) continue;
    for (int i = 0; i < lsites; ++i) state[lt.sites[i].col] = uint8_t(lmask >> i & 1);
    bool need_natural = pi1.kind == Policy::Kind::natural || pi2.kind == Policy::Kind::natural;
    std::vector<double> natural;
    if (need_natural) natural = detail::tier_conditional(at, state);
    auto d1 = policy_dist(pi1, natural);
    auto d2 = policy_dist(pi2, natural);
    for (size_t amask = 0; amask < d1.size(); ++amask) {
      double wpi = d1[amask] - d2[amask];
      if (wpi == 0.0) continue;
      for (int i = 0; i < m; ++i) state[at.sites[i].col] = uint8_t(amask >> i & 1);
      auto py = detail::tier_conditional(yt, state);
      double mean_sum = 0.0;  // sum over units of E[Y_i | A, L]
      for (size_t ymask = 0; ymask < py.size(); ++ymask) {
        if (py[ymask] == 0.0) continue;
        int bits = 0;
        for (int i = 0; i < m; ++i) bits += int(ymask >> i & 1);
        mean_sum += py[ymask] * bits;
      }
      acc += pl[lmask] * wpi * mean_sum;
    }
  }
  return acc / double(m);
}

}  // namespace netcg
