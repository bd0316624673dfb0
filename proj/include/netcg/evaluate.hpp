#pragma once

// Structure-recovery metrics and the bootstrap bias/variance harness that
// exercises effect estimation under correct, learned and misspecified
// graphs. Blocks are the exchangeable unit: replicates either regenerate
// fresh data from the truth or resample blocks of a master dataset.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netcg/dataset.hpp"
#include "netcg/estimate.hpp"
#include "netcg/graph.hpp"
#include "netcg/parallel.hpp"
#include "netcg/search.hpp"
#include "netcg/simulate.hpp"

namespace netcg {

struct RecoveryMetrics {
  double precision = 1.0;
  double recall = 1.0;
  int true_count = 0;
  int learned_count = 0;
  int overlap = 0;
};

inline RecoveryMetrics precision_recall(const std::vector<Edge>& learned,
                                        const std::vector<Edge>& truth) {
  std::set<Edge> ls, ts;
  for (const auto& e : learned) ls.insert(e.canonical());
  for (const auto& e : truth) ts.insert(e.canonical());
  RecoveryMetrics m;
  m.true_count = int(ts.size());
  m.learned_count = int(ls.size());
  for (const auto& e : ls)
    if (ts.count(e)) ++m.overlap;
  m.precision = ls.empty() ? 1.0 : double(m.overlap) / double(ls.size());
  m.recall = ts.empty() ? 1.0 : double(m.overlap) / double(ts.size());
  return m;
}

// ---------------------------------------------------------------------------
// Bootstrap harness.

struct BootstrapScenario {
  int m = 4;
  int k = 2;
  int p = 1;
  int n = 2000;
  GenCoefficients coeffs;
  // complete | learned-homo | learned-homo-known-proto | learned-hetero |
  // empty | shuffled | true
  std::string condition = "learned-homo";
  bool fresh_data = true;  // false: resample blocks of one master dataset
  Policy policy1 = Policy::bernoulli(0.7);
  Policy policy2 = Policy::natural();
  EstimatorConfig estimator;          // seed field is ignored (per-replicate streams)
  int gen_burn_in = 1000;
  int gen_thin = 100;
  std::optional<Sharing> sharing;     // default chosen per condition
  std::optional<double> truth_paoe;   // override; otherwise exact or long-run MC
  long truth_mc_T = 1000000;          // draws for the m > 6 Monte Carlo truth
};

struct BootstrapReport {
  std::string condition;
  int B = 0;
  std::vector<double> estimates;      // per successful replicate, in index order
  std::vector<int> failed_replicates;
  double truth = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  bool flagged = false;  // > 5% replicate failures
};

inline Sharing default_sharing_for_condition(const std::string& condition) {
  if (condition == "complete" || condition == "learned-hetero") return Sharing::none;
  return Sharing::homogeneous;
}

// Identity of a scenario's truth value, for disk caching of the expensive
// m > 6 Monte Carlo reference.
inline uint64_t scenario_truth_key(const BootstrapScenario& sc, uint64_t seed) {
  char buf[256];
  snprintf(buf, sizeof(buf), "m=%d k=%d p=%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %s %s %ld %llu",
           sc.m, sc.k, sc.p, sc.coeffs.tau1, sc.coeffs.beta1, sc.coeffs.beta2, sc.coeffs.nu1,
           sc.coeffs.nu2, sc.coeffs.nu3, sc.coeffs.nu4, sc.policy1.name().c_str(),
           sc.policy2.name().c_str(), sc.truth_mc_T, static_cast<unsigned long long>(seed));
  return fnv1a64(buf);
}

// Reference PAOE for a scenario's truth: exact enumeration when the block is
// small enough, otherwise a long-run Monte Carlo pass with the true
// parameters injected (deterministic in the scenario seed).
inline double scenario_truth_paoe(const BootstrapScenario& sc, uint64_t seed) {
  if (sc.truth_paoe) return *sc.truth_paoe;
  TieredChainGraph truth = build_k_regular_truth(sc.m, sc.k, sc.p);
  ModelParams params = truth_params(truth, sc.coeffs);
  if (sc.m <= 6 && sc.m * sc.p <= 12)
    return exact_paoe(truth, params, sc.policy1, sc.policy2);
  EstimatorConfig cfg = sc.estimator;
  cfg.T = sc.truth_mc_T;
  cfg.seed = SplitRng(seed).child("truth-mc").key();
  return auto_g_paoe_with_params(params, truth, sc.policy1, sc.policy2, cfg).paoe;
}

inline BootstrapReport bootstrap_paoe(const BootstrapScenario& sc, int B, uint64_t seed,
                                      int threads = 1) {
  if (B < 1) throw InputError("bootstrap needs B >= 1");
  TieredChainGraph truth = build_k_regular_truth(sc.m, sc.k, sc.p);
  Sharing sharing = sc.sharing ? *sc.sharing : default_sharing_for_condition(sc.condition);
  SplitRng master = SplitRng(seed).child("bootstrap");

  std::optional<BlockDataset> master_data;
  if (!sc.fresh_data) {
    SamplerConfig gen{sc.gen_burn_in, sc.gen_thin, master.child("master-data").key(), sc.n};
    master_data = gibbs_generate(truth, sc.coeffs, gen, threads);
  }

  std::vector<double> estimates(B, 0.0);
  std::vector<uint8_t> ok(B, 0);
  parallel_for(size_t(B), threads, [&](size_t b) {
    SplitRng rep = master.child(uint64_t(b));
    try {
      BlockDataset data = [&] {
        if (sc.fresh_data) {
          SamplerConfig gen{sc.gen_burn_in, sc.gen_thin, rep.child("data").key(), sc.n};
          return gibbs_generate(truth, sc.coeffs, gen, 1);
        }
        SplitRng r = rep.child("resample");
        return master_data->resample_blocks(r);
      }();

      TieredChainGraph g = [&] {
        if (sc.condition == "complete") return complete_tiered_graph(sc.m, sc.p);
        if (sc.condition == "empty") return empty_graph(sc.m, sc.p);
        if (sc.condition == "true") return truth;
        if (sc.condition == "shuffled")
          return shuffle_network(truth, rep.child("shuffle").key());
        if (sc.condition == "learned-homo")
          return homogeneous(data, sc.m, sc.p).graph;
        if (sc.condition == "learned-homo-known-proto")
          return homogeneous_known_proto(data, truth_prototypes(), sc.m, sc.p).graph;
        if (sc.condition == "learned-hetero")
          return heterogeneous(data, sc.m, sc.p).graph;
        throw InputError("unknown scenario condition '" + sc.condition + "'");
      }();

      EstimatorConfig cfg = sc.estimator;
      cfg.seed = rep.child("estimate").key();
      estimates[b] = auto_g_paoe(data, g, sc.policy1, sc.policy2, cfg, sharing).paoe;
      ok[b] = 1;
    } catch (const InputError&) {
      throw;  // scenario itself is broken; do not swallow
    } catch (const Error&) {
      ok[b] = 0;  // replicate-level numeric failure: recorded, not fatal
    }
  });

  BootstrapReport report;
  report.condition = sc.condition;
  report.B = B;
  for (int b = 0; b < B; ++b) {
    if (ok[b])
      report.estimates.push_back(estimates[b]);
    else
      report.failed_replicates.push_back(b);
  }
  if (report.estimates.empty()) throw Error("all bootstrap replicates failed");
  report.flagged = double(report.failed_replicates.size()) > 0.05 * double(B);
  report.truth = scenario_truth_paoe(sc, seed);
  double mean = 0.0;
  for (double e : report.estimates) mean += e;
  mean /= double(report.estimates.size());
  report.bias = mean - report.truth;
  double var = 0.0;
  for (double e : report.estimates) var += (e - mean) * (e - mean);
  report.variance = report.estimates.size() > 1 ? var / double(report.estimates.size() - 1) : 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Recovery sweep (precision/recall curves over n).

struct SweepCell {
  int m = 0, k = 0, n = 0;
  std::string mode;
  int replicates = 0;
  double precision_mean = 0.0, precision_sd = 0.0;
  double recall_mean = 0.0, recall_sd = 0.0;
};

struct SweepSpec {
  std::vector<int> m_list{4};
  int k = 2;
  int p = 1;
  std::vector<int> n_list{100, 500, 2000};
  std::vector<std::string> modes{"homo", "hetero"};
  int replicates = 20;
  GenCoefficients coeffs;
  int gen_burn_in = 1000;
  int gen_thin = 100;
};

inline std::vector<SweepCell> recovery_sweep(const SweepSpec& spec, uint64_t seed,
                                             int threads = 1) {
  std::vector<SweepCell> cells;
  SplitRng master = SplitRng(seed).child("sweep");
  for (int m : spec.m_list) {
    TieredChainGraph truth = build_k_regular_truth(m, spec.k, spec.p);
    auto true_edges = truth.cross_edges();
    for (int n : spec.n_list) {
      // replicate r of cell (m, n) reuses one dataset across modes
      std::vector<BlockDataset> datasets(spec.replicates);
      parallel_for(size_t(spec.replicates), threads, [&](size_t r) {
        SamplerConfig gen{spec.gen_burn_in, spec.gen_thin,
                          master.child(uint64_t(m) << 32 | uint64_t(n)).child(r).key(), n};
        datasets[r] = gibbs_generate(truth, spec.coeffs, gen, 1);
      });
      for (const auto& mode : spec.modes) {
        SweepCell cell;
        cell.m = m;
        cell.k = spec.k;
        cell.n = n;
        cell.mode = mode;
        cell.replicates = spec.replicates;
        std::vector<double> precisions(spec.replicates), recalls(spec.replicates);
        parallel_for(size_t(spec.replicates), threads, [&](size_t r) {
          SearchResult res = [&] {
            SearchMode sm = search_mode_from_name(mode);
            switch (sm) {
              case SearchMode::heterogeneous: return heterogeneous(datasets[r], m, spec.p);
              case SearchMode::homo_known_proto:
                return homogeneous_known_proto(datasets[r], truth_prototypes(), m, spec.p);
              case SearchMode::homo_known_network:
                return homogeneous_known_network(datasets[r], truth.network(), m, spec.p);
              default: return homogeneous(datasets[r], m, spec.p);
            }
          }();
          auto metrics = precision_recall(res.cross_edges, true_edges);
          precisions[r] = metrics.precision;
          recalls[r] = metrics.recall;
        });
        auto mean_sd = [](const std::vector<double>& xs) {
          double mean = 0.0;
          for (double x : xs) mean += x;
          mean /= double(xs.size());
          double var = 0.0;
          for (double x : xs) var += (x - mean) * (x - mean);
          double sd = xs.size() > 1 ? std::sqrt(var / double(xs.size() - 1)) : 0.0;
          return std::pair<double, double>{mean, sd};
        };
        std::tie(cell.precision_mean, cell.precision_sd) = mean_sd(precisions);
        std::tie(cell.recall_mean, cell.recall_sd) = mean_sd(recalls);
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

}  // namespace netcg
