// Acceptance suite: eight numbered criteria, each printed as one PASS/FAIL
// line. Run `acceptance` for all, or `acceptance <k>` for one. Exit code is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netcg/netcg.hpp"

using namespace netcg;
namespace fs = std::filesystem;

namespace {

int g_threads = [] {
  int hw = default_threads();
  return hw > 8 ? 8 : hw;
}();

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

bool check(bool ok, const std::string& what, std::string& detail) {
  if (!ok) detail += (detail.empty() ? "" : "; ") + what;
  return ok;
}

// ---------------------------------------------------------------------- c1
bool criterion1(std::string& detail) {
  SplitRng rng(10001);
  int done = 0;
  double worst = 0.0;
  uint64_t salt = 0;
  while (done < 200) {
    SplitRng tr = rng.child(salt++);
    int m = 2 + int(tr.below(3));  // 2..4
    int p = 1 + int(tr.below(2));  // 1..2
    TieredChainGraph complete = complete_tiered_graph(m, p);
    std::vector<Edge> cross;
    for (const auto& e : complete.cross_edges())
      if (tr.bernoulli(0.5)) cross.push_back(e);
    if (cross.empty()) continue;
    TieredChainGraph g(m, p, default_unit_template(p), cross);
    int n = 20 + int(tr.below(181));  // 20..200
    BlockDataset data(n, m, p);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < data.d(); ++c) data.at(b, c) = tr.bernoulli(0.5) ? 1 : 0;
    Edge e = g.cross_edges()[tr.below(g.cross_edges().size())];
    double local = local_score_diff(data, g, e, Sharing::none);
    double full =
        pbic(data, g.without_cross_edge(e), Sharing::none) - pbic(data, g, Sharing::none);
    worst = std::max(worst, std::fabs(local - full));
    ++done;
  }
  char buf[128];
  snprintf(buf, sizeof(buf), "worst |local - full| = %.3e over 200 triples", worst);
  detail = buf;
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------- c2
bool criterion2(std::string& detail) {
  GenCoefficients c;
  auto truth = build_k_regular_truth(2, 1);
  auto tp = truth_params(truth, c);
  const int n = 100000;
  auto data = gibbs_generate(truth, c, {200, 20, 77, n}, g_threads);
  const int d = data.d();
  std::vector<double> emp(size_t(1) << d, 0.0);
  for (int b = 0; b < n; ++b) {
    int mask = 0;
    for (int col = 0; col < d; ++col)
      if (data.at(b, col)) mask |= 1 << col;
    emp[mask] += 1.0 / n;
  }
  auto lt = detail::tier_terms(truth, tp, Tier::L);
  auto at = detail::tier_terms(truth, tp, Tier::A);
  auto yt = detail::tier_terms(truth, tp, Tier::Y);
  std::vector<uint8_t> st(d, 0);
  double tv = 0;
  auto pl = detail::tier_conditional(lt, st);
  for (size_t lm = 0; lm < pl.size(); ++lm) {
    for (int i = 0; i < 2; ++i) st[lt.sites[i].col] = uint8_t(lm >> i & 1);
    auto pa = detail::tier_conditional(at, st);
    for (size_t am = 0; am < pa.size(); ++am) {
      for (int i = 0; i < 2; ++i) st[at.sites[i].col] = uint8_t(am >> i & 1);
      auto py = detail::tier_conditional(yt, st);
      for (size_t ym = 0; ym < py.size(); ++ym) {
        for (int i = 0; i < 2; ++i) st[yt.sites[i].col] = uint8_t(ym >> i & 1);
        int mask = 0;
        for (int col = 0; col < d; ++col)
          if (st[col]) mask |= 1 << col;
        tv += std::fabs(pl[lm] * pa[am] * py[ym] - emp[mask]);
      }
    }
  }
  tv /= 2;
  char buf[96];
  snprintf(buf, sizeof(buf), "TV(empirical, enumerated) = %.5f at n=100000", tv);
  detail = buf;
  return tv <= 0.01;
}

// ---------------------------------------------------------------------- c3
bool criterion3(std::string& detail) {
  GenCoefficients c;
  auto truth = build_k_regular_truth(3, 2);
  auto tp = truth_params(truth, c);
  Policy p1 = Policy::bernoulli(0.7), p2 = Policy::natural();
  double exact = exact_paoe(truth, tp, p1, p2);
  double worst = 0.0;
  std::vector<double> errs(5);
  parallel_for(5, g_threads, [&](size_t s) {
    EstimatorConfig cfg;
    cfg.T = 50000;
    cfg.burn_in = 500;
    cfg.thin = 40;
    cfg.seed = 1000 + s;
    errs[s] = std::fabs(auto_g_paoe_with_params(tp, truth, p1, p2, cfg).paoe - exact);
  });
  for (double e : errs) worst = std::max(worst, e);
  char buf[96];
  snprintf(buf, sizeof(buf), "worst |auto-g - exact| = %.5f over 5 seeds (exact=%.4f)", worst,
           exact);
  detail = buf;
  return worst <= 0.01;
}

// ------------------------------------------------------------------ c4, c5
struct SweepTable {
  std::map<std::pair<std::string, int>, std::pair<double, double>> cells;  // (mode,n) -> (P,R)
};

const SweepTable& shared_sweep() {
  static SweepTable table = [] {
    SweepSpec spec;
    spec.m_list = {4};
    spec.k = 2;
    spec.n_list = {100, 500, 2000};
    spec.modes = {"homo", "hetero"};
    spec.replicates = 20;
    spec.gen_burn_in = 300;
    spec.gen_thin = 30;
    SweepTable t;
    for (const auto& cell : recovery_sweep(spec, 424242, g_threads))
      t.cells[{cell.mode, cell.n}] = {cell.precision_mean, cell.recall_mean};
    return t;
  }();
  return table;
}

bool criterion4(std::string& detail) {
  const auto& t = shared_sweep();
  auto [hp, hr] = t.cells.at({"homo", 2000});
  auto [ep, er] = t.cells.at({"hetero", 2000});
  auto [hp5, hr5] = t.cells.at({"homo", 500});
  auto [ep5, er5] = t.cells.at({"hetero", 500});
  char buf[192];
  snprintf(buf, sizeof(buf),
           "n=2000: homo P=%.3f R=%.3f, hetero P=%.3f R=%.3f; n=500 recall homo=%.3f hetero=%.3f",
           hp, hr, ep, er, hr5, er5);
  detail = buf;
  bool ok = true;
  ok &= check(hp >= 0.90 && hr >= 0.90, "homogeneous below 0.90", detail);
  ok &= check(ep >= 0.80 && er >= 0.80, "heterogeneous below 0.80", detail);
  ok &= check(hr5 >= er5 - 0.02, "homo recall not >= hetero recall - 0.02 at n=500", detail);
  return ok;
}

bool criterion5(std::string& detail) {
  const auto& t = shared_sweep();
  bool ok = true;
  std::string msg;
  for (const std::string mode : {"homo", "hetero"}) {
    double pp = -1, pr = -1;
    for (int n : {100, 500, 2000}) {
      auto [p, r] = t.cells.at({mode, n});
      char buf[80];
      snprintf(buf, sizeof(buf), "%s n=%d P=%.3f R=%.3f; ", mode.c_str(), n, p, r);
      msg += buf;
      ok &= check(p >= pp - 0.02, mode + " precision decreased at n=" + std::to_string(n), msg);
      ok &= check(r >= pr - 0.02, mode + " recall decreased at n=" + std::to_string(n), msg);
      pp = p;
      pr = r;
    }
  }
  detail = msg;
  return ok;
}

// ---------------------------------------------------------------------- c6
bool criterion6(std::string& detail) {
  BootstrapScenario base;
  base.m = 8;
  base.k = 2;
  base.n = 2000;
  base.estimator.T = 10000;
  base.estimator.burn_in = 500;
  base.estimator.thin = 50;
  base.gen_burn_in = 300;
  base.gen_thin = 30;
  base.truth_mc_T = 1000000;
  const uint64_t seed = 20240808;

  double truth = scenario_truth_paoe(base, seed);  // long-run MC truth, computed once

  auto run_condition = [&](const std::string& condition) {
    BootstrapScenario sc = base;
    sc.condition = condition;
    sc.truth_paoe = truth;
    return bootstrap_paoe(sc, 100, seed, g_threads);
  };
  auto homo = run_condition("learned-homo");
  auto complete = run_condition("complete");
  auto empty = run_condition("empty");
  auto shuffled = run_condition("shuffled");

  char buf[256];
  snprintf(buf, sizeof(buf),
           "bias: homo=%.4f complete=%.4f empty=%.4f shuffled=%.4f; var: homo=%.2e complete=%.2e",
           homo.bias, complete.bias, empty.bias, shuffled.bias, homo.variance,
           complete.variance);
  detail = buf;
  bool ok = true;
  ok &= check(std::fabs(homo.bias) <= 0.02, "|bias(learned-homo)| > 0.02", detail);
  ok &= check(std::fabs(complete.bias) <= 0.02, "|bias(complete)| > 0.02", detail);
  ok &= check(std::fabs(empty.bias) >= 3 * std::fabs(homo.bias),
              "|bias(empty)| < 3x|bias(learned-homo)|", detail);
  ok &= check(std::fabs(shuffled.bias) >= 3 * std::fabs(homo.bias),
              "|bias(shuffled)| < 3x|bias(learned-homo)|", detail);
  ok &= check(homo.variance <= 1.25 * complete.variance,
              "variance(learned-homo) > 1.25x variance(complete)", detail);
  return ok;
}

// ---------------------------------------------------------------------- c7
std::string run_cli(const std::string& args, int& exit_code) {
  std::string cmd = std::string(NETCG_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
  exit_code = WEXITSTATUS(pclose(pipe));
  return out;
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream is(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = ss.str();
  }
  return out;
}

bool criterion7(std::string& detail) {
  fs::path tmp = fs::temp_directory_path() / "netcg_acceptance_c7";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  nlohmann::ordered_json cfg;
  cfg["m"] = 4;
  cfg["k"] = 2;
  cfg["n"] = 2000;
  cfg["seed"] = 99;
  cfg["simulate"] = {{"burn_in", 300}, {"thin", 30}};
  cfg["learn"] = {{"mode", "homo"}};
  cfg["estimate"] = {{"pi1", 0.7}, {"policy2", "natural"}, {"T", 5000},
                     {"burn_in", 300}, {"thin", 20}};
  {
    std::ofstream os(tmp / "cfg.json");
    os << cfg.dump(2) << "\n";
  }
  std::string cfg_path = (tmp / "cfg.json").string();
  int rc1 = 0, rc2 = 0, rc3 = 0;
  run_cli("pipeline --config " + cfg_path + " --out-dir " + (tmp / "r1").string() +
              " --threads 1",
          rc1);
  run_cli("pipeline --config " + cfg_path + " --out-dir " + (tmp / "r2").string() +
              " --threads 1",
          rc2);
  run_cli("pipeline --config " + cfg_path + " --out-dir " + (tmp / "r4").string() +
              " --threads 4",
          rc3);
  bool ok = true;
  ok &= check(rc1 == 0 && rc2 == 0 && rc3 == 0, "pipeline run failed", detail);
  if (ok) {
    auto b1 = dir_bytes(tmp / "r1");
    ok &= check(!b1.empty(), "no artifacts produced", detail);
    ok &= check(b1 == dir_bytes(tmp / "r2"), "reruns differ byte-wise", detail);
    ok &= check(b1 == dir_bytes(tmp / "r4"), "thread counts change artifacts", detail);
    if (ok) {
      char buf[96];
      snprintf(buf, sizeof(buf), "%zu artifacts byte-identical across reruns and threads",
               b1.size());
      detail = buf;
    }
  }
  fs::remove_all(tmp);
  return ok;
}

// ---------------------------------------------------------------------- c8
bool criterion8(std::string& detail) {
  bool ok = true;
  SplitRng rng(88);

  // graph partition + homolog properties, 100 random graphs
  for (int t = 0; t < 100 && ok; ++t) {
    SplitRng tr = rng.child(t);
    int m = 2 + int(tr.below(4)), p = 1 + int(tr.below(2));
    TieredChainGraph complete = complete_tiered_graph(m, p);
    std::vector<Edge> cross;
    for (const auto& e : complete.cross_edges())
      if (tr.bernoulli(0.5)) cross.push_back(e);
    TieredChainGraph g(m, p, default_unit_template(p), cross);
    size_t total = 0;
    std::set<VariableId> seen;
    for (const auto& b : blocks(g)) {
      total += b.size();
      for (const auto& v : b) ok &= seen.insert(v).second;
    }
    ok &= check(total == size_t(g.var_count()), "blocks do not partition", detail);
    std::set<Edge> covered;
    for (const auto& e : g.cross_edges()) {
      auto h = homologs(g, e);
      ok &= std::binary_search(h.begin(), h.end(), e.canonical());
      for (const auto& f : h) covered.insert(f);
    }
    ok &= check(covered.size() == g.cross_edges().size(), "homologs do not cover", detail);
  }
  if (!ok) return false;

  // pseudolikelihood gradient vs central finite differences, >= 100 cases
  int grad_cases = 0;
  for (int t = 0; grad_cases < 100; ++t) {
    SplitRng tr = rng.child(10000 + t);
    int m = 2 + int(tr.below(3));
    TieredChainGraph complete = complete_tiered_graph(m, 1);
    std::vector<Edge> cross;
    for (const auto& e : complete.cross_edges())
      if (tr.bernoulli(0.4)) cross.push_back(e);
    TieredChainGraph g(m, 1, default_unit_template(1), cross);
    BlockDataset data(25, m, 1);
    for (int b = 0; b < 25; ++b)
      for (int c = 0; c < data.d(); ++c) data.at(b, c) = tr.bernoulli(0.5) ? 1 : 0;
    ModelParams params;
    for (const auto& v : g.all_variables()) params.main[v] = tr.next_double() - 0.5;
    for (const auto& e : g.all_edges()) params.pairwise[e.canonical()] = tr.next_double() - 0.5;
    auto vars = g.all_variables();
    const auto& v = vars[tr.below(vars.size())];
    double h = 1e-5;
    ModelParams up = params, dn = params;
    up.main[v] += h;
    dn.main[v] -= h;
    double fd = (log_pseudolikelihood(data, g, up) - log_pseudolikelihood(data, g, dn)) / (2 * h);
    double an = 0;
    for (int b = 0; b < data.n(); ++b) {
      std::map<VariableId, int> assign;
      for (const auto& u : g.boundary(v)) assign[u] = data.value(b, u);
      an += data.value(b, v) - conditional_prob(params, g, v, assign);
    }
    ok &= check(std::fabs(fd - an) <= 1e-4 * std::max(1.0, std::fabs(an)),
                "gradient mismatch vs finite differences", detail);
    ++grad_cases;
    if (!ok) return false;
  }

  // search trace monotonicity, 100 seeded searches
  for (int t = 0; t < 100 && ok; ++t) {
    SplitRng tr = rng.child(20000 + t);
    GenCoefficients c;
    auto data = gibbs_generate(build_k_regular_truth(3, 2), c,
                               {60, 6, tr.next_u64(), 40 + int(tr.below(80))}, 1);
    auto res = greedy_network_search(complete_tiered_graph(3, 1), data);
    for (size_t i = 1; i < res.trace.size(); ++i)
      ok &= check(res.trace[i].pbic > res.trace[i - 1].pbic, "trace not increasing", detail);
  }
  if (!ok) return false;

  // policy-swap antisymmetry, 100 cases
  {
    GenCoefficients c;
    auto truth = build_k_regular_truth(2, 1);
    auto tp = truth_params(truth, c);
    for (int t = 0; t < 100 && ok; ++t) {
      SplitRng tr = rng.child(30000 + t);
      double a1 = 0.05 + 0.9 * tr.next_double();
      double a2 = 0.05 + 0.9 * tr.next_double();
      Policy p1 = Policy::bernoulli(a1);
      Policy p2 = tr.bernoulli(0.5) ? Policy::natural() : Policy::bernoulli(a2);
      EstimatorConfig cfg;
      cfg.T = 60;
      cfg.burn_in = 20;
      cfg.thin = 2;
      cfg.seed = tr.next_u64();
      auto ab = auto_g_paoe_with_params(tp, truth, p1, p2, cfg);
      auto ba = auto_g_paoe_with_params(tp, truth, p2, p1, cfg);
      ok &= check(ab.paoe == -ba.paoe, "policy swap not antisymmetric", detail);
      auto self = auto_g_paoe_with_params(tp, truth, p1, p1, cfg);
      ok &= check(self.paoe == 0.0, "identical policies not exactly zero", detail);
    }
  }
  if (!ok) return false;

  // precision/recall conventions, 100 random edge-set pairs
  for (int t = 0; t < 100 && ok; ++t) {
    SplitRng tr = rng.child(40000 + t);
    TieredChainGraph complete = complete_tiered_graph(3, 1);
    std::vector<Edge> a, b;
    for (const auto& e : complete.cross_edges()) {
      if (tr.bernoulli(0.4)) a.push_back(e);
      if (tr.bernoulli(0.4)) b.push_back(e);
    }
    auto ab = precision_recall(a, b);
    auto ba = precision_recall(b, a);
    ok &= check(ab.precision == ba.recall && ab.recall == ba.precision,
                "precision/recall swap inconsistency", detail);
    if (a.empty()) ok &= check(ab.precision == 1.0, "empty learned set precision != 1", detail);
    if (b.empty()) ok &= check(ab.recall == 1.0, "empty true set recall != 1", detail);
  }
  if (ok && detail.empty())
    detail = "graph, gradient, trace, policy and metric properties held on 100+ cases each";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all = {
      {1, "local score difference equals full rescore (200 random triples, 1e-8)", criterion1},
      {2, "Gibbs block distribution within TV 0.01 of enumeration (m=2, 100k blocks)",
       criterion2},
      {3, "auto-g matches the enumeration oracle within 0.01 (m=3, T=50000, 5 seeds)",
       criterion3},
      {4, "structure recovery at n=2000 (homo >= 0.90, hetero >= 0.80; homo leads at n=500)",
       criterion4},
      {5, "precision/recall nondecreasing over n in {100,500,2000} (0.02 slack)", criterion5},
      {6, "bias orderings across graph conditions at block 8 (bounds, 3x separations, variance)",
       criterion6},
      {7, "pipeline artifacts byte-identical across reruns and thread counts", criterion7},
      {8, "module invariant suites hold on >= 100 cases each", criterion8},
  };

  int want = 0;
  if (argc > 1) want = std::atoi(argv[1]);
  int failures = 0;
  for (auto& c : all) {
    if (want != 0 && c.id != want) continue;
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    printf("%s  criterion %d: %s  [%.1fs]%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
           secs, detail.empty() ? "" : "  -- ", detail.c_str());
    fflush(stdout);
    failures += !ok;
  }
  return failures;
}
