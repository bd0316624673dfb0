// netcg: simulate / learn / estimate / evaluate / pipeline for tiered
// chain-graph structure learning and network effect estimation. All
// randomness flows from --seed; every output gets a manifest sidecar.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "netcg/netcg.hpp"

namespace fs = std::filesystem;
using namespace netcg;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Manifests must be byte-identical for identical (config, seed) regardless
// of where the artifacts land, so output paths are recorded relative to the
// manifest's own directory.
std::string base_name(const std::string& path) { return fs::path(path).filename().string(); }

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path + " for writing");
  os << "iteration,deleted_item,pbic\n";
  for (const auto& row : trace)
    os << row.iteration << ',' << row.deleted_item << ',' << fmt_double(row.pbic) << '\n';
}

Sharing resolve_sharing(const std::string& flag, const std::string& mode) {
  if (flag == "none") return Sharing::none;
  if (flag == "homogeneous") return Sharing::homogeneous;
  if (flag != "auto") throw InputError("bad --sharing '" + flag + "'");
  return mode == "hetero" ? Sharing::none : Sharing::homogeneous;
}

Sharing resolve_estimate_sharing(const std::string& flag, const TieredChainGraph& g) {
  if (flag == "none") return Sharing::none;
  if (flag == "homogeneous") return Sharing::homogeneous;
  if (flag != "auto") throw InputError("bad --sharing '" + flag + "'");
  return is_homogeneous(g) ? Sharing::homogeneous : Sharing::none;
}

struct SimulateArgs {
  int m = 4, k = 2, p = 1, n = 100;
  int burn_in = 1000, thin = 100;
  uint64_t seed = 1;
  std::string coeffs_file, out = "dataset.csv", truth_out;
};

int run_simulate(const SimulateArgs& a) {
  GenCoefficients coeffs;
  RunManifest man;
  man.subcommand = "simulate";
  if (!a.coeffs_file.empty()) {
    coeffs = coeffs_from_json(load_json_file(a.coeffs_file));
    man.inputs[a.coeffs_file] = file_digest(a.coeffs_file);
  }
  auto truth = build_k_regular_truth(a.m, a.k, a.p);
  SamplerConfig cfg{a.burn_in, a.thin, a.seed, a.n};
  auto data = gibbs_generate(truth, coeffs, cfg, default_threads());
  write_dataset_csv(data, a.out);
  man.flags = {{"m", std::to_string(a.m)},       {"k", std::to_string(a.k)},
               {"p", std::to_string(a.p)},       {"n", std::to_string(a.n)},
               {"burn-in", std::to_string(a.burn_in)}, {"thin", std::to_string(a.thin)},
               {"coeffs", a.coeffs_file},        {"out", base_name(a.out)},
               {"truth-out", base_name(a.truth_out)}};
  man.seed = a.seed;
  man.outputs.push_back(base_name(a.out));
  if (!a.truth_out.empty()) {
    write_graph_file(a.truth_out, truth);
    man.outputs.push_back(base_name(a.truth_out));
  }
  man.write(a.out + ".manifest.json");
  return 0;
}

struct LearnArgs {
  std::string data_file, mode = "homo", sharing = "auto";
  std::string proto_file, network_file;
  bool forward_backward = false, homo_reverse = false;
  uint64_t seed = 1;
  int threads = 0;
  std::string out = "learned.json", trace;
};

int run_learn(const LearnArgs& a) {
  auto data = read_dataset_csv_file(a.data_file);
  int threads = a.threads > 0 ? a.threads : default_threads();
  SearchOptions opt;
  opt.threads = threads;
  opt.sharing = resolve_sharing(a.sharing, a.mode);

  RunManifest man;
  man.subcommand = "learn";
  man.inputs[a.data_file] = file_digest(a.data_file);

  SearchResult result;
  if (a.forward_backward) {
    if (a.mode != "hetero")
      throw InputError("--forward-backward applies to --mode hetero only");
    result = forward_backward(data, data.m(), data.p(), opt);
  } else if (a.mode == "hetero") {
    result = heterogeneous(data, data.m(), data.p(), opt);
  } else if (a.mode == "homo") {
    result = homogeneous(data, data.m(), data.p(), opt, a.homo_reverse);
  } else if (a.mode == "homo-known-proto") {
    if (a.proto_file.empty()) throw InputError("--mode homo-known-proto requires --proto FILE");
    man.inputs[a.proto_file] = file_digest(a.proto_file);
    auto j = load_json_file(a.proto_file);
    std::vector<EdgePrototype> protos;
    for (const auto& jp : j) {
      if (!jp.is_array() || jp.size() != 3)
        throw InputError(a.proto_file + ": prototype entries must be [tail, head, kind]");
      EdgeKind kind = jp[2].get<std::string>() == "directed" ? EdgeKind::directed
                                                             : EdgeKind::undirected;
      protos.push_back(EdgePrototype{template_var_from_name(jp[0].get<std::string>()),
                                     template_var_from_name(jp[1].get<std::string>()), kind}
                           .canonical());
    }
    result = homogeneous_known_proto(data, protos, data.m(), data.p(), opt);
  } else if (a.mode == "homo-known-net") {
    if (a.network_file.empty()) throw InputError("--mode homo-known-net requires --network FILE");
    man.inputs[a.network_file] = file_digest(a.network_file);
    auto j = load_json_file(a.network_file);
    std::vector<UnitPair> net;
    for (const auto& jp : j) {
      if (!jp.is_array() || jp.size() != 2)
        throw InputError(a.network_file + ": network entries must be [i, j]");
      net.push_back(make_pair_sorted(jp[0].get<int>(), jp[1].get<int>()));
    }
    result = homogeneous_known_network(data, net, data.m(), data.p(), opt);
  } else {
    throw InputError("unknown --mode '" + a.mode + "'");
  }

  write_graph_file(a.out, result.graph);
  std::string trace_path = a.trace.empty() ? a.out + ".trace.csv" : a.trace;
  write_trace_csv(trace_path, result.trace);
  man.flags = {{"data", a.data_file},
               {"mode", a.mode},
               {"sharing", a.sharing},
               {"proto", a.proto_file},
               {"network", a.network_file},
               {"forward-backward", a.forward_backward ? "true" : "false"},
               {"homo-reverse", a.homo_reverse ? "true" : "false"},
               {"out", base_name(a.out)},
               {"trace", base_name(trace_path)}};
  man.seed = a.seed;
  man.outputs = {base_name(a.out), base_name(trace_path)};
  man.write(a.out + ".manifest.json");
  return 0;
}

struct EstimateArgs {
  std::string graph_file, data_file;
  double pi1 = 0.7;
  std::string policy2 = "natural", sharing = "auto";
  long T = 10000;
  int burn_in = 1000, thin = 100, threads = 0;
  uint64_t seed = 1;
  std::string out = "effect.json";
};

int run_estimate(const EstimateArgs& a) {
  auto g = read_graph_file(a.graph_file);
  auto data = read_dataset_csv_file(a.data_file);
  data.require_match(g);
  Policy p1 = Policy::bernoulli(a.pi1);
  Policy p2 = Policy::parse(a.policy2);
  Sharing sharing = resolve_estimate_sharing(a.sharing, g);
  EstimatorConfig cfg;
  cfg.T = a.T;
  cfg.burn_in = a.burn_in;
  cfg.thin = a.thin;
  cfg.seed = a.seed;
  auto est = auto_g_paoe(data, g, p1, p2, cfg, sharing);
  write_json_file(a.out, effect_to_json(est));

  RunManifest man;
  man.subcommand = "estimate";
  man.inputs[a.graph_file] = file_digest(a.graph_file);
  man.inputs[a.data_file] = file_digest(a.data_file);
  man.flags = {{"graph", a.graph_file}, {"data", a.data_file},
               {"pi1", fmt_double(a.pi1)}, {"policy2", a.policy2},
               {"sharing", a.sharing},   {"T", std::to_string(a.T)},
               {"burn-in", std::to_string(a.burn_in)}, {"thin", std::to_string(a.thin)},
               {"out", base_name(a.out)}};
  man.seed = a.seed;
  man.outputs = {base_name(a.out)};
  man.write(a.out + ".manifest.json");
  return 0;
}

struct EvaluateArgs {
  std::string scenario_file;
  int B = 0;  // 0: take from scenario (default 100)
  uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = "eval";
  std::string truth_cache;
};

void write_replicates_csv(const std::string& path, const BootstrapReport& r) {
  std::ofstream os(path, std::ios::binary);
  os << "replicate,paoe,ok\n";
  size_t next_ok = 0;
  std::set<int> failed(r.failed_replicates.begin(), r.failed_replicates.end());
  for (int b = 0; b < r.B; ++b) {
    if (failed.count(b))
      os << b << ",,0\n";
    else
      os << b << ',' << fmt_double(r.estimates[next_ok++]) << ",1\n";
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream os(path, std::ios::binary);
  os << "m,k,n,mode,replicates,precision_mean,precision_sd,recall_mean,recall_sd\n";
  for (const auto& c : cells)
    os << c.m << ',' << c.k << ',' << c.n << ',' << c.mode << ',' << c.replicates << ','
       << fmt_double(c.precision_mean) << ',' << fmt_double(c.precision_sd) << ','
       << fmt_double(c.recall_mean) << ',' << fmt_double(c.recall_sd) << '\n';
}

int run_evaluate(const EvaluateArgs& a) {
  auto j = load_json_file(a.scenario_file);
  int threads = a.threads > 0 ? a.threads : default_threads();
  fs::create_directories(a.out_dir);
  RunManifest man;
  man.subcommand = "evaluate";
  man.inputs[a.scenario_file] = file_digest(a.scenario_file);
  man.flags = {{"scenario", a.scenario_file},
               {"B", std::to_string(a.B)},
               {"out-dir", "."}};
  man.seed = a.seed;

  std::string kind = j.value("kind", "bootstrap");
  json report;
  if (kind == "bootstrap") {
    auto sc = bootstrap_scenario_from_json(j, a.scenario_file);
    int B = a.B > 0 ? a.B : j.value("B", 100);
    // the m > 6 Monte Carlo truth is expensive; cache it beside the report
    if (!sc.truth_paoe && (sc.m > 6 || sc.m * sc.p > 12)) {
      std::string cache = a.truth_cache.empty() ? a.out_dir + "/truth_paoe.json" : a.truth_cache;
      char key[24];
      snprintf(key, sizeof(key), "%016llx",
               static_cast<unsigned long long>(scenario_truth_key(sc, a.seed)));
      if (fs::exists(cache)) {
        auto jc = load_json_file(cache);
        if (jc.value("key", "") == key) sc.truth_paoe = jc.at("value").get<double>();
      }
      if (!sc.truth_paoe) {
        sc.truth_paoe = scenario_truth_paoe(sc, a.seed);
        json jc;
        jc["key"] = key;
        jc["value"] = *sc.truth_paoe;
        write_json_file(cache, jc);
      }
    }
    auto rep = bootstrap_paoe(sc, B, a.seed, threads);
    report = bootstrap_report_to_json(rep);
    std::string rpath = a.out_dir + "/replicates.csv";
    write_replicates_csv(rpath, rep);
    man.outputs.push_back("replicates.csv");
  } else if (kind == "sweep") {
    auto spec = sweep_spec_from_json(j);
    auto cells = recovery_sweep(spec, a.seed, threads);
    report["kind"] = "sweep";
    report["cells"] = sweep_cells_to_json(cells);
    std::string spath = a.out_dir + "/sweep.csv";
    write_sweep_csv(spath, cells);
    man.outputs.push_back("sweep.csv");
  } else {
    throw InputError(a.scenario_file + ": scenario kind must be bootstrap|sweep");
  }
  std::string rpath = a.out_dir + "/report.json";
  write_json_file(rpath, report);
  man.outputs.push_back("report.json");
  man.write(a.out_dir + "/manifest.json");
  return 0;
}

struct PipelineArgs {
  std::string config_file;
  std::string out_dir = "run";
  int threads = 0;
  uint64_t seed_override = 0;
  bool has_seed_override = false;
};

int run_pipeline(const PipelineArgs& a) {
  auto cfg = load_json_file(a.config_file);
  int threads = a.threads > 0 ? a.threads : default_threads();
  fs::create_directories(a.out_dir);

  RunManifest man;
  man.subcommand = "pipeline";
  man.inputs[a.config_file] = file_digest(a.config_file);
  man.flags = {{"config", a.config_file}, {"out-dir", "."}};
  std::string stage = "config";
  try {
    int m = cfg.value("m", 4), k = cfg.value("k", 2), p = cfg.value("p", 1);
    int n = cfg.value("n", 100);
    uint64_t seed = a.has_seed_override ? a.seed_override : cfg.value("seed", uint64_t(1));
    man.seed = seed;
    GenCoefficients coeffs;
    if (cfg.contains("coeffs")) coeffs = coeffs_from_json(cfg.at("coeffs"));
    SplitRng root(seed);

    stage = "simulate";
    json simj = cfg.value("simulate", json::object());
    SamplerConfig gen{simj.value("burn_in", 1000), simj.value("thin", 100),
                      root.child("simulate").key(), n};
    auto truth = build_k_regular_truth(m, k, p);
    auto data = gibbs_generate(truth, coeffs, gen, threads);
    write_dataset_csv(data, a.out_dir + "/dataset.csv");
    write_graph_file(a.out_dir + "/truth.json", truth);
    man.outputs.push_back("dataset.csv");
    man.outputs.push_back("truth.json");

    stage = "learn";
    json learnj = cfg.value("learn", json::object());
    std::string mode = learnj.value("mode", "homo");
    SearchOptions opt;
    opt.threads = threads;
    opt.sharing = resolve_sharing(learnj.value("sharing", "auto"), mode);
    SearchResult learned;
    if (mode == "hetero")
      learned = learnj.value("forward_backward", false)
                    ? forward_backward(data, m, p, opt)
                    : heterogeneous(data, m, p, opt);
    else if (mode == "homo")
      learned = homogeneous(data, m, p, opt, learnj.value("reverse", false));
    else if (mode == "homo-known-proto")
      learned = homogeneous_known_proto(data, truth_prototypes(), m, p, opt);
    else if (mode == "homo-known-net")
      learned = homogeneous_known_network(data, truth.network(), m, p, opt);
    else
      throw InputError("pipeline: unknown learn mode '" + mode + "'");
    write_graph_file(a.out_dir + "/learned.json", learned.graph);
    write_trace_csv(a.out_dir + "/learned.trace.csv", learned.trace);
    man.outputs.push_back("learned.json");
    man.outputs.push_back("learned.trace.csv");

    stage = "estimate";
    json estj = cfg.value("estimate", json::object());
    Policy p1 = Policy::bernoulli(estj.value("pi1", 0.7));
    Policy p2 = Policy::parse(estj.value("policy2", std::string("natural")));
    EstimatorConfig ecfg;
    ecfg.T = estj.value("T", 10000L);
    ecfg.burn_in = estj.value("burn_in", 1000);
    ecfg.thin = estj.value("thin", 100);
    ecfg.seed = root.child("estimate").key();
    Sharing esh = resolve_estimate_sharing(estj.value("sharing", std::string("auto")),
                                           learned.graph);
    auto est = auto_g_paoe(data, learned.graph, p1, p2, ecfg, esh);
    write_json_file(a.out_dir + "/effect.json", effect_to_json(est));
    man.outputs.push_back("effect.json");

    stage = "evaluate";
    json evalj = cfg.value("evaluate", json::object());
    json report;
    auto rec = precision_recall(learned.cross_edges, truth.cross_edges());
    report["recovery"] = {{"precision", rec.precision},
                          {"recall", rec.recall},
                          {"true_edges", rec.true_count},
                          {"learned_edges", rec.learned_count}};
    report["paoe"] = est.paoe;
    report["final_pbic"] = learned.final_pbic;
    if (m <= 6 && m * p <= 12)
      report["exact_truth_paoe"] = exact_paoe(truth, truth_params(truth, coeffs), p1, p2);
    int B = evalj.value("B", 0);
    if (B > 0) {
      BootstrapScenario sc;
      sc.m = m; sc.k = k; sc.p = p; sc.n = n;
      sc.coeffs = coeffs;
      sc.condition = evalj.value("condition", std::string("learned-homo"));
      sc.policy1 = p1;
      sc.policy2 = p2;
      sc.estimator = ecfg;
      sc.gen_burn_in = gen.burn_in;
      sc.gen_thin = gen.thin;
      auto rep = bootstrap_paoe(sc, B, root.child("evaluate").key(), threads);
      report["bootstrap"] = bootstrap_report_to_json(rep);
      write_replicates_csv(a.out_dir + "/replicates.csv", rep);
      man.outputs.push_back("replicates.csv");
    }
    write_json_file(a.out_dir + "/report.json", report);
    man.outputs.push_back("report.json");

    man.flags["failed_stage"] = "";
    man.write(a.out_dir + "/manifest.json");
  } catch (...) {
    man.flags["failed_stage"] = stage;
    man.write(a.out_dir + "/manifest.json");
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tiered chain-graph structure learning and network effect estimation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* csim = app.add_subcommand("simulate", "generate block data from a k-regular truth");
  csim->add_option("--m", sim.m, "units per block")->capture_default_str();
  csim->add_option("--k", sim.k, "network regularity")->capture_default_str();
  csim->add_option("--p", sim.p, "covariates per unit")->capture_default_str();
  csim->add_option("--n", sim.n, "number of iid blocks")->capture_default_str();
  csim->add_option("--burn-in", sim.burn_in, "Gibbs burn-in sweeps per block")
      ->capture_default_str();
  csim->add_option("--thin", sim.thin, "extra decorrelation sweeps before the retained draw")
      ->capture_default_str();
  csim->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  csim->add_option("--coeffs", sim.coeffs_file, "generating coefficients JSON");
  csim->add_option("--out", sim.out, "output dataset CSV")->capture_default_str();
  csim->add_option("--truth-out", sim.truth_out, "also write the truth graph JSON");

  LearnArgs lrn;
  auto* clrn = app.add_subcommand("learn", "learn network ties from block data");
  clrn->add_option("--data", lrn.data_file, "dataset CSV")->required();
  clrn->add_option("--mode", lrn.mode, "hetero|homo|homo-known-proto|homo-known-net")
      ->capture_default_str();
  clrn->add_option("--proto", lrn.proto_file, "prototype list JSON (homo-known-proto)");
  clrn->add_option("--network", lrn.network_file, "network pair list JSON (homo-known-net)");
  clrn->add_option("--sharing", lrn.sharing, "auto|none|homogeneous")->capture_default_str();
  clrn->add_flag("--forward-backward", lrn.forward_backward,
                 "forward phase before the backward search (hetero)");
  clrn->add_flag("--homo-reverse", lrn.homo_reverse,
                 "learn edge types before the network in homo mode");
  clrn->add_option("--seed", lrn.seed, "seed (recorded; search is deterministic)")
      ->capture_default_str();
  clrn->add_option("--threads", lrn.threads, "worker cap (0 = hardware)")->capture_default_str();
  clrn->add_option("--out", lrn.out, "learned graph JSON")->capture_default_str();
  clrn->add_option("--trace", lrn.trace, "trace CSV (default <out>.trace.csv)");

  EstimateArgs est;
  auto* cest = app.add_subcommand("estimate", "auto-g-computation of the PAOE");
  cest->add_option("--graph", est.graph_file, "graph JSON")->required();
  cest->add_option("--data", est.data_file, "dataset CSV")->required();
  cest->add_option("--pi1", est.pi1, "policy 1 bernoulli probability")->capture_default_str();
  cest->add_option("--policy2", est.policy2, "natural or bernoulli:<alpha>")
      ->capture_default_str();
  cest->add_option("--sharing", est.sharing, "auto|none|homogeneous")->capture_default_str();
  cest->add_option("--T", est.T, "Monte Carlo draws per policy")->capture_default_str();
  cest->add_option("--burn-in", est.burn_in, "Gibbs burn-in sweeps")->capture_default_str();
  cest->add_option("--thin", est.thin, "sweeps between retained draws")->capture_default_str();
  cest->add_option("--seed", est.seed, "master seed")->capture_default_str();
  cest->add_option("--threads", est.threads, "worker cap (0 = hardware)")->capture_default_str();
  cest->add_option("--out", est.out, "effect JSON")->capture_default_str();

  EvaluateArgs ev;
  auto* cev = app.add_subcommand("evaluate", "bootstrap bias/variance or recovery sweeps");
  cev->add_option("--scenario", ev.scenario_file, "scenario JSON")->required();
  cev->add_option("--B", ev.B, "bootstrap replicates (overrides scenario)")
      ->capture_default_str();
  cev->add_option("--seed", ev.seed, "master seed")->capture_default_str();
  cev->add_option("--threads", ev.threads, "worker cap (0 = hardware)")->capture_default_str();
  cev->add_option("--out-dir", ev.out_dir, "output directory")->capture_default_str();
  cev->add_option("--truth-cache", ev.truth_cache,
                  "reusable cache file for the long-run Monte Carlo truth");

  PipelineArgs pipe;
  auto* cpipe = app.add_subcommand("pipeline", "simulate -> learn -> estimate -> evaluate");
  cpipe->add_option("--config", pipe.config_file, "pipeline config JSON")->required();
  cpipe->add_option("--out-dir", pipe.out_dir, "artifact directory")->capture_default_str();
  cpipe->add_option("--threads", pipe.threads, "worker cap (0 = hardware)")
      ->capture_default_str();
  auto* seed_opt = cpipe->add_option("--seed", pipe.seed_override, "override the config seed");

  try {
    app.parse(argc, argv);
    pipe.has_seed_override = seed_opt->count() > 0;
    if (csim->parsed()) return run_simulate(sim);
    if (clrn->parsed()) return run_learn(lrn);
    if (cest->parsed()) return run_estimate(est);
    if (cev->parsed()) return run_evaluate(ev);
    if (cpipe->parsed()) return run_pipeline(pipe);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
