#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "netcg/netcg.hpp"
#include "oracles.hpp"

using namespace netcg;

namespace {

Edge aa(int i, int j) { return make_edge({Tier::A, i, 0}, {Tier::A, j, 0}, EdgeKind::undirected); }
Edge yy(int i, int j) { return make_edge({Tier::Y, i, 0}, {Tier::Y, j, 0}, EdgeKind::undirected); }

BootstrapScenario small_scenario(const std::string& condition) {
  BootstrapScenario sc;
  sc.m = 3;
  sc.k = 2;
  sc.n = 400;
  sc.condition = condition;
  sc.estimator.T = 800;
  sc.estimator.burn_in = 100;
  sc.estimator.thin = 5;
  sc.gen_burn_in = 150;
  sc.gen_thin = 15;
  return sc;
}

}  // namespace

TEST_CASE("precision and recall conventions") {
  auto m1 = precision_recall({aa(1, 2), yy(1, 2)}, {aa(1, 2), yy(1, 2)});
  CHECK(m1.precision == 1.0);
  CHECK(m1.recall == 1.0);

  auto m2 = precision_recall({aa(1, 2)}, {aa(1, 2), yy(1, 2)});
  CHECK(m2.precision == 1.0);
  CHECK(m2.recall == 0.5);

  auto m3 = precision_recall({}, {aa(1, 2)});
  CHECK(m3.precision == 1.0);  // empty learned set, by convention
  CHECK(m3.recall == 0.0);

  auto m4 = precision_recall({}, {});
  CHECK(m4.precision == 1.0);
  CHECK(m4.recall == 1.0);
}

TEST_CASE("swapping learned and true swaps precision and recall") {
  SplitRng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    SplitRng tr = rng.child(trial);
    auto a = oracles::random_graph(4, 1, tr, 0.4).cross_edges();
    auto b = oracles::random_graph(4, 1, tr, 0.4).cross_edges();
    auto ab = precision_recall(a, b);
    auto ba = precision_recall(b, a);
    CHECK(ab.precision == ba.recall);
    CHECK(ab.recall == ba.precision);
  }
}

TEST_CASE("bootstrap with B=1 has zero variance and bias equal to the single error") {
  auto sc = small_scenario("true");
  auto rep = bootstrap_paoe(sc, 1, 99, 1);
  CHECK(rep.B == 1);
  REQUIRE(rep.estimates.size() == 1);
  CHECK(rep.variance == 0.0);
  CHECK(rep.bias == Catch::Approx(rep.estimates[0] - rep.truth));
}

TEST_CASE("bootstrap reports are deterministic in the seed") {
  auto sc = small_scenario("empty");
  auto r1 = bootstrap_paoe(sc, 4, 7, 1);
  auto r2 = bootstrap_paoe(sc, 4, 7, 1);
  CHECK(r1.estimates == r2.estimates);
  CHECK(r1.bias == r2.bias);
  CHECK(r1.variance == r2.variance);
  // and across thread counts
  auto r4 = bootstrap_paoe(sc, 4, 7, 4);
  CHECK(r1.estimates == r4.estimates);
}

TEST_CASE("bias and variance recompute from the per-replicate column") {
  auto sc = small_scenario("complete");
  auto rep = bootstrap_paoe(sc, 6, 3, 1);
  double mean = oracles::mean(rep.estimates);
  CHECK(rep.bias == Catch::Approx(mean - rep.truth).margin(1e-12));
  double var = 0;
  for (double e : rep.estimates) var += (e - mean) * (e - mean);
  var /= double(rep.estimates.size() - 1);
  CHECK(rep.variance == Catch::Approx(var).margin(1e-15));
}

TEST_CASE("scenario truth uses exact enumeration for small blocks") {
  auto sc = small_scenario("true");
  GenCoefficients c;
  auto truth = build_k_regular_truth(3, 2);
  double want = exact_paoe(truth, truth_params(truth, c), sc.policy1, sc.policy2);
  CHECK(scenario_truth_paoe(sc, 1) == Catch::Approx(want).margin(1e-12));
  sc.truth_paoe = 0.25;
  CHECK(scenario_truth_paoe(sc, 1) == 0.25);
}

TEST_CASE("resample mode draws blocks from one master dataset") {
  auto sc = small_scenario("true");
  sc.fresh_data = false;
  auto rep = bootstrap_paoe(sc, 3, 13, 1);
  CHECK(rep.estimates.size() == 3);
}

TEST_CASE("learned conditions produce small bias on easy instances") {
  auto sc = small_scenario("learned-homo");
  sc.n = 1200;
  sc.estimator.T = 3000;
  auto rep = bootstrap_paoe(sc, 4, 19, 1);
  CHECK(std::fabs(rep.bias) <= 0.05);
  CHECK_FALSE(rep.flagged);
}

TEST_CASE("unknown scenario condition is an input error") {
  auto sc = small_scenario("mystery");
  CHECK_THROWS_AS(bootstrap_paoe(sc, 2, 1, 1), InputError);
}

TEST_CASE("recovery sweep shapes cells and is deterministic") {
  SweepSpec spec;
  spec.m_list = {3};
  spec.k = 2;
  spec.n_list = {200, 800};
  spec.modes = {"homo", "hetero"};
  spec.replicates = 3;
  spec.gen_burn_in = 120;
  spec.gen_thin = 12;
  auto cells = recovery_sweep(spec, 5, 1);
  REQUIRE(cells.size() == 4);  // 1 m x 2 n x 2 modes
  for (const auto& c : cells) {
    CHECK(c.replicates == 3);
    CHECK(c.precision_mean >= 0.0);
    CHECK(c.precision_mean <= 1.0);
    CHECK(c.recall_mean >= 0.0);
    CHECK(c.recall_mean <= 1.0);
  }
  auto again = recovery_sweep(spec, 5, 2);  // different thread count, same seed
  for (size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].precision_mean == again[i].precision_mean);
    CHECK(cells[i].recall_mean == again[i].recall_mean);
  }
}

TEST_CASE("easy settings reach near-perfect recovery in the sweep") {
  SweepSpec spec;
  spec.m_list = {4};
  spec.n_list = {2000};
  spec.modes = {"homo"};
  spec.replicates = 4;
  spec.gen_burn_in = 200;
  spec.gen_thin = 20;
  auto cells = recovery_sweep(spec, 7, 1);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].precision_mean >= 0.95);
  CHECK(cells[0].recall_mean >= 0.95);
}

TEST_CASE("bootstrap report JSON carries the summaries") {
  auto sc = small_scenario("empty");
  auto rep = bootstrap_paoe(sc, 2, 23, 1);
  auto j = bootstrap_report_to_json(rep);
  CHECK(j.at("condition") == "empty");
  CHECK(j.at("B") == 2);
  CHECK(j.at("bias").get<double>() == rep.bias);
  CHECK(j.at("variance").get<double>() == rep.variance);
  CHECK(j.at("flagged") == rep.flagged);
}
