#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "stn/features.hpp"
#include "stn/stn_graph.hpp"
#include "stn/trajectory.hpp"
#include "testutil.hpp"

using namespace stn;

namespace {

Dataset mini_dataset() {
  Dataset ds;
  ds.sense = Sense::Minimize;
  ds.space = Space::Continuous;
  // Three runs; runs 1 and 2 share location 1,0; run 3 is disjoint.
  ds.algorithms.push_back(parse_trajectory_text(
      "1\t10\t0,0\n1\t4\t1,0\n2\t9\t1,0\n2\t4\t2,0\n3\t8\t5,0\n3\t6\t6,0\n", "a1",
      Space::Continuous));
  return ds;
}

}  // namespace

TEST_CASE("counting trajectories at the global best") {
  Dataset ds = mini_dataset();
  double best = ds.best_global_fitness();
  CHECK(best == doctest::Approx(4.0));
  CHECK(total_best_global_fitness(ds.algorithms[0], best, ds.sense) == 2);
  CHECK(total_best_global_fitness(ds.algorithms[0], 6.0, ds.sense) == 1);
  CHECK(total_best_global_fitness(ds.algorithms[0], -1.0, ds.sense) == 0);
}

TEST_CASE("tolerance treats near-equal fitness as reaching the best") {
  AlgorithmRuns runs =
      parse_trajectory_text("1\t1.0000000001\t0,0\n", "a", Space::Continuous);
  CHECK(total_best_global_fitness(runs, 1.0, Sense::Minimize) == 1);
  AlgorithmRuns off = parse_trajectory_text("1\t1.1\t0,0\n", "a", Space::Continuous);
  CHECK(total_best_global_fitness(off, 1.0, Sense::Minimize) == 0);
}

TEST_CASE("connectivity is the overlapping pair fraction") {
  CHECK(connectivity({}) == doctest::Approx(0.0));
  CHECK(connectivity({{1, 2}}) == doctest::Approx(0.0));  // single trajectory
  CHECK(connectivity({{1, 2}, {2, 3}}) == doctest::Approx(1.0));
  CHECK(connectivity({{1, 2}, {3, 4}}) == doctest::Approx(0.0));
  // Pairs: (0,1) share 2; (0,2) and (1,2) share nothing -> 1/3.
  CHECK(connectivity({{1, 2}, {2, 3}, {4, 5}}) == doctest::Approx(1.0 / 3.0));
  // Repeated entries in a walk must not inflate the count.
  CHECK(connectivity({{1, 1, 1}, {1}, {2}}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("average fitness bases") {
  Dataset ds = mini_dataset();
  CHECK(avg_fitness(ds.algorithms[0], ds.sense) == doctest::Approx((4 + 4 + 6) / 3.0));
  CHECK(avg_fitness(ds.algorithms[0], ds.sense, FitnessBasis::LastStep) ==
        doctest::Approx((4 + 4 + 6) / 3.0));
  // Make the last step differ from the best step.
  AlgorithmRuns runs =
      parse_trajectory_text("1\t2\t0,0\n1\t5\t1,0\n", "a", Space::Continuous);
  CHECK(avg_fitness(runs, Sense::Minimize) == doctest::Approx(2.0));
  CHECK(avg_fitness(runs, Sense::Minimize, FitnessBasis::LastStep) == doctest::Approx(5.0));

  AlgorithmRuns empty;
  empty.name = "none";
  CHECK_THROWS_AS(avg_fitness(empty, Sense::Minimize), InputError);
}

TEST_CASE("maximize flips what counts as best") {
  AlgorithmRuns runs =
      parse_trajectory_text("1\t1\t0,0\n1\t9\t1,0\n2\t5\t0,0\n", "a", Space::Continuous);
  CHECK(total_best_global_fitness(runs, 9.0, Sense::Maximize) == 1);
  CHECK(avg_fitness(runs, Sense::Maximize) == doctest::Approx(7.0));
}

TEST_CASE("extract_all matches the hand-computed mini dataset") {
  Dataset ds = mini_dataset();
  STN stn = build_stn(ds);
  auto features = extract_all(ds, stn);
  REQUIRE(features.size() == 1);
  CHECK(features[0].algorithm == "a1");
  CHECK(features[0].total_best_global_fitness == 2);
  CHECK(features[0].connectivity == doctest::Approx(1.0 / 3.0));
  CHECK(features[0].avg_fitness == doctest::Approx(14.0 / 3.0));
  CHECK(features[0].trajectory_count == 3);
}

TEST_CASE("extract_all rejects a graph from another dataset") {
  Dataset ds = mini_dataset();
  STN stn = build_stn(ds);
  Dataset other = mini_dataset();
  other.algorithms[0].name = "renamed";
  CHECK_THROWS_AS(extract_all(other, stn), InputError);
}

TEST_CASE("features agree with the brute-force oracle on random data") {
  std::mt19937 rng(20260822);
  for (int i = 0; i < 150; ++i) {
    Dataset ds = testutil::random_dataset(rng, 4, 8, 25);
    STN stn = build_stn(ds);
    auto features = extract_all(ds, stn);
    double global = oracle::global_best(ds);
    for (size_t a = 0; a < ds.algorithms.size(); ++a) {
      CAPTURE(i);
      CAPTURE(a);
      CHECK(features[a].total_best_global_fitness ==
            oracle::eq1_count(ds.algorithms[a], global, ds.sense));
      CHECK(features[a].connectivity ==
            doctest::Approx(oracle::eq2_connectivity(ds.algorithms[a])).epsilon(1e-12));
      CHECK(features[a].avg_fitness ==
            doctest::Approx(oracle::eq3_avg(ds.algorithms[a], ds.sense)).epsilon(1e-12));
    }
  }
}
