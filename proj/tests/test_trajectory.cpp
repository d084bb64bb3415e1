#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "stn/trajectory.hpp"
#include "testutil.hpp"

using namespace stn;
using testutil::error_message;
namespace fs = std::filesystem;

TEST_CASE("parses runs in order with grouped steps") {
  std::string text =
      "1\t10\t0,0\n"
      "1\t8\t1,1\n"
      "2\t9.5\t0,0\n"
      "1\t7\t2,2\n";
  AlgorithmRuns runs = parse_trajectory_text(text, "a1", Space::Continuous);
  CHECK(runs.name == "a1");
  REQUIRE(runs.trajectories.size() == 2);
  CHECK(runs.trajectories[0].run_id == 1);
  CHECK(runs.trajectories[0].steps.size() == 3);  // late line joins run 1
  CHECK(runs.trajectories[1].steps.size() == 1);
  CHECK(runs.trajectories[0].steps[2].fitness == doctest::Approx(7.0));
  CHECK(runs.trajectories[0].steps[1].solution.coords()[0] == doctest::Approx(1.0));
}

TEST_CASE("discrete solutions keep their token") {
  AlgorithmRuns runs = parse_trajectory_text("1\t3\tabba\n", "a", Space::Discrete);
  CHECK(runs.trajectories[0].steps[0].solution.kind() == Space::Discrete);
  CHECK(runs.trajectories[0].steps[0].solution.token() == "abba");
  CHECK(runs.trajectories[0].steps[0].solution.key() == "abba");
}

TEST_CASE("malformed lines carry origin and line number") {
  CHECK_THROWS_AS(parse_trajectory_text("1\t10\n", "a", Space::Continuous, "runs.tsv"),
                  InputError);
  CHECK(error_message([] { parse_trajectory_text("1\t10\n", "a", Space::Continuous, "runs.tsv"); })
            .find("runs.tsv:1") != std::string::npos);
  CHECK(error_message([] {
          parse_trajectory_text("1\t10\t0,0\n1\tnope\t1,1\n", "a", Space::Continuous, "runs.tsv");
        }).find("runs.tsv:2") != std::string::npos);
  CHECK_THROWS_AS(parse_trajectory_text("1\t1\t1,x\n", "a", Space::Continuous), InputError);
  CHECK_THROWS_AS(parse_trajectory_text("", "a", Space::Continuous), InputError);
}

TEST_CASE("dimension must be uniform within a file") {
  CHECK_THROWS_AS(parse_trajectory_text("1\t1\t0,0\n1\t2\t0,0,0\n", "a", Space::Continuous),
                  InputError);
}

TEST_CASE("best and final fitness respect the sense") {
  AlgorithmRuns runs =
      parse_trajectory_text("1\t5\t0,0\n1\t9\t1,0\n1\t7\t2,0\n", "a", Space::Continuous);
  const Trajectory& t = runs.trajectories[0];
  CHECK(t.best_fitness(Sense::Minimize) == doctest::Approx(5.0));
  CHECK(t.best_fitness(Sense::Maximize) == doctest::Approx(9.0));
  CHECK(t.final_fitness() == doctest::Approx(7.0));
}

TEST_CASE("tsv serialization round-trips") {
  std::string text = "1\t10.5\t0,3\n1\t8\t1,1\n7\t9\t0,3\n";
  AlgorithmRuns runs = parse_trajectory_text(text, "a", Space::Continuous);
  AlgorithmRuns again = parse_trajectory_text(to_tsv(runs), "a", Space::Continuous);
  CHECK(runs == again);
}

TEST_CASE("load_dataset validates names and dimensions across files") {
  fs::path dir = fs::temp_directory_path() / "stn_traj_test";
  fs::create_directories(dir);
  std::ofstream(dir / "a.tsv") << "1\t1\t0,0\n";
  std::ofstream(dir / "b.tsv") << "1\t2\t1,1\n";
  std::ofstream(dir / "c.tsv") << "1\t2\t1,1,1\n";

  Dataset ds = load_dataset({{dir / "a.tsv", "a"}, {dir / "b.tsv", "b"}}, Sense::Minimize,
                            Space::Continuous);
  CHECK(ds.algorithms.size() == 2);
  CHECK(ds.best_global_fitness() == doctest::Approx(1.0));
  ds.sense = Sense::Maximize;
  CHECK(ds.best_global_fitness() == doctest::Approx(2.0));

  CHECK_THROWS_AS(load_dataset({{dir / "a.tsv", "a"}, {dir / "b.tsv", "a"}}, Sense::Minimize,
                               Space::Continuous),
                  InputError);
  CHECK_THROWS_AS(load_dataset({{dir / "a.tsv", "a"}, {dir / "c.tsv", "c"}}, Sense::Minimize,
                               Space::Continuous),
                  InputError);
  CHECK_THROWS_AS(
      load_dataset({{dir / "missing.tsv", "m"}}, Sense::Minimize, Space::Continuous),
      InputError);
}

TEST_CASE("gzip-compressed input parses transparently") {
  fs::path dir = fs::temp_directory_path() / "stn_traj_test";
  fs::create_directories(dir);
  fs::path gz = dir / "runs.tsv.gz";
  {
    std::string raw = "1\t4\t0,0\n1\t3\t1,1\n";
    std::ofstream plain(dir / "runs.tsv", std::ios::binary);
    plain << raw;
  }
  REQUIRE(std::system(("gzip -kf '" + (dir / "runs.tsv").string() + "'").c_str()) == 0);
  AlgorithmRuns runs = parse_trajectory_file(gz, "a", Space::Continuous);
  REQUIRE(runs.trajectories.size() == 1);
  CHECK(runs.trajectories[0].steps.size() == 2);
  CHECK(runs.trajectories[0].best_fitness(Sense::Minimize) == doctest::Approx(3.0));
}
