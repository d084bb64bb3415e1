#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stn/partitioning.hpp"
#include "stn/stn_graph.hpp"
#include "stn/trajectory.hpp"

using namespace stn;

namespace {

Dataset two_algo_dataset() {
  Dataset ds;
  ds.sense = Sense::Minimize;
  ds.space = Space::Continuous;
  // a1 run 1: A(10) -> B(5); a1 run 2: A(9) -> C(7)
  // a2 run 1: B(6) -> B(6) -> D(3)   (consecutive revisit collapses)
  ds.algorithms.push_back(parse_trajectory_text("1\t10\t0,0\n1\t5\t1,0\n2\t9\t0,0\n2\t7\t2,0\n",
                                                "a1", Space::Continuous));
  ds.algorithms.push_back(
      parse_trajectory_text("1\t6\t1,0\n1\t6\t1,0\n1\t3\t3,0\n", "a2", Space::Continuous));
  return ds;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("nodes, roles and visits") {
  Dataset ds = two_algo_dataset();
  STN stn = build_stn(ds);

  CHECK(stn.algorithms == std::vector<std::string>{"a1", "a2"});
  CHECK(stn.best_global_fitness == doctest::Approx(3.0));
  REQUIRE(stn.nodes.size() == 4);  // A, B, C, D

  int a = stn.node_index("0,0"), b = stn.node_index("1,0");
  int c = stn.node_index("2,0"), d = stn.node_index("3,0");
  REQUIRE(a >= 0);
  REQUIRE(b >= 0);
  REQUIRE(c >= 0);
  REQUIRE(d >= 0);
  CHECK(stn.node_index("9,9") == -1);

  CHECK(stn.nodes[a].is_start);
  CHECK(!stn.nodes[a].is_end);
  CHECK(stn.nodes[b].is_start);  // a2 starts at B
  CHECK(stn.nodes[b].is_end);    // a1 run 1 ends at B
  CHECK(stn.nodes[d].is_end);
  CHECK(stn.nodes[d].is_best);
  CHECK(!stn.nodes[a].is_best);

  // Visits count distinct trajectories, not step repetitions.
  CHECK(stn.nodes[a].visits.at("a1") == 2);
  CHECK(stn.nodes[b].visits.at("a1") == 1);
  CHECK(stn.nodes[b].visits.at("a2") == 1);
  CHECK(stn.nodes[b].is_shared);
  CHECK(!stn.nodes[a].is_shared);
  CHECK(!stn.nodes[d].is_shared);

  CHECK(stn.nodes[d].best_fitness_at_node == doctest::Approx(3.0));
  CHECK(stn.nodes[b].best_fitness_at_node == doctest::Approx(5.0));
}

TEST_CASE("consecutive duplicates collapse without self-loops") {
  Dataset ds = two_algo_dataset();
  STN stn = build_stn(ds);
  int b = stn.node_index("1,0"), d = stn.node_index("3,0");
  REQUIRE(stn.walks.size() == 2);
  CHECK(stn.walks[1][0] == std::vector<int>{b, d});  // B B D collapsed to B D
  for (const auto& e : stn.edges) CHECK(e.from != e.to);
}

TEST_CASE("edge traversals accumulate per algorithm") {
  Dataset ds;
  ds.sense = Sense::Minimize;
  ds.space = Space::Continuous;
  // Two runs of the same algorithm walk the same edge.
  ds.algorithms.push_back(parse_trajectory_text("1\t2\t0,0\n1\t1\t1,0\n2\t2\t0,0\n2\t1\t1,0\n",
                                                "a1", Space::Continuous));
  STN stn = build_stn(ds);
  REQUIRE(stn.edges.size() == 1);
  CHECK(stn.edges[0].traversals.at("a1") == 2);
  int a = stn.node_index("0,0");
  CHECK(stn.nodes[a].visits.at("a1") == 2);
}

TEST_CASE("partitioned build maps locations to cluster nodes") {
  Dataset ds;
  ds.sense = Sense::Minimize;
  ds.space = Space::Continuous;
  ds.algorithms.push_back(
      parse_trajectory_text("1\t5\t0,0\n1\t4\t1,0\n1\t3\t10,0\n", "a1", Space::Continuous));
  PartitionConfig config;
  config.cluster_number = 2;
  PartitionResult part = partition(collect_solutions(ds), config);
  STN stn = build_stn(ds, &part);

  // 0,0 and 1,0 fall into one cluster: their consecutive steps collapse.
  REQUIRE(stn.nodes.size() == 2);
  REQUIRE(stn.edges.size() == 1);
  CHECK(stn.walks[0][0].size() == 2);
  CHECK(stn.nodes[0].id.substr(0, 1) == "c");
  CHECK(stn.nodes[stn.walks[0][0][0]].best_fitness_at_node == doctest::Approx(4.0));
}

TEST_CASE("dot export carries roles, visits and colors") {
  Dataset ds = two_algo_dataset();
  STN stn = build_stn(ds);
  std::string dot = export_graph(stn, GraphFormat::Dot);

  CHECK(dot.substr(0, 12) == "digraph stn ");
  CHECK(dot.find("\"3,0\"") != std::string::npos);
  CHECK(dot.find("best=true") != std::string::npos);
  CHECK(dot.find("shared=true") != std::string::npos);
  CHECK(dot.find("visits_a1=2") != std::string::npos);
  CHECK(dot.find("\"1,0\" -> \"3,0\"") != std::string::npos);
  CHECK(dot.find("traversals_a1=1") != std::string::npos);
  CHECK(dot.find(algorithm_color(0)) != std::string::npos);
  CHECK(dot.find(algorithm_color(1)) != std::string::npos);
  CHECK(count_occurrences(dot, "->") == static_cast<int>(stn.edges.size()));
}

TEST_CASE("graphml export declares typed keys") {
  Dataset ds = two_algo_dataset();
  STN stn = build_stn(ds);
  std::string xml = export_graph(stn, GraphFormat::GraphML);

  CHECK(xml.find("<graphml") != std::string::npos);
  CHECK(xml.find("http://graphml.graphdrawing.org/xmlns") != std::string::npos);
  CHECK(xml.find("attr.name=\"best\"") != std::string::npos);
  CHECK(xml.find("attr.type=\"boolean\"") != std::string::npos);
  CHECK(xml.find("attr.name=\"visits_a1\"") != std::string::npos);
  CHECK(xml.find("<node id=\"3,0\">") != std::string::npos);
  CHECK(xml.find("<edge") != std::string::npos);
  CHECK(count_occurrences(xml, "<node ") == 4);
}

TEST_CASE("algorithm colors are deterministic and cycle") {
  CHECK(algorithm_color(0) == algorithm_color(8));
  CHECK(algorithm_color(0) != algorithm_color(1));
  CHECK(algorithm_color(3).substr(0, 1) == "#");
}

TEST_CASE("graph format parsing") {
  CHECK(parse_graph_format("dot") == GraphFormat::Dot);
  CHECK(parse_graph_format("graphml") == GraphFormat::GraphML);
  CHECK_THROWS_AS(parse_graph_format("gexf"), InputError);
}
