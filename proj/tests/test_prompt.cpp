#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "stn/prompt.hpp"

using namespace stn;
namespace fs = std::filesystem;

namespace {

std::vector<AlgorithmFeatures> two_features() {
  AlgorithmFeatures f1{"algo_1", 0, 0.0, 86.75, 10};
  AlgorithmFeatures f2{"algo_2", 1, 28.0 / 45.0, 78.081, 10};
  return {f1, f2};
}

}  // namespace

TEST_CASE("feature sentences format exactly") {
  AlgorithmFeatures f{"algo_2", 1, 28.0 / 45.0, 78.081, 10};
  CHECK(feature_sentences(f) ==
        "algo_2 has 1 nodes pointing to nodes with the best fitness.\n"
        "algo_2 has 0.62 connectivity among all the nodes.\n"
        "algo_2 has an average fitness of 78.081 across 10 trajectories.");
}

TEST_CASE("task b data block formats exactly") {
  PartitionConfig config;
  config.cluster_size_pct = 5;
  config.volume_size_pct = 5;
  config.measure = DistanceMeasure::Euclidean;
  config.cluster_number = 400;
  CHECK(task_b_data_block(config, {207, 574}) ==
        "These are the parameters of the agglomerative clustering algorithm:\n"
        "- cluster size: 5%\n"
        "- volume size: 5%\n"
        "- distance measure: Euclidean\n"
        "- cluster number: 400\n"
        "These are the resulting limits:\n"
        "- minimum possible number of clusters: 207\n"
        "- maximum possible number of clusters: 574");
}

TEST_CASE("task a prompt structure and sense sentence") {
  RenderedPrompt p = render_task_a(two_features(), Sense::Minimize);
  CHECK(p.task == TaskKind::A);
  CHECK(p.attachments.empty());
  size_t ctx = p.text.find("[CONTEXT]\n");
  size_t rules = p.text.find("\n\n[RULES]\n1. ");
  size_t data = p.text.find("\n\n[DATA]\n");
  size_t queries = p.text.find("\n\n[QUERIES]\n");
  CHECK(ctx == 0);
  CHECK(rules != std::string::npos);
  CHECK(data != std::string::npos);
  CHECK(queries != std::string::npos);
  CHECK(rules < data);
  CHECK(data < queries);
  CHECK(p.text.find("address a minimization problem") != std::string::npos);
  CHECK(p.text.find("algo_1 has 0 nodes") != std::string::npos);
  CHECK(p.text.find("[winner=algorithm_name]") != std::string::npos);
  CHECK(p.text.back() == '\n');

  RenderedPrompt q = render_task_a(two_features(), Sense::Maximize);
  CHECK(q.text.find("address a maximization problem") != std::string::npos);

  CHECK_THROWS_AS(render_task_a({two_features()[0]}, Sense::Minimize), InputError);
}

TEST_CASE("task b prompt validates the configuration against the limits") {
  PartitionConfig config;
  config.cluster_size_pct = 5;
  config.volume_size_pct = 5;
  config.cluster_number = 400;

  RenderedPrompt p = render_task_b(config, {207, 574});
  CHECK(p.task == TaskKind::B);
  CHECK(p.text.find("[PARAMETERS DEFINITIONS]\n1. ") != std::string::npos);
  CHECK(p.text.find("4. Cluster number:") != std::string::npos);
  CHECK(p.text.find("[name_parameter=new_value].") != std::string::npos);

  config.cluster_number = 100;  // below the minimum
  CHECK_THROWS_AS(render_task_b(config, {207, 574}), ConstraintError);
  config.cluster_number = 600;  // above the maximum
  CHECK_THROWS_AS(render_task_b(config, {207, 574}), ConstraintError);
  config.cluster_number = 400;
  CHECK_THROWS_AS(render_task_b(config, {0, 574}), ConstraintError);
  config.cluster_size_pct = 0;  // invalid percentage
  CHECK_THROWS_AS(render_task_b(config, {207, 574}), InputError);
}

TEST_CASE("task c prompts attach the tables") {
  CsvTable features = parse_csv(
      "algorithm,best_performance,average_performance\nalgo_1,84.5,86.75\n");
  CsvTable config = parse_csv(
      "configuration,cluster_size,volume_size,cluster_number\nold_configuration,5,5,400\n");
  auto [first, second] = render_task_c(features, config);
  CHECK(first.task == TaskKind::C1);
  CHECK(second.task == TaskKind::C2);
  CHECK(first.text.find("best-performance (in sky blue)") != std::string::npos);
  CHECK(second.text.find("cluster-number (in purple)") != std::string::npos);
  REQUIRE(first.attachments.size() == 1);
  CHECK(first.attachments[0].first == "features.csv");
  CHECK(first.attachments[0].second.find("algo_1") != std::string::npos);
  REQUIRE(second.attachments.size() == 1);
  CHECK(second.attachments[0].first == "config.csv");

  CsvTable wrong = parse_csv("a,b\n1,2\n");
  CHECK_THROWS_AS(render_task_c(wrong, config), InputError);
  CHECK_THROWS_AS(render_task_c(features, wrong), InputError);
  CsvTable headers_only = parse_csv("algorithm,best_performance,average_performance\nx,1,1\n");
  headers_only.rows.clear();
  CHECK_THROWS_AS(render_task_c(headers_only, config), InputError);
}

TEST_CASE("inlining attachments fences them as csv") {
  RenderedPrompt p;
  p.text = "Plot the data.";
  p.attachments.emplace_back("data.csv", "a,b\n1,2\n");
  std::string wire = inline_attachments(p);
  CHECK(wire.find("Plot the data.\n\ndata.csv:\n```csv\na,b\n1,2\n```\n") == 0);
  RenderedPrompt bare;
  bare.text = "No attachments.";
  CHECK(inline_attachments(bare) == "No attachments.");
}

TEST_CASE("asset overrides replace individual pieces") {
  fs::path dir = fs::temp_directory_path() / "stn_assets_test";
  fs::create_directories(dir);
  std::ofstream(dir / "task_a_rule_1.txt") << "Custom first rule.\n";
  std::ofstream(dir / "context.txt") << "Short context.";

  TemplateAssets assets = TemplateAssets::load(dir);
  CHECK(assets.task_a_rules[0] == "Custom first rule.");  // trailing newline dropped
  CHECK(assets.context_text == "Short context.");
  CHECK(assets.task_a_rules[1] == TemplateAssets::defaults().task_a_rules[1]);
  CHECK(assets.task_b_queries == TemplateAssets::defaults().task_b_queries);

  RenderedPrompt p = render_task_a(two_features(), Sense::Minimize, assets);
  CHECK(p.text.find("Custom first rule.") != std::string::npos);
  CHECK(p.text.find("[CONTEXT]\nShort context.\n") == 0);

  CHECK_THROWS_AS(TemplateAssets::load(dir / "no_such_subdir"), InputError);
}

TEST_CASE("task names parse case-insensitively") {
  CHECK(parse_task("A") == TaskKind::A);
  CHECK(parse_task("b") == TaskKind::B);
  CHECK(parse_task("C1") == TaskKind::C1);
  CHECK(parse_task("c2") == TaskKind::C2);
  CHECK(to_string(TaskKind::C1) == "C1");
  CHECK_THROWS_AS(parse_task("D"), InputError);
}
