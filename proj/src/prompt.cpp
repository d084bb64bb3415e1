#include "stn/prompt.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>

#include "stn/common.hpp"

namespace stn {

std::string to_string(TaskKind task) {
  switch (task) {
    case TaskKind::A: return "A";
    case TaskKind::B: return "B";
    case TaskKind::C1: return "C1";
    case TaskKind::C2: return "C2";
  }
  throw Error("unreachable");
}

TaskKind parse_task(const std::string& s) {
  if (s == "A" || s == "a") return TaskKind::A;
  if (s == "B" || s == "b") return TaskKind::B;
  if (s == "C1" || s == "c1") return TaskKind::C1;
  if (s == "C2" || s == "c2") return TaskKind::C2;
  throw InputError(fmt::format("unknown task '{}' (expected A, B, C1 or C2)", s));
}

const TemplateAssets& TemplateAssets::defaults() {
  static const TemplateAssets assets = [] {
    TemplateAssets a;
    a.context_text =
        "STNWeb is a web tool for the visual analysis of the behavior of optimization "
        "algorithms. It draws a Search Trajectory Network (STN): a directed graph in which "
        "every node is a location of the search space visited by an algorithm run, and every "
        "edge is a transition between two locations observed in a run. A trajectory is the "
        "ordered sequence of locations traversed by one run of one algorithm. Node size grows "
        "with the number of trajectories passing through the node, start and end locations are "
        "marked, and locations whose fitness equals the best fitness found by any of the "
        "compared algorithms are highlighted. For large search spaces, solutions are first "
        "grouped by agglomerative clustering, in which case every node represents a cluster of "
        "similar solutions.";
    a.task_a_rules = {
        "The more nodes point to nodes of the best fitness (this does not assume that it "
        "represents the global optimum), the higher the algorithm's quality because it can "
        "obtain a better result.",
        "The algorithm that has more inter-trajectory connectivity is likely to be more "
        "robust. If and only if it finds nodes of the best fitness.",
        "For a minimization problem, indicating that an algorithm is superior involves "
        "favoring a smaller average fitness value. Whereas in the case of maximization, "
        "declaring an algorithm as better necessitates a higher average fitness value."};
    a.task_b_parameter_definitions = {
        "Cluster size (percentage): Maximal cluster size in terms of the percentage of all "
        "solutions a cluster contains.",
        "Volume size (percentage): Maximal cluster size in terms of the percentage of the "
        "covered search space volume spanned by the solutions a cluster contains.",
        "Distance measure: A function that measures the distance between solutions, "
        "influencing the creation of clusters. Possible values: Hamming, Euclidean, "
        "Manhattan.",
        "Cluster number: Number of clusters obtained for these solutions (from lowest to "
        "highest partitioning). The maximum number implies no partitioning, while lower "
        "values result in increased partitioning. Good results are obtained when the cluster "
        "number is above the minimum value but far from the maximum."};
    a.task_a_queries =
        "Determine if there is a clear winner among the compared algorithms. Provide the "
        "winner in square brackets using the format [winner=algorithm_name], or indicate a "
        "[draw] if their performance is similar. The square brackets must solely enclose the "
        "winner declaration.";
    a.task_b_queries =
        "Suggest new values for these parameters so that the resulting STN graphic becomes "
        "easier to interpret. The new numerical values must be presented in the format: "
        "[name_parameter=new_value].";
    a.task_c_prompts = {
        "Generate a grouped bar plot, considering both the best-performance (in sky blue) "
        "and the average-performance (in orange).",
        "Generate a grouped bar plot with the X-axis representing the old_configuration and "
        "new_configuration, and the Y-axis representing cluster-size (in sky blue), "
        "volume-size (in orange), and cluster-number (in purple)."};
    return a;
  }();
  return assets;
}

namespace {

/// Reads an override file, dropping one trailing newline so that editor
/// conventions do not leak into prompt bytes. Missing file: nullopt.
std::optional<std::string> read_override(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return text;
}

std::string measure_display(DistanceMeasure m) {
  switch (m) {
    case DistanceMeasure::Hamming: return "Hamming";
    case DistanceMeasure::Euclidean: return "Euclidean";
    case DistanceMeasure::Manhattan: return "Manhattan";
  }
  throw Error("unreachable");
}

}  // namespace

TemplateAssets TemplateAssets::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InputError(fmt::format("asset directory '{}' does not exist", dir.string()));
  TemplateAssets a = defaults();
  auto apply = [&](const char* name, std::string& slot) {
    if (auto text = read_override(dir / name)) slot = *text;
  };
  apply("context.txt", a.context_text);
  for (int i = 0; i < 3; ++i)
    apply(fmt::format("task_a_rule_{}.txt", i + 1).c_str(), a.task_a_rules[i]);
  for (int i = 0; i < 4; ++i)
    apply(fmt::format("task_b_parameter_{}.txt", i + 1).c_str(), a.task_b_parameter_definitions[i]);
  apply("task_a_queries.txt", a.task_a_queries);
  apply("task_b_queries.txt", a.task_b_queries);
  apply("task_c_prompt_1.txt", a.task_c_prompts[0]);
  apply("task_c_prompt_2.txt", a.task_c_prompts[1]);
  return a;
}

std::string feature_sentences(const AlgorithmFeatures& f) {
  return fmt::format(
      "{0} has {1} nodes pointing to nodes with the best fitness.\n"
      "{0} has {2:.2f} connectivity among all the nodes.\n"
      "{0} has an average fitness of {3:.3f} across {4} trajectories.",
      f.algorithm, f.total_best_global_fitness, f.connectivity, f.avg_fitness,
      f.trajectory_count);
}

std::string task_b_data_block(const PartitionConfig& config, const ClusterLimits& limits) {
  return fmt::format(
      "These are the parameters of the agglomerative clustering algorithm:\n"
      "- cluster size: {}%\n"
      "- volume size: {}%\n"
      "- distance measure: {}\n"
      "- cluster number: {}\n"
      "These are the resulting limits:\n"
      "- minimum possible number of clusters: {}\n"
      "- maximum possible number of clusters: {}",
      config.cluster_size_pct, config.volume_size_pct, measure_display(config.measure),
      config.cluster_number, limits.min_clusters, limits.max_clusters);
}

RenderedPrompt render_task_a(const std::vector<AlgorithmFeatures>& features, Sense sense,
                             const TemplateAssets& assets) {
  if (features.size() < 2)
    throw InputError("task A compares algorithms and needs at least two of them");
  std::string data;
  for (const auto& f : features) {
    if (!data.empty()) data += '\n';
    data += feature_sentences(f);
  }
  RenderedPrompt prompt;
  prompt.task = TaskKind::A;
  prompt.text = fmt::format(
      "[CONTEXT]\n{}\nThe compared algorithms address a {} problem.\n\n"
      "[RULES]\n1. {}\n2. {}\n3. {}\n\n"
      "[DATA]\n{}\n\n"
      "[QUERIES]\n{}\n",
      assets.context_text, sense == Sense::Minimize ? "minimization" : "maximization",
      assets.task_a_rules[0], assets.task_a_rules[1], assets.task_a_rules[2], data,
      assets.task_a_queries);
  return prompt;
}

RenderedPrompt render_task_b(const PartitionConfig& config, const ClusterLimits& limits,
                             const TemplateAssets& assets) {
  config.validate();
  if (limits.min_clusters < 1 || limits.min_clusters > limits.max_clusters)
    throw ConstraintError(fmt::format("inconsistent cluster limits [{}, {}]",
                                      limits.min_clusters, limits.max_clusters));
  if (config.cluster_number < limits.min_clusters || config.cluster_number > limits.max_clusters)
    throw ConstraintError(
        fmt::format("cluster_number {} lies outside the limits [{}, {}]", config.cluster_number,
                    limits.min_clusters, limits.max_clusters));
  RenderedPrompt prompt;
  prompt.task = TaskKind::B;
  prompt.text = fmt::format(
      "[CONTEXT]\n{}\n\n"
      "[PARAMETERS DEFINITIONS]\n1. {}\n2. {}\n3. {}\n4. {}\n\n"
      "[DATA]\n{}\n\n"
      "[QUERIES]\n{}\n",
      assets.context_text, assets.task_b_parameter_definitions[0],
      assets.task_b_parameter_definitions[1], assets.task_b_parameter_definitions[2],
      assets.task_b_parameter_definitions[3], task_b_data_block(config, limits),
      assets.task_b_queries);
  return prompt;
}

std::pair<RenderedPrompt, RenderedPrompt> render_task_c(const CsvTable& features_csv,
                                                        const CsvTable& config_csv,
                                                        const TemplateAssets& assets) {
  features_csv.require_columns({"algorithm", "best_performance", "average_performance"},
                               "features CSV");
  config_csv.require_columns({"configuration", "cluster_size", "volume_size", "cluster_number"},
                             "config CSV");
  if (features_csv.rows.empty()) throw InputError("features CSV has no data rows");
  if (config_csv.rows.empty()) throw InputError("config CSV has no data rows");

  RenderedPrompt first;
  first.task = TaskKind::C1;
  first.text = assets.task_c_prompts[0];
  first.attachments.emplace_back("features.csv", features_csv.to_string());

  RenderedPrompt second;
  second.task = TaskKind::C2;
  second.text = assets.task_c_prompts[1];
  second.attachments.emplace_back("config.csv", config_csv.to_string());
  return {std::move(first), std::move(second)};
}

std::string inline_attachments(const RenderedPrompt& prompt) {
  std::string out = prompt.text;
  for (const auto& [name, bytes] : prompt.attachments) {
    out += fmt::format("\n\n{}:\n```csv\n", name);
    out += bytes;
    if (!bytes.empty() && bytes.back() != '\n') out += '\n';
    out += "```";
  }
  if (!prompt.attachments.empty()) out += '\n';
  return out;
}

}  // namespace stn
