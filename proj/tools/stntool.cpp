#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "stn/common.hpp"
#include "stn/csv.hpp"
#include "stn/evaluation.hpp"
#include "stn/features.hpp"
#include "stn/llm.hpp"
#include "stn/partitioning.hpp"
#include "stn/prompt.hpp"
#include "stn/reporting.hpp"
#include "stn/stn_graph.hpp"
#include "stn/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stn::InputError(fmt::format("cannot open '{}'", path.string()));
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw stn::InputError(fmt::format("cannot write '{}'", path.string()));
  out << bytes;
}

/// Everything a command needs, resolved from the manifest with command-line
/// overrides already applied.
struct Setup {
  std::vector<std::pair<fs::path, std::string>> inputs;  // file, algorithm
  std::optional<stn::Sense> sense;
  std::optional<stn::Space> space;
  bool partition_enabled = false;
  stn::PartitionConfig partition;
  stn::LLMConfig llm;
  fs::path out_dir = "out";
  std::optional<fs::path> assets_dir;

  stn::TemplateAssets assets() const {
    return assets_dir ? stn::TemplateAssets::load(*assets_dir) : stn::TemplateAssets::defaults();
  }
};

/// All command-line state. Options that override the manifest keep their
/// CLI11 handles so "was it passed?" stays answerable.
struct Cli {
  std::string manifest_path;
  std::vector<std::string> input_specs;
  std::string sense_str, space_str, measure_str;
  double cluster_size = 0.0, volume_size = 0.0;
  int clusters = 0;
  bool no_partition = false;

  std::string endpoint, model, api_key_env;
  double temperature = 0.0, timeout = 0.0, rps = 0.0;
  int max_tokens = 0, retries = 0;

  std::string out_dir, assets_dir;
  bool offline = false, dump_prompt = false;
  int trials = 5;
  std::uint64_t seed = 0;

  std::string task_str;
  std::string cases_dir, votes_path, updates_from;
  std::string csv_path, out_path, title, report_format = "markdown";

  CLI::Option *sense_opt = nullptr, *space_opt = nullptr, *measure_opt = nullptr;
  CLI::Option *cluster_size_opt = nullptr, *volume_size_opt = nullptr, *clusters_opt = nullptr;
  CLI::Option *endpoint_opt = nullptr, *model_opt = nullptr, *api_key_env_opt = nullptr;
  CLI::Option *temperature_opt = nullptr, *timeout_opt = nullptr, *rps_opt = nullptr;
  CLI::Option *max_tokens_opt = nullptr, *retries_opt = nullptr;
  CLI::Option *out_dir_opt = nullptr, *assets_dir_opt = nullptr;
};

fs::path resolve_against(const fs::path& base, const std::string& path) {
  fs::path p(path);
  return p.is_absolute() ? p : base / p;
}

Setup make_setup(const Cli& cli) {
  Setup setup;
  fs::path manifest_dir = ".";

  if (!cli.manifest_path.empty()) {
    manifest_dir = fs::path(cli.manifest_path).parent_path();
    if (manifest_dir.empty()) manifest_dir = ".";
    json m = json::parse(read_text_file(cli.manifest_path), nullptr, /*allow_exceptions=*/false);
    if (m.is_discarded())
      throw stn::InputError(fmt::format("manifest '{}' is not valid JSON", cli.manifest_path));

    for (const auto& input : m.value("inputs", json::array())) {
      if (!input.contains("path") || !input.contains("algorithm"))
        throw stn::InputError("manifest inputs need 'path' and 'algorithm'");
      setup.inputs.emplace_back(resolve_against(manifest_dir, input["path"].get<std::string>()),
                                input["algorithm"].get<std::string>());
    }
    if (m.contains("sense")) setup.sense = stn::parse_sense(m["sense"].get<std::string>());
    if (m.contains("space")) setup.space = stn::parse_space(m["space"].get<std::string>());
    if (m.contains("partition")) {
      const json& p = m["partition"];
      setup.partition_enabled = p.value("enabled", true);
      setup.partition.cluster_size_pct = p.value("cluster_size", 100.0);
      setup.partition.volume_size_pct = p.value("volume_size", 100.0);
      if (p.contains("measure"))
        setup.partition.measure = stn::parse_measure(p["measure"].get<std::string>());
      setup.partition.cluster_number = p.value("cluster_number", 1);
    }
    if (m.contains("llm")) {
      const json& l = m["llm"];
      setup.llm.endpoint_url = l.value("endpoint_url", setup.llm.endpoint_url);
      setup.llm.model_id = l.value("model_id", setup.llm.model_id);
      setup.llm.temperature = l.value("temperature", setup.llm.temperature);
      setup.llm.max_tokens = l.value("max_tokens", setup.llm.max_tokens);
      setup.llm.api_key_env = l.value("api_key_env", setup.llm.api_key_env);
      setup.llm.timeout_seconds = l.value("timeout_seconds", setup.llm.timeout_seconds);
      setup.llm.retries = l.value("retries", setup.llm.retries);
      setup.llm.requests_per_second =
          l.value("requests_per_second", setup.llm.requests_per_second);
    }
    if (m.contains("output_dir"))
      setup.out_dir = resolve_against(manifest_dir, m["output_dir"].get<std::string>());
    if (m.contains("assets_dir"))
      setup.assets_dir = resolve_against(manifest_dir, m["assets_dir"].get<std::string>());
  }

  for (const auto& spec : cli.input_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw stn::InputError(fmt::format("--input expects name=path, got '{}'", spec));
    setup.inputs.emplace_back(fs::path(spec.substr(eq + 1)), spec.substr(0, eq));
  }
  if (cli.sense_opt->count()) setup.sense = stn::parse_sense(cli.sense_str);
  if (cli.space_opt->count()) setup.space = stn::parse_space(cli.space_str);
  if (cli.cluster_size_opt->count()) {
    setup.partition.cluster_size_pct = cli.cluster_size;
    setup.partition_enabled = true;
  }
  if (cli.volume_size_opt->count()) {
    setup.partition.volume_size_pct = cli.volume_size;
    setup.partition_enabled = true;
  }
  if (cli.measure_opt->count()) {
    setup.partition.measure = stn::parse_measure(cli.measure_str);
    setup.partition_enabled = true;
  }
  if (cli.clusters_opt->count()) {
    setup.partition.cluster_number = cli.clusters;
    setup.partition_enabled = true;
  }
  if (cli.no_partition) setup.partition_enabled = false;

  if (cli.endpoint_opt->count()) setup.llm.endpoint_url = cli.endpoint;
  if (cli.model_opt->count()) setup.llm.model_id = cli.model;
  if (cli.api_key_env_opt->count()) setup.llm.api_key_env = cli.api_key_env;
  if (cli.temperature_opt->count()) setup.llm.temperature = cli.temperature;
  if (cli.max_tokens_opt->count()) setup.llm.max_tokens = cli.max_tokens;
  if (cli.retries_opt->count()) setup.llm.retries = cli.retries;
  if (cli.timeout_opt->count()) setup.llm.timeout_seconds = cli.timeout;
  if (cli.rps_opt->count()) setup.llm.requests_per_second = cli.rps;
  if (cli.out_dir_opt->count()) setup.out_dir = cli.out_dir;
  if (cli.assets_dir_opt->count()) setup.assets_dir = cli.assets_dir;
  return setup;
}

struct Analysis {
  stn::Dataset dataset;
  std::optional<stn::PartitionResult> partition;
  std::optional<stn::ClusterLimits> limits;
  stn::STN stn;
  std::vector<stn::AlgorithmFeatures> features;
};

Analysis run_analysis(const Setup& setup) {
  if (setup.inputs.empty())
    throw stn::InputError("no input files; provide a manifest or --input name=path");
  if (!setup.sense) throw stn::InputError("objective sense not set (--sense or manifest)");
  if (!setup.space) throw stn::InputError("solution space not set (--space or manifest)");

  Analysis a;
  a.dataset = stn::load_dataset(setup.inputs, *setup.sense, *setup.space);
  if (setup.partition_enabled) {
    auto solutions = stn::collect_solutions(a.dataset);
    a.limits = stn::cluster_limits(solutions, setup.partition);
    a.partition = stn::partition(solutions, setup.partition);
  }
  a.stn = stn::build_stn(a.dataset, a.partition ? &*a.partition : nullptr);
  a.features = stn::extract_all(a.dataset, a.stn);
  return a;
}

stn::LLMClient make_client(const Setup& setup, bool offline) {
  stn::LLMConfig config = setup.llm;
  if (config.endpoint_url.empty())
    throw stn::InputError("no endpoint configured (--endpoint or manifest llm section)");
  if (offline && !config.endpoint_url.starts_with("stub:"))
    throw stn::InputError(
        fmt::format("--offline permits only stub: endpoints, got '{}'", config.endpoint_url));
  stn::LLMClient client(config);
  client.log_transcripts_to((setup.out_dir / "transcripts.jsonl").string());
  return client;
}

// ---- commands --------------------------------------------------------------

int cmd_analyze(const Setup& setup) {
  Analysis a = run_analysis(setup);
  fs::create_directories(setup.out_dir);
  int files = 0;
  if (a.partition) {
    write_text_file(setup.out_dir / "partition.csv", a.partition->assignments_csv());
    ++files;
  }
  write_text_file(setup.out_dir / "features.csv",
                  stn::performance_table(a.dataset, a.features).to_string());
  write_text_file(setup.out_dir / "stn.dot", stn::export_graph(a.stn, stn::GraphFormat::Dot));
  write_text_file(setup.out_dir / "stn.graphml",
                  stn::export_graph(a.stn, stn::GraphFormat::GraphML));
  files += 3;

  for (const auto& f : a.features) std::cout << stn::feature_sentences(f) << "\n";
  if (a.limits)
    std::cout << fmt::format("cluster limits: [{}, {}], partitioned into {} clusters\n",
                             a.limits->min_clusters, a.limits->max_clusters,
                             a.partition->cluster_count);
  std::cout << fmt::format("wrote {} artifact files to {}\n", files, setup.out_dir.string());
  return 0;
}

std::vector<stn::RenderedPrompt> build_prompts(const Setup& setup, const Analysis& a,
                                               const std::string& task,
                                               const std::string& updates_from) {
  stn::TemplateAssets assets = setup.assets();
  if (task == "A" || task == "a")
    return {stn::render_task_a(a.features, a.dataset.sense, assets)};
  if (task == "B" || task == "b") {
    if (!a.limits)
      throw stn::InputError("task B needs partitioning; enable it in the manifest");
    return {stn::render_task_b(setup.partition, *a.limits, assets)};
  }
  if (task == "C" || task == "c") {
    fs::path reply_path = updates_from.empty() ? setup.out_dir / "task_b_reply.txt"
                                               : fs::path(updates_from);
    if (!fs::exists(reply_path))
      throw stn::InputError(fmt::format(
          "task C builds on a task B reply; '{}' not found (run `ask --task B` or pass "
          "--updates-from)",
          reply_path.string()));
    stn::Verdict verdict = stn::parse_parameter_updates(read_text_file(reply_path));
    if (verdict.kind != stn::VerdictKind::ParameterUpdates)
      throw stn::InputError(fmt::format("'{}' contains no parameter updates ({})",
                                        reply_path.string(), stn::describe(verdict)));
    stn::TaskCCsvs csvs =
        stn::emit_task_c_csvs(a.dataset, a.features, setup.partition, verdict.updates);
    fs::create_directories(setup.out_dir);
    write_text_file(setup.out_dir / "features.csv", csvs.features.to_string());
    write_text_file(setup.out_dir / "config.csv", csvs.config.to_string());
    auto [first, second] = stn::render_task_c(csvs.features, csvs.config, assets);
    return {first, second};
  }
  throw stn::InputError(fmt::format("unknown task '{}' (expected A, B or C)", task));
}

fs::path prompt_file_name(const Setup& setup, stn::TaskKind task) {
  switch (task) {
    case stn::TaskKind::A: return setup.out_dir / "task_a_prompt.txt";
    case stn::TaskKind::B: return setup.out_dir / "task_b_prompt.txt";
    case stn::TaskKind::C1: return setup.out_dir / "task_c1_prompt.txt";
    case stn::TaskKind::C2: return setup.out_dir / "task_c2_prompt.txt";
  }
  throw stn::Error("unreachable");
}

fs::path reply_file_name(const Setup& setup, stn::TaskKind task) {
  switch (task) {
    case stn::TaskKind::A: return setup.out_dir / "task_a_reply.txt";
    case stn::TaskKind::B: return setup.out_dir / "task_b_reply.txt";
    case stn::TaskKind::C1: return setup.out_dir / "task_c1_reply.txt";
    case stn::TaskKind::C2: return setup.out_dir / "task_c2_reply.txt";
  }
  throw stn::Error("unreachable");
}

int cmd_prompt(const Setup& setup, const Cli& cli) {
  Analysis a = run_analysis(setup);
  auto prompts = build_prompts(setup, a, cli.task_str, cli.updates_from);
  fs::create_directories(setup.out_dir);
  for (const auto& prompt : prompts) {
    std::string wire = stn::inline_attachments(prompt);
    fs::path file = prompt_file_name(setup, prompt.task);
    write_text_file(file, wire);
    if (cli.dump_prompt) std::cout << wire;
    else std::cout << fmt::format("wrote {}\n", file.string());
  }
  return 0;
}

int cmd_ask(const Setup& setup, const Cli& cli) {
  Analysis a = run_analysis(setup);
  auto prompts = build_prompts(setup, a, cli.task_str, cli.updates_from);
  fs::create_directories(setup.out_dir);
  stn::LLMClient client = make_client(setup, cli.offline);
  for (const auto& prompt : prompts) {
    std::string wire = stn::inline_attachments(prompt);
    write_text_file(prompt_file_name(setup, prompt.task), wire);
    if (cli.dump_prompt) std::cout << wire;
    stn::LLMReply reply = client.complete(prompt);
    fs::path file = reply_file_name(setup, prompt.task);
    write_text_file(file, reply.text);
    std::cout << fmt::format("task {} reply ({}):\n{}\n", stn::to_string(prompt.task),
                             reply.model_id, reply.text);
  }
  return 0;
}

std::vector<stn::PromptCase> cases_from_run(const Setup& setup) {
  Analysis a = run_analysis(setup);
  std::vector<stn::PromptCase> cases;

  stn::PromptCase case_a;
  case_a.id = "task_a";
  case_a.task = stn::TaskKind::A;
  case_a.prompt = stn::render_task_a(a.features, a.dataset.sense, setup.assets());
  case_a.expected = stn::expected_label(a.features, a.dataset.sense);
  case_a.difficulty = case_a.expected.kind == stn::VerdictKind::Winner ? stn::Difficulty::Easy
                                                                       : stn::Difficulty::Hard;
  cases.push_back(std::move(case_a));

  if (a.limits) {
    stn::PromptCase case_b;
    case_b.id = "task_b";
    case_b.task = stn::TaskKind::B;
    case_b.prompt = stn::render_task_b(setup.partition, *a.limits, setup.assets());
    case_b.expected = stn::Verdict::parameter_updates({});
    case_b.limits = a.limits;
    case_b.difficulty = stn::Difficulty::Easy;
    cases.push_back(std::move(case_b));
  }

  fs::path dir = setup.out_dir / "cases";
  fs::create_directories(dir);
  for (const auto& c : cases) stn::save_case(c, dir / (c.id + ".json"));
  return cases;
}

int cmd_evaluate(const Setup& setup, const Cli& cli) {
  std::vector<stn::PromptCase> cases = cli.cases_dir.empty()
                                           ? cases_from_run(setup)
                                           : stn::load_cases(cli.cases_dir);
  fs::create_directories(setup.out_dir);
  stn::LLMClient client = make_client(setup, cli.offline);

  std::optional<stn::CsvTable> votes;
  if (!cli.votes_path.empty()) votes = stn::parse_csv(read_text_file(cli.votes_path), cli.votes_path);

  std::vector<stn::ScoreCard> cards;
  bool aborted = false;
  for (const auto& prompt_case : cases) {
    stn::ScoreCard card = stn::run_trials(prompt_case, client, cli.trials);
    if (card.model_id.empty()) card.model_id = setup.llm.model_id;
    if (votes) {
      stn::CsvTable subset;
      subset.header = votes->header;
      int case_col = votes->column("case_id");
      if (case_col < 0) throw stn::InputError("votes CSV is missing the 'case_id' column");
      for (const auto& row : votes->rows)
        if (row[case_col] == prompt_case.id) subset.rows.push_back(row);
      if (!subset.rows.empty())
        card.human_score = stn::human_score(subset, {card.model_id}).at(card.model_id);
    }
    if (card.abort_reason) {
      std::cerr << fmt::format("case '{}' aborted: {}\n", card.case_id, *card.abort_reason);
      aborted = true;
    }
    cards.push_back(std::move(card));
  }

  stn::CsvTable table = stn::scorecards_table(cards);
  write_text_file(setup.out_dir / "scorecards.csv", table.to_string());
  std::cout << table.to_string();
  return aborted ? 4 : 0;
}

int cmd_render(const Setup& setup, const Cli& cli) {
  fs::create_directories(setup.out_dir);
  if (!cli.csv_path.empty()) {
    stn::CsvTable table = stn::parse_csv(read_text_file(cli.csv_path), cli.csv_path);
    const auto& palette =
        table.column("configuration") >= 0 ? stn::kConfigPalette : stn::kFeaturesPalette;
    stn::AxesSpec axes;
    axes.title = cli.title;
    std::string svg = stn::render_grouped_bar(table, palette, axes);
    fs::path out = cli.out_path.empty()
                       ? setup.out_dir / (fs::path(cli.csv_path).stem().string() + ".svg")
                       : fs::path(cli.out_path);
    write_text_file(out, svg);
    std::cout << fmt::format("wrote {}\n", out.string());
    return 0;
  }

  // Report mode: gather whatever artifacts a previous run left behind.
  stn::ReportArtifacts artifacts;
  struct TaskFiles {
    const char* name;
    const char* prompt;
    std::vector<const char*> replies;
    bool winner_grammar;
  };
  const std::vector<TaskFiles> known = {
      {"Task A", "task_a_prompt.txt", {"task_a_reply.txt"}, true},
      {"Task B", "task_b_prompt.txt", {"task_b_reply.txt"}, false},
      {"Task C (performance plot)", "task_c1_prompt.txt", {"task_c1_reply.txt"}, false},
      {"Task C (configuration plot)", "task_c2_prompt.txt", {"task_c2_reply.txt"}, false},
  };
  for (const auto& tf : known) {
    fs::path prompt_path = setup.out_dir / tf.prompt;
    if (!fs::exists(prompt_path)) continue;
    stn::TaskRecord record;
    record.name = tf.name;
    record.prompt_text = read_text_file(prompt_path);
    for (const char* reply_name : tf.replies) {
      fs::path reply_path = setup.out_dir / reply_name;
      if (!fs::exists(reply_path)) continue;
      std::string reply = read_text_file(reply_path);
      if (std::string_view(tf.name).substr(0, 6) == "Task A")
        record.verdicts.push_back(stn::describe(stn::parse_winner(reply)));
      else if (std::string_view(tf.name).substr(0, 6) == "Task B")
        record.verdicts.push_back(stn::describe(stn::parse_parameter_updates(reply)));
      record.replies.push_back(std::move(reply));
    }
    artifacts.tasks.push_back(std::move(record));
  }

  if (fs::exists(setup.out_dir / "features.csv")) {
    stn::CsvTable table =
        stn::parse_csv(read_text_file(setup.out_dir / "features.csv"), "features.csv");
    std::string svg = stn::render_grouped_bar(table, stn::kFeaturesPalette,
                                              {"Algorithm performance", "", ""});
    write_text_file(setup.out_dir / "features.svg", svg);
    artifacts.plots.emplace_back("Algorithm performance", svg);
  }
  if (fs::exists(setup.out_dir / "config.csv")) {
    stn::CsvTable table =
        stn::parse_csv(read_text_file(setup.out_dir / "config.csv"), "config.csv");
    std::string svg = stn::render_grouped_bar(table, stn::kConfigPalette,
                                              {"Clustering configuration", "", ""});
    write_text_file(setup.out_dir / "config.svg", svg);
    artifacts.plots.emplace_back("Clustering configuration", svg);
  }
  if (fs::exists(setup.out_dir / "scorecards.csv"))
    artifacts.scorecards =
        stn::parse_csv(read_text_file(setup.out_dir / "scorecards.csv"), "scorecards.csv");

  stn::ReportFormat format;
  if (cli.report_format == "markdown" || cli.report_format == "md")
    format = stn::ReportFormat::Markdown;
  else if (cli.report_format == "html")
    format = stn::ReportFormat::Html;
  else
    throw stn::InputError(fmt::format("unknown report format '{}'", cli.report_format));

  std::string report = stn::assemble_report(artifacts, format);
  fs::path out = cli.out_path.empty()
                     ? setup.out_dir / (format == stn::ReportFormat::Html ? "report.html"
                                                                          : "report.md")
                     : fs::path(cli.out_path);
  write_text_file(out, report);
  std::cout << fmt::format("wrote {}\n", out.string());
  return 0;
}

int cmd_export(const Setup& setup, const Cli& cli, const std::string& format_str) {
  Analysis a = run_analysis(setup);
  fs::create_directories(setup.out_dir);
  if (!format_str.empty()) {
    stn::GraphFormat format = stn::parse_graph_format(format_str);
    fs::path out = cli.out_path.empty()
                       ? setup.out_dir / (format == stn::GraphFormat::Dot ? "stn.dot"
                                                                          : "stn.graphml")
                       : fs::path(cli.out_path);
    write_text_file(out, stn::export_graph(a.stn, format));
    std::cout << fmt::format("wrote {}\n", out.string());
    return 0;
  }
  write_text_file(setup.out_dir / "stn.dot", stn::export_graph(a.stn, stn::GraphFormat::Dot));
  write_text_file(setup.out_dir / "stn.graphml",
                  stn::export_graph(a.stn, stn::GraphFormat::GraphML));
  std::cout << fmt::format("wrote {} and {}\n", (setup.out_dir / "stn.dot").string(),
                           (setup.out_dir / "stn.graphml").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"Search trajectory network analysis with LLM-assisted interpretation"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("-m,--manifest", cli.manifest_path, "Run manifest (JSON)");
  app.add_option("--input", cli.input_specs, "Extra input as name=path (repeatable)");
  cli.sense_opt = app.add_option("--sense", cli.sense_str, "Objective sense: minimize|maximize");
  cli.space_opt = app.add_option("--space", cli.space_str, "Solution space: discrete|continuous");
  cli.cluster_size_opt =
      app.add_option("--cluster-size", cli.cluster_size, "Max cluster size, % of all solutions");
  cli.volume_size_opt =
      app.add_option("--volume-size", cli.volume_size, "Max cluster volume, % of search space");
  cli.measure_opt =
      app.add_option("--measure", cli.measure_str, "Distance: hamming|euclidean|manhattan");
  cli.clusters_opt = app.add_option("--clusters", cli.clusters, "Target cluster number");
  app.add_flag("--no-partition", cli.no_partition, "Skip search space partitioning");
  cli.endpoint_opt = app.add_option("--endpoint", cli.endpoint, "Chat endpoint URL or stub:");
  cli.model_opt = app.add_option("--model", cli.model, "Model identifier");
  cli.api_key_env_opt =
      app.add_option("--api-key-env", cli.api_key_env, "Env var holding the API key");
  cli.temperature_opt = app.add_option("--temperature", cli.temperature, "Sampling temperature");
  cli.max_tokens_opt = app.add_option("--max-tokens", cli.max_tokens, "Response token limit");
  cli.retries_opt = app.add_option("--retries", cli.retries, "Retries after a failed attempt");
  cli.timeout_opt = app.add_option("--timeout", cli.timeout, "Request timeout in seconds");
  cli.rps_opt = app.add_option("--rps", cli.rps, "Requests per second (0 = unlimited)");
  cli.out_dir_opt = app.add_option("-o,--out-dir", cli.out_dir, "Output directory");
  cli.assets_dir_opt =
      app.add_option("--assets", cli.assets_dir, "Directory with prompt asset overrides");
  app.add_flag("--offline", cli.offline, "Allow only deterministic stub: endpoints");
  app.add_flag("--dump-prompt", cli.dump_prompt, "Print the exact bytes sent to the endpoint");
  app.add_option("--seed", cli.seed, "Seed for randomized data generation (reserved)");

  auto* analyze = app.add_subcommand("analyze", "Extract features and export the STN");
  auto* prompt = app.add_subcommand("prompt", "Render prompt files");
  prompt->add_option("--task", cli.task_str, "Task: A, B or C")->required();
  prompt->add_option("--updates-from", cli.updates_from, "Task B reply file for task C");
  auto* ask = app.add_subcommand("ask", "Render prompts and query the endpoint");
  ask->add_option("--task", cli.task_str, "Task: A, B or C")->required();
  ask->add_option("--updates-from", cli.updates_from, "Task B reply file for task C");
  auto* evaluate = app.add_subcommand("evaluate", "Run repeated trials and score them");
  evaluate->add_option("--cases", cli.cases_dir, "Directory of case JSON files");
  evaluate->add_option("--trials", cli.trials, "Trials per case (default 5)");
  evaluate->add_option("--votes", cli.votes_path, "Human vote CSV");
  auto* render = app.add_subcommand("render", "Render plots, or assemble the report");
  render->add_option("--csv", cli.csv_path, "CSV to plot as grouped bars");
  render->add_option("--out", cli.out_path, "Output file");
  render->add_option("--title", cli.title, "Plot title");
  render->add_option("--format", cli.report_format, "Report format: markdown|html");
  std::string export_format;
  auto* export_cmd = app.add_subcommand("export", "Export the STN graph");
  export_cmd->add_option("--format", export_format, "Graph format: dot|graphml");
  export_cmd->add_option("--out", cli.out_path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Setup setup = make_setup(cli);
    if (*analyze) return cmd_analyze(setup);
    if (*prompt) return cmd_prompt(setup, cli);
    if (*ask) return cmd_ask(setup, cli);
    if (*evaluate) return cmd_evaluate(setup, cli);
    if (*render) return cmd_render(setup, cli);
    if (*export_cmd) return cmd_export(setup, cli, export_format);
    throw stn::Error("no command dispatched");
  } catch (const stn::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const stn::ConstraintError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const stn::EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
