#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stn/csv.hpp"
#include "stn/features.hpp"
#include "stn/partitioning.hpp"

namespace stn {

enum class TaskKind { A, B, C1, C2 };

std::string to_string(TaskKind task);
TaskKind parse_task(const std::string& s);

/// The static texts the prompts are built from. The defaults carry the
/// canonical rule and instruction wording; every piece can be overridden
/// from a directory of plain-text files so the assets stay editable without
/// recompiling (see load()).
struct TemplateAssets {
  std::string context_text;
  std::array<std::string, 3> task_a_rules;
  std::array<std::string, 4> task_b_parameter_definitions;
  std::string task_a_queries;
  std::string task_b_queries;
  std::array<std::string, 2> task_c_prompts;

  static const TemplateAssets& defaults();

  /// Defaults with any override file found in `dir` applied. Recognized
  /// file names: context.txt, task_a_rule_{1..3}.txt, task_b_parameter_{1..4}.txt,
  /// task_a_queries.txt, task_b_queries.txt, task_c_prompt_{1,2}.txt.
  /// A single trailing newline in a file is ignored.
  static TemplateAssets load(const std::filesystem::path& dir);
};

/// A prompt ready for submission: full text plus (for the plot task) CSV
/// attachments as (filename, bytes) pairs.
struct RenderedPrompt {
  TaskKind task = TaskKind::A;
  std::string text;
  std::vector<std::pair<std::string, std::string>> attachments;
};

/// The three per-algorithm data sentences, one per line.
std::string feature_sentences(const AlgorithmFeatures& features);

/// The parameter/limit paragraph of the task B data block.
std::string task_b_data_block(const PartitionConfig& config, const ClusterLimits& limits);

/// Task A prompt: [CONTEXT] / [RULES] / [DATA] / [QUERIES]. Needs at least
/// two algorithms to compare.
RenderedPrompt render_task_a(const std::vector<AlgorithmFeatures>& features, Sense sense,
                             const TemplateAssets& assets = TemplateAssets::defaults());

/// Task B prompt: [CONTEXT] / [PARAMETERS DEFINITIONS] / [DATA] / [QUERIES].
/// The configured cluster number must lie within the limits.
RenderedPrompt render_task_b(const PartitionConfig& config, const ClusterLimits& limits,
                             const TemplateAssets& assets = TemplateAssets::defaults());

/// The two static plot prompts with their CSV attachments. Both tables are
/// validated against the expected headers.
std::pair<RenderedPrompt, RenderedPrompt> render_task_c(
    const CsvTable& features_csv, const CsvTable& config_csv,
    const TemplateAssets& assets = TemplateAssets::defaults());

/// The exact bytes submitted to an endpoint: the prompt text, followed by
/// each attachment inlined as a fenced csv block.
std::string inline_attachments(const RenderedPrompt& prompt);

}  // namespace stn
