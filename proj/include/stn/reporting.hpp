#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stn/csv.hpp"
#include "stn/features.hpp"
#include "stn/partitioning.hpp"
#include "stn/trajectory.hpp"

namespace stn {

inline const std::vector<std::string> kFeaturesPalette = {"#87CEEB", "#FFA500"};
inline const std::vector<std::string> kConfigPalette = {"#87CEEB", "#FFA500", "#800080"};

inline constexpr const char* kFeaturesCsvHeader = "algorithm,best_performance,average_performance";
inline constexpr const char* kConfigCsvHeader = "configuration,cluster_size,volume_size,cluster_number";

/// The two tables attached to the plot prompts: per-algorithm performance,
/// and old vs. suggested clustering configuration.
struct TaskCCsvs {
  CsvTable features;  // algorithm,best_performance,average_performance
  CsvTable config;    // configuration,cluster_size,volume_size,cluster_number
};

/// best_performance is the best trajectory fitness of the algorithm;
/// average_performance its mean best fitness.
CsvTable performance_table(const Dataset& dataset,
                           const std::vector<AlgorithmFeatures>& features);

/// Old vs. suggested clustering configuration: an old_configuration row from
/// `old_config` and a new_configuration row with the suggested values
/// applied; parameters without a suggestion carry over.
CsvTable configuration_table(const PartitionConfig& old_config,
                             std::span<const ParameterUpdate> updates);

/// Bundles the two tables above for the plot prompts.
TaskCCsvs emit_task_c_csvs(const Dataset& dataset,
                           const std::vector<AlgorithmFeatures>& features,
                           const PartitionConfig& old_config,
                           std::span<const ParameterUpdate> updates);

struct AxesSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Renders a grouped bar chart as standalone SVG. The first CSV column is
/// the category axis; every further column is one numeric series, colored by
/// palette position. Bars are linear in value and carry class="bar".
std::string render_grouped_bar(const CsvTable& csv, const std::vector<std::string>& palette,
                               const AxesSpec& axes = {});

/// One task's worth of report material; text fields hold exact bytes.
struct TaskRecord {
  std::string name;                   // section heading, e.g. "Task A"
  std::string prompt_text;            // prompt as sent
  std::vector<std::string> replies;   // raw reply texts, trial order
  std::vector<std::string> verdicts;  // human-readable verdict per trial
};

struct ReportArtifacts {
  std::vector<TaskRecord> tasks;
  std::optional<CsvTable> scorecards;
  std::vector<std::pair<std::string, std::string>> plots;  // title, svg
};

enum class ReportFormat { Markdown, Html };

/// Assembles the final report with sections in task order, then plots, then
/// the scorecard appendix. Deterministic: equal artifacts give equal bytes.
std::string assemble_report(const ReportArtifacts& artifacts,
                            ReportFormat format = ReportFormat::Markdown);

}  // namespace stn
