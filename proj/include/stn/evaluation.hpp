#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stn/csv.hpp"
#include "stn/features.hpp"
#include "stn/llm.hpp"
#include "stn/partitioning.hpp"
#include "stn/prompt.hpp"

namespace stn {

enum class VerdictKind { Winner, Draw, ParameterUpdates, FormatViolation };

/// Outcome of parsing one reply. Format violations are ordinary data - the
/// parsers never throw on arbitrary text.
struct Verdict {
  VerdictKind kind = VerdictKind::FormatViolation;
  std::optional<std::string> winner_name;    // kind == Winner
  std::vector<ParameterUpdate> updates;      // kind == ParameterUpdates
  std::optional<std::string> violation_reason;  // kind == FormatViolation

  static Verdict winner(std::string name);
  static Verdict draw();
  static Verdict parameter_updates(std::vector<ParameterUpdate> updates);
  static Verdict violation(std::string reason);

  bool operator==(const Verdict&) const = default;
};

std::string describe(const Verdict& verdict);

/// Finds the first bracketed `[winner=name]` or `[draw]` declaration.
/// A malformed declaration, or parenthetical content right after the winner
/// token, is a format violation with a reason.
Verdict parse_winner(const std::string& text);

/// Collects every bracketed `[parameter=value]` token with a known
/// clustering parameter name. Colon-separated or unbracketed forms are
/// format violations.
Verdict parse_parameter_updates(const std::string& text);

/// Deterministic rule oracle for task A prompts. Precedence: higher
/// best-fitness count wins; then better average fitness under the sense;
/// then - only among algorithms that attain the best fitness - higher
/// connectivity; remaining ties are a draw. "Comparable" means within 1%
/// relative difference.
Verdict expected_label(const std::vector<AlgorithmFeatures>& features, Sense sense);

enum class Difficulty { Easy, Hard };

std::string to_string(Difficulty d);
Difficulty parse_difficulty(const std::string& s);

/// One pre-labeled prompt to put through repeated trials. For task B cases
/// `expected` holds kind ParameterUpdates with an empty list: any update set
/// that respects the parameter rules counts as correct, so limits must be
/// present.
struct PromptCase {
  std::string id;
  TaskKind task = TaskKind::A;
  Difficulty difficulty = Difficulty::Easy;
  RenderedPrompt prompt;
  Verdict expected;
  std::optional<ClusterLimits> limits;  // task B correctness ranges
};

struct Trial {
  std::string reply;
  Verdict parsed;
  bool correct = false;
};

struct ScoreCard {
  std::string model_id;
  std::string case_id;
  TaskKind task = TaskKind::A;
  Difficulty difficulty = Difficulty::Easy;
  std::vector<Trial> trials;
  double system_score = 0.0;               // corrects / trials
  std::optional<double> human_score;
  std::optional<std::string> abort_reason;  // fatal endpoint error, if any
};

/// Whether a parsed verdict satisfies the case's expectation.
bool is_correct(const PromptCase& prompt_case, const Verdict& parsed);

/// Runs n trials of the case against the completer. A fatal endpoint error
/// aborts the card; the trials gathered so far stay recorded and the reason
/// lands in abort_reason.
ScoreCard run_trials(const PromptCase& prompt_case, Completer& completer, int n = 5);

/// Human evaluation: wins per model divided by (5 * number of cases), from a
/// votes table with columns evaluator,case_id,repetition,winning_model.
/// Repetitions run 1..5 and each (case, repetition) has at most one winner.
std::map<std::string, double> human_score(const CsvTable& votes,
                                          const std::vector<std::string>& model_ids);

/// Scorecards as a CSV with columns task,prompt_type,model,system_score,human_score.
CsvTable scorecards_table(std::span<const ScoreCard> cards);

/// Case-file persistence (one JSON file per case; prompt text inline).
PromptCase load_case(const std::filesystem::path& path);
std::vector<PromptCase> load_cases(const std::filesystem::path& dir);
void save_case(const PromptCase& prompt_case, const std::filesystem::path& path);

}  // namespace stn
