#include "stn/evaluation.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "stn/common.hpp"

namespace stn {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Relative difference below 1% - the "similar values" threshold.
bool similar(double a, double b) {
  return std::abs(a - b) <= 0.01 * std::max(std::abs(a), std::abs(b));
}

const std::vector<std::string>& known_parameters() {
  static const std::vector<std::string> names = {"cluster_size", "volume_size", "cluster_number",
                                                 "distance_measure"};
  return names;
}

}  // namespace

Verdict Verdict::winner(std::string name) {
  Verdict v;
  v.kind = VerdictKind::Winner;
  v.winner_name = std::move(name);
  return v;
}

Verdict Verdict::draw() {
  Verdict v;
  v.kind = VerdictKind::Draw;
  return v;
}

Verdict Verdict::parameter_updates(std::vector<ParameterUpdate> updates) {
  Verdict v;
  v.kind = VerdictKind::ParameterUpdates;
  v.updates = std::move(updates);
  return v;
}

Verdict Verdict::violation(std::string reason) {
  Verdict v;
  v.kind = VerdictKind::FormatViolation;
  v.violation_reason = std::move(reason);
  return v;
}

std::string describe(const Verdict& verdict) {
  switch (verdict.kind) {
    case VerdictKind::Winner: return fmt::format("winner {}", *verdict.winner_name);
    case VerdictKind::Draw: return "draw";
    case VerdictKind::ParameterUpdates: {
      std::string out = "parameter updates:";
      for (const auto& u : verdict.updates) out += fmt::format(" {}={}", u.name, u.value);
      return out;
    }
    case VerdictKind::FormatViolation:
      return fmt::format("format violation ({})",
                         verdict.violation_reason.value_or("unspecified"));
  }
  throw Error("unreachable");
}

Verdict parse_winner(const std::string& text) {
  size_t pos = 0;
  while (true) {
    size_t open = text.find('[', pos);
    if (open == std::string::npos) break;
    size_t close = text.find(']', open + 1);
    if (close == std::string::npos) break;
    std::string content = trim(text.substr(open + 1, close - open - 1));
    std::string low = lower(content);

    if (low == "draw") return Verdict::draw();

    if (low.rfind("winner", 0) == 0) {
      std::string rest = trim(content.substr(6));
      if (rest.empty() || (rest[0] != '=' && rest[0] != ':'))
        return Verdict::violation(
            fmt::format("malformed winner declaration '[{}]'", content));
      if (rest[0] == ':')
        return Verdict::violation("winner declaration uses ':' instead of '='");
      std::string name = trim(rest.substr(1));
      if (name.empty())
        return Verdict::violation("winner declaration names no algorithm");
      if (name.find('(') != std::string::npos || name.find(')') != std::string::npos)
        return Verdict::violation("parenthetical content inside the winner declaration");
      size_t after = close + 1;
      while (after < text.size() && (text[after] == ' ' || text[after] == '\t')) ++after;
      if (after < text.size() && text[after] == '(')
        return Verdict::violation(
            "parenthetical algorithm references follow the winner declaration");
      return Verdict::winner(name);
    }
    pos = close + 1;
  }
  return Verdict::violation("no bracketed winner or draw declaration found");
}

Verdict parse_parameter_updates(const std::string& text) {
  std::vector<ParameterUpdate> updates;
  std::optional<std::string> bracket_violation;

  size_t pos = 0;
  while (true) {
    size_t open = text.find('[', pos);
    if (open == std::string::npos) break;
    size_t close = text.find(']', open + 1);
    if (close == std::string::npos) break;
    std::string content = text.substr(open + 1, close - open - 1);
    size_t eq = content.find('=');
    if (eq != std::string::npos) {
      std::string name = trim(content.substr(0, eq));
      std::string value = trim(content.substr(eq + 1));
      if (is_known_parameter(name)) {
        if (value.empty() && !bracket_violation)
          bracket_violation = fmt::format("parameter '{}' has an empty value", name);
        else if (!value.empty())
          updates.push_back(ParameterUpdate{name, value});
      }
    } else if (size_t colon = content.find(':'); colon != std::string::npos) {
      std::string name = trim(content.substr(0, colon));
      if (is_known_parameter(name) && !bracket_violation)
        bracket_violation =
            fmt::format("parameter '{}' uses ':' instead of '=' inside the brackets", name);
    }
    pos = close + 1;
  }
  if (!updates.empty()) return Verdict::parameter_updates(std::move(updates));
  if (bracket_violation) return Verdict::violation(*bracket_violation);

  // No bracketed token parsed; look for the bare forms the format forbids.
  size_t best_pos = std::string::npos;
  std::string reason;
  for (const auto& name : known_parameters()) {
    for (size_t at = text.find(name); at != std::string::npos; at = text.find(name, at + 1)) {
      if (at > 0 && word_char(text[at - 1])) continue;
      size_t after = at + name.size();
      if (after < text.size() && word_char(text[after])) continue;
      while (after < text.size() && (text[after] == ' ' || text[after] == '\t')) ++after;
      if (after >= text.size()) continue;
      if (text[after] == ':' && at < best_pos) {
        best_pos = at;
        reason = fmt::format("'{}: value' replaces '=' with ':' and omits the brackets", name);
      } else if (text[after] == '=' && at < best_pos) {
        best_pos = at;
        reason = fmt::format("'{}=value' omits the square brackets", name);
      }
    }
  }
  if (best_pos != std::string::npos) return Verdict::violation(reason);
  return Verdict::violation("no parameter updates in the [name_parameter=new_value] format");
}

Verdict expected_label(const std::vector<AlgorithmFeatures>& features, Sense sense) {
  if (features.size() < 2)
    throw InputError("labeling a comparison needs at least two algorithms");

  int max_count = 0;
  for (const auto& f : features) max_count = std::max(max_count, f.total_best_global_fitness);
  std::vector<const AlgorithmFeatures*> leaders;
  for (const auto& f : features)
    if (f.total_best_global_fitness == max_count) leaders.push_back(&f);
  if (leaders.size() == 1) return Verdict::winner(leaders.front()->algorithm);

  double best_avg = leaders.front()->avg_fitness;
  for (const auto* f : leaders)
    if (fitness_better(sense, f->avg_fitness, best_avg)) best_avg = f->avg_fitness;
  std::vector<const AlgorithmFeatures*> by_avg;
  for (const auto* f : leaders)
    if (similar(f->avg_fitness, best_avg)) by_avg.push_back(f);
  if (by_avg.size() == 1) return Verdict::winner(by_avg.front()->algorithm);

  // Connectivity breaks ties only for algorithms that reach the best fitness.
  if (max_count > 0) {
    double best_conn = 0.0;
    for (const auto* f : by_avg) best_conn = std::max(best_conn, f->connectivity);
    std::vector<const AlgorithmFeatures*> by_conn;
    for (const auto* f : by_avg)
      if (similar(f->connectivity, best_conn)) by_conn.push_back(f);
    if (by_conn.size() == 1) return Verdict::winner(by_conn.front()->algorithm);
  }
  return Verdict::draw();
}

std::string to_string(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

Difficulty parse_difficulty(const std::string& s) {
  std::string low = lower(s);
  if (low == "easy") return Difficulty::Easy;
  if (low == "hard") return Difficulty::Hard;
  throw InputError(fmt::format("unknown difficulty '{}' (expected easy or hard)", s));
}

namespace {

bool valid_update(const ParameterUpdate& update, const ClusterLimits& limits) {
  if (update.name == "distance_measure") {
    std::string low = lower(trim(update.value));
    return low == "hamming" || low == "euclidean" || low == "manhattan";
  }
  auto v = update.numeric();
  if (!v) return false;
  if (update.name == "cluster_size" || update.name == "volume_size")
    return *v > 0.0 && *v <= 100.0;
  // cluster_number: an integer above the minimum but well below the maximum.
  if (*v != std::floor(*v)) return false;
  return *v > limits.min_clusters && *v < 0.9 * limits.max_clusters;
}

}  // namespace

bool is_correct(const PromptCase& prompt_case, const Verdict& parsed) {
  if (prompt_case.task == TaskKind::A) {
    if (prompt_case.expected.kind == VerdictKind::Winner)
      return parsed.kind == VerdictKind::Winner &&
             parsed.winner_name == prompt_case.expected.winner_name;
    if (prompt_case.expected.kind == VerdictKind::Draw)
      return parsed.kind == VerdictKind::Draw;
    throw InputError(fmt::format("case '{}' has an unusable expected verdict", prompt_case.id));
  }
  if (prompt_case.task != TaskKind::B)
    throw InputError(fmt::format("case '{}' is not a scorable task", prompt_case.id));
  if (!prompt_case.limits)
    throw InputError(fmt::format("task B case '{}' lacks cluster limits", prompt_case.id));
  if (parsed.kind != VerdictKind::ParameterUpdates || parsed.updates.empty()) return false;
  return std::all_of(parsed.updates.begin(), parsed.updates.end(),
                     [&](const ParameterUpdate& u) { return valid_update(u, *prompt_case.limits); });
}

ScoreCard run_trials(const PromptCase& prompt_case, Completer& completer, int n) {
  if (n < 1) throw InputError("trial count must be at least 1");
  ScoreCard card;
  card.case_id = prompt_case.id;
  card.task = prompt_case.task;
  card.difficulty = prompt_case.difficulty;
  for (int i = 0; i < n; ++i) {
    LLMReply reply;
    try {
      reply = completer.complete(prompt_case.prompt);
    } catch (const EndpointError& e) {
      card.abort_reason = e.what();
      break;
    }
    if (card.model_id.empty()) card.model_id = reply.model_id;
    Trial trial;
    trial.reply = reply.text;
    trial.parsed = prompt_case.task == TaskKind::A ? parse_winner(reply.text)
                                                   : parse_parameter_updates(reply.text);
    trial.correct = is_correct(prompt_case, trial.parsed);
    card.trials.push_back(std::move(trial));
  }
  int corrects = static_cast<int>(
      std::count_if(card.trials.begin(), card.trials.end(), [](const Trial& t) { return t.correct; }));
  card.system_score =
      card.trials.empty() ? 0.0 : static_cast<double>(corrects) / card.trials.size();
  return card;
}

std::map<std::string, double> human_score(const CsvTable& votes,
                                          const std::vector<std::string>& model_ids) {
  votes.require_columns({"evaluator", "case_id", "repetition", "winning_model"}, "votes CSV");
  const int case_col = votes.column("case_id");
  const int rep_col = votes.column("repetition");
  const int model_col = votes.column("winning_model");

  std::map<std::string, int> wins;
  for (const auto& id : model_ids) wins[id] = 0;

  std::set<std::pair<std::string, int>> decided;
  std::set<std::string> cases;
  for (size_t r = 0; r < votes.rows.size(); ++r) {
    const auto& row = votes.rows[r];
    const std::string& case_id = row[case_col];
    const std::string& model = row[model_col];
    int rep = 0;
    const std::string& rep_text = row[rep_col];
    auto [ptr, ec] = std::from_chars(rep_text.data(), rep_text.data() + rep_text.size(), rep);
    if (ec != std::errc() || ptr != rep_text.data() + rep_text.size() || rep < 1 || rep > 5)
      throw InputError(fmt::format("votes row {}: repetition '{}' is not in 1..5", r + 2, rep_text));
    if (wins.find(model) == wins.end())
      throw InputError(fmt::format("votes row {}: unknown model '{}'", r + 2, model));
    if (!decided.insert({case_id, rep}).second)
      throw InputError(fmt::format("two winners recorded for case '{}' repetition {}", case_id, rep));
    cases.insert(case_id);
    ++wins[model];
  }

  std::map<std::string, double> scores;
  const double denom = 5.0 * std::max<size_t>(cases.size(), 1);
  for (const auto& [model, w] : wins) scores[model] = w / denom;
  return scores;
}

CsvTable scorecards_table(std::span<const ScoreCard> cards) {
  CsvTable table;
  table.header = {"task", "prompt_type", "model", "system_score", "human_score"};
  for (const auto& card : cards) {
    std::string prompt_type = card.difficulty == Difficulty::Easy ? "1/Easy" : "2/Hard";
    table.rows.push_back({to_string(card.task), prompt_type, card.model_id,
                          fmt::format("{}", card.system_score),
                          card.human_score ? fmt::format("{}", *card.human_score) : ""});
  }
  return table;
}

// ---- case persistence ------------------------------------------------------

namespace {

json verdict_to_json(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Winner: return {{"kind", "winner"}, {"winner_name", *v.winner_name}};
    case VerdictKind::Draw: return {{"kind", "draw"}};
    case VerdictKind::ParameterUpdates: return {{"kind", "parameter_updates"}};
    case VerdictKind::FormatViolation:
      return {{"kind", "format_violation"}, {"reason", v.violation_reason.value_or("")}};
  }
  throw Error("unreachable");
}

Verdict verdict_from_json(const json& j, const std::string& origin) {
  std::string kind = j.value("kind", "");
  if (kind == "winner") {
    if (!j.contains("winner_name") || !j["winner_name"].is_string())
      throw InputError(fmt::format("{}: winner verdict without winner_name", origin));
    return Verdict::winner(j["winner_name"].get<std::string>());
  }
  if (kind == "draw") return Verdict::draw();
  if (kind == "parameter_updates") return Verdict::parameter_updates({});
  throw InputError(fmt::format("{}: unsupported expected verdict kind '{}'", origin, kind));
}

}  // namespace

PromptCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open case file '{}'", path.string()));
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw InputError(fmt::format("case file '{}' is not valid JSON", path.string()));

  PromptCase c;
  c.id = j.value("id", path.stem().string());
  std::string task = j.value("task", "");
  if (task != "A" && task != "B")
    throw InputError(fmt::format("case '{}': task must be A or B", c.id));
  c.task = task == "A" ? TaskKind::A : TaskKind::B;
  c.difficulty = parse_difficulty(j.value("difficulty", "easy"));
  if (!j.contains("prompt_text") || !j["prompt_text"].is_string())
    throw InputError(fmt::format("case '{}': prompt_text missing", c.id));
  c.prompt.task = c.task;
  c.prompt.text = j["prompt_text"].get<std::string>();
  if (!j.contains("expected"))
    throw InputError(fmt::format("case '{}': expected verdict missing", c.id));
  c.expected = verdict_from_json(j["expected"], fmt::format("case '{}'", c.id));
  if (j.contains("limits")) {
    ClusterLimits limits;
    limits.min_clusters = j["limits"].value("min_clusters", 1);
    limits.max_clusters = j["limits"].value("max_clusters", 1);
    c.limits = limits;
  }
  if (c.task == TaskKind::B) {
    if (!c.limits)
      throw InputError(fmt::format("task B case '{}' needs cluster limits", c.id));
    if (c.expected.kind != VerdictKind::ParameterUpdates)
      throw InputError(fmt::format("task B case '{}' must expect parameter_updates", c.id));
  } else if (c.expected.kind != VerdictKind::Winner && c.expected.kind != VerdictKind::Draw) {
    throw InputError(fmt::format("task A case '{}' must expect a winner or a draw", c.id));
  }
  return c;
}

std::vector<PromptCase> load_cases(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InputError(fmt::format("case directory '{}' does not exist", dir.string()));
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw InputError(fmt::format("case directory '{}' holds no .json case files", dir.string()));
  std::vector<PromptCase> cases;
  cases.reserve(files.size());
  for (const auto& file : files) cases.push_back(load_case(file));
  return cases;
}

void save_case(const PromptCase& prompt_case, const std::filesystem::path& path) {
  json j = {
      {"id", prompt_case.id},
      {"task", to_string(prompt_case.task)},
      {"difficulty", to_string(prompt_case.difficulty)},
      {"prompt_text", prompt_case.prompt.text},
      {"expected", verdict_to_json(prompt_case.expected)},
  };
  if (prompt_case.limits)
    j["limits"] = {{"min_clusters", prompt_case.limits->min_clusters},
                   {"max_clusters", prompt_case.limits->max_clusters}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write case file '{}'", path.string()));
  out << j.dump(2) << "\n";
}

}  // namespace stn
