#include "stn/reporting.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "stn/common.hpp"

namespace stn {

namespace {

double parse_cell(const std::string& cell, const std::string& where) {
  std::string s = cell;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError(fmt::format("non-numeric value '{}' in {}", cell, where));
  return v;
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

CsvTable performance_table(const Dataset& dataset,
                           const std::vector<AlgorithmFeatures>& features) {
  if (features.empty()) throw InputError("cannot emit the performance table without algorithms");
  if (dataset.algorithms.size() != features.size())
    throw InputError("feature list does not match the dataset");

  CsvTable out;
  out.header = {"algorithm", "best_performance", "average_performance"};
  for (size_t i = 0; i < features.size(); ++i) {
    const auto& algo = dataset.algorithms[i];
    double best = algo.trajectories.front().best_fitness(dataset.sense);
    for (const auto& traj : algo.trajectories) {
      double b = traj.best_fitness(dataset.sense);
      if (fitness_better(dataset.sense, b, best)) best = b;
    }
    out.rows.push_back({features[i].algorithm, fmt::format("{}", best),
                        fmt::format("{}", features[i].avg_fitness)});
  }
  return out;
}

CsvTable configuration_table(const PartitionConfig& old_config,
                             std::span<const ParameterUpdate> updates) {
  if (updates.empty())
    throw InputError("a parsed parameter suggestion is required for the new_configuration row");

  double cluster_size = old_config.cluster_size_pct;
  double volume_size = old_config.volume_size_pct;
  double cluster_number = old_config.cluster_number;
  for (const auto& update : updates) {
    if (update.name == "distance_measure") continue;  // not a numeric column
    auto v = update.numeric();
    if (!v)
      throw InputError(fmt::format("suggested value '{}' for {} is not numeric", update.value,
                                   update.name));
    if (update.name == "cluster_size") cluster_size = *v;
    else if (update.name == "volume_size") volume_size = *v;
    else if (update.name == "cluster_number") cluster_number = *v;
  }
  CsvTable out;
  out.header = {"configuration", "cluster_size", "volume_size", "cluster_number"};
  out.rows.push_back({"old_configuration", fmt::format("{}", old_config.cluster_size_pct),
                      fmt::format("{}", old_config.volume_size_pct),
                      fmt::format("{}", old_config.cluster_number)});
  out.rows.push_back({"new_configuration", fmt::format("{}", cluster_size),
                      fmt::format("{}", volume_size), fmt::format("{}", cluster_number)});
  return out;
}

TaskCCsvs emit_task_c_csvs(const Dataset& dataset,
                           const std::vector<AlgorithmFeatures>& features,
                           const PartitionConfig& old_config,
                           std::span<const ParameterUpdate> updates) {
  TaskCCsvs out;
  out.features = performance_table(dataset, features);
  out.config = configuration_table(old_config, updates);
  return out;
}

std::string render_grouped_bar(const CsvTable& csv, const std::vector<std::string>& palette,
                               const AxesSpec& axes) {
  if (csv.header.size() < 2) throw InputError("bar chart needs a category column and at least one series");
  if (csv.rows.empty()) throw InputError("bar chart needs at least one data row");
  if (palette.empty()) throw InputError("bar chart needs a non-empty palette");

  const int groups = static_cast<int>(csv.rows.size());
  const int series = static_cast<int>(csv.header.size()) - 1;

  std::vector<std::vector<double>> values(groups, std::vector<double>(series));
  double vmin = 0.0, vmax = 0.0;
  for (int g = 0; g < groups; ++g)
    for (int s = 0; s < series; ++s) {
      double v = parse_cell(csv.rows[g][s + 1],
                            fmt::format("row {} column {}", g + 2, csv.header[s + 1]));
      values[g][s] = v;
      vmin = std::min(vmin, v);  // axis starts at 0, extends for negatives
      vmax = std::max(vmax, v);
    }
  if (vmax == vmin) vmax = vmin + 1.0;
  double range = vmax - vmin;
  vmax += 0.05 * range;  // headroom for value labels
  range = vmax - vmin;

  const double width = 800, height = 500;
  const double pad_x = 0.10 * width, pad_y = 0.10 * height;
  const double x0 = pad_x, x1 = width - pad_x, y0 = pad_y, y1 = height - pad_y;
  const double plot_w = x1 - x0, plot_h = y1 - y0;
  auto y_of = [&](double v) { return y1 - (v - vmin) / range * plot_h; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
      "  <rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      width, height);

  if (!axes.title.empty())
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        width / 2, y0 - 24, html_escape(axes.title));

  // Horizontal grid with tick labels.
  for (int t = 0; t <= 4; ++t) {
    double v = vmin + range * t / 4.0;
    double y = y_of(v);
    svg += fmt::format(
        "  <line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n",
        x0, y, x1, y);
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-size=\"10\">{:.6g}</text>\n",
        x0 - 6, y + 3, v);
  }

  const double group_w = plot_w / groups;
  const double bar_w = group_w * 0.8 / series;
  for (int g = 0; g < groups; ++g) {
    for (int s = 0; s < series; ++s) {
      double v = values[g][s];
      double x = x0 + g * group_w + group_w * 0.1 + s * bar_w;
      double yv = y_of(v), yz = y_of(0.0);
      double top = std::min(yv, yz);
      svg += fmt::format(
          "  <rect class=\"bar\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
          "fill=\"{}\"/>\n",
          x + 1, top, bar_w - 2, std::abs(yv - yz), palette[s % palette.size()]);
      double label_y = v >= 0 ? yv - 4 : yv + 12;
      svg += fmt::format(
          "  <text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"10\">{}</text>\n",
          x + bar_w / 2, label_y, html_escape(csv.rows[g][s + 1]));
    }
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
        x0 + g * group_w + group_w / 2, y1 + 18, html_escape(csv.rows[g][0]));
  }

  // Axis lines on top of the bars.
  svg += fmt::format(
      "  <line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
      x0, y0, y1);
  svg += fmt::format(
      "  <line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
      x0, x1, y_of(0.0));

  // Legend, one swatch per series.
  for (int s = 0; s < series; ++s) {
    double ly = y0 + 6 + s * 16;
    svg += fmt::format(
        "  <rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
        x1 - 150, ly, palette[s % palette.size()]);
    svg += fmt::format("  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\">{}</text>\n",
                       x1 - 136, ly + 9, html_escape(csv.header[s + 1]));
  }

  if (!axes.x_label.empty())
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
        width / 2, height - 12, html_escape(axes.x_label));
  if (!axes.y_label.empty())
    svg += fmt::format(
        "  <text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" font-size=\"12\" "
        "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
        height / 2, html_escape(axes.y_label));

  svg += "</svg>\n";
  return svg;
}

namespace {

/// Prompts and replies embed three-backtick fences of their own, so report
/// code blocks use four backticks.
void md_code_block(std::string& out, const std::string& body) {
  out += "````text\n";
  out += body;
  if (!body.empty() && body.back() != '\n') out += '\n';
  out += "````\n\n";
}

std::string md_escape_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

void md_table(std::string& out, const CsvTable& table) {
  out += "|";
  for (const auto& h : table.header) out += fmt::format(" {} |", md_escape_cell(h));
  out += "\n|";
  for (size_t i = 0; i < table.header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "|";
    for (const auto& cell : row) out += fmt::format(" {} |", md_escape_cell(cell));
    out += "\n";
  }
  out += "\n";
}

std::string to_markdown(const ReportArtifacts& a) {
  std::string out = "# Search trajectory analysis report\n\n";
  for (const auto& task : a.tasks) {
    out += fmt::format("## {}\n\n", task.name);
    out += "### Prompt\n\n";
    md_code_block(out, task.prompt_text);
    for (size_t i = 0; i < task.replies.size(); ++i) {
      out += fmt::format("### Reply {}\n\n", i + 1);
      md_code_block(out, task.replies[i]);
      if (i < task.verdicts.size()) out += fmt::format("Verdict: {}\n\n", task.verdicts[i]);
    }
  }
  if (!a.plots.empty()) {
    out += "## Plots\n\n";
    for (const auto& [title, svg] : a.plots) {
      out += fmt::format("### {}\n\n", title);
      out += svg;
      out += "\n";
    }
  }
  if (a.scorecards) {
    out += "## Scorecards\n\n";
    md_table(out, *a.scorecards);
  }
  return out;
}

std::string to_html(const ReportArtifacts& a) {
  std::string out =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>Search trajectory analysis report</title>\n</head>\n<body>\n"
      "<h1>Search trajectory analysis report</h1>\n";
  for (const auto& task : a.tasks) {
    out += fmt::format("<h2>{}</h2>\n<h3>Prompt</h3>\n<pre>{}</pre>\n", html_escape(task.name),
                       html_escape(task.prompt_text));
    for (size_t i = 0; i < task.replies.size(); ++i) {
      out += fmt::format("<h3>Reply {}</h3>\n<pre>{}</pre>\n", i + 1, html_escape(task.replies[i]));
      if (i < task.verdicts.size())
        out += fmt::format("<p>Verdict: {}</p>\n", html_escape(task.verdicts[i]));
    }
  }
  if (!a.plots.empty()) {
    out += "<h2>Plots</h2>\n";
    for (const auto& [title, svg] : a.plots)
      out += fmt::format("<h3>{}</h3>\n{}\n", html_escape(title), svg);
  }
  if (a.scorecards) {
    out += "<h2>Scorecards</h2>\n<table border=\"1\">\n<tr>";
    for (const auto& h : a.scorecards->header) out += fmt::format("<th>{}</th>", html_escape(h));
    out += "</tr>\n";
    for (const auto& row : a.scorecards->rows) {
      out += "<tr>";
      for (const auto& cell : row) out += fmt::format("<td>{}</td>", html_escape(cell));
      out += "</tr>\n";
    }
    out += "</table>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace

std::string assemble_report(const ReportArtifacts& artifacts, ReportFormat format) {
  if (artifacts.tasks.empty() && !artifacts.scorecards && artifacts.plots.empty())
    throw InputError("report needs at least one section");
  return format == ReportFormat::Markdown ? to_markdown(artifacts) : to_html(artifacts);
}

}  // namespace stn
