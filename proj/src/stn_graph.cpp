#include "stn/stn_graph.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

#include "stn/common.hpp"

namespace stn {

namespace {

constexpr const char* kSharedColor = "#bdbdbd";

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

/// Attribute-name suffix for an algorithm; anything outside [A-Za-z0-9_]
/// would not survive every graph consumer, so it is mapped to '_'.
std::string attr_suffix(const std::string& algo) {
  std::string out;
  for (char c : algo) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out;
}

std::string color_for(const STN& stn, const std::map<std::string, int>& counts) {
  std::string only;
  for (const auto& [algo, n] : counts)
    if (n > 0) {
      if (!only.empty()) return kSharedColor;
      only = algo;
    }
  for (size_t i = 0; i < stn.algorithms.size(); ++i)
    if (stn.algorithms[i] == only) return algorithm_color(i);
  return kSharedColor;
}

}  // namespace

std::string algorithm_color(size_t index) {
  static const std::array<const char*, 8> palette = {
      "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
      "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  return palette[index % palette.size()];
}

int STN::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

STN build_stn(const Dataset& dataset, const PartitionResult* partition) {
  if (dataset.algorithms.empty()) throw InputError("cannot build an STN from an empty dataset");

  STN stn;
  stn.sense = dataset.sense;
  stn.best_global_fitness = dataset.best_global_fitness();

  std::unordered_map<std::string, int> node_of;
  std::map<std::pair<int, int>, int> edge_of;

  auto locate = [&](const Step& step) {
    std::string id = partition ? fmt::format("c{}", partition->cluster_of(step.solution))
                               : step.solution.key();
    auto [it, inserted] = node_of.emplace(id, static_cast<int>(stn.nodes.size()));
    if (inserted) {
      StnNode node;
      node.id = id;
      node.best_fitness_at_node = step.fitness;
      stn.nodes.push_back(std::move(node));
    } else if (fitness_better(stn.sense, step.fitness, stn.nodes[it->second].best_fitness_at_node)) {
      stn.nodes[it->second].best_fitness_at_node = step.fitness;
    }
    return it->second;
  };

  for (const auto& algo : dataset.algorithms) {
    stn.algorithms.push_back(algo.name);
    auto& algo_walks = stn.walks.emplace_back();
    for (const auto& traj : algo.trajectories) {
      std::vector<int> walk;
      for (const auto& step : traj.steps) {
        int node = locate(step);
        if (walk.empty() || walk.back() != node) walk.push_back(node);
      }
      stn.nodes[walk.front()].is_start = true;
      stn.nodes[walk.back()].is_end = true;
      for (int node : std::set<int>(walk.begin(), walk.end()))
        ++stn.nodes[node].visits[algo.name];
      for (size_t i = 1; i < walk.size(); ++i) {
        auto [it, inserted] =
            edge_of.emplace(std::make_pair(walk[i - 1], walk[i]), static_cast<int>(stn.edges.size()));
        if (inserted) stn.edges.push_back(StnEdge{walk[i - 1], walk[i], {}});
        ++stn.edges[it->second].traversals[algo.name];
      }
      algo_walks.push_back(std::move(walk));
    }
  }

  for (auto& node : stn.nodes) {
    node.is_best = fitness_equal(node.best_fitness_at_node, stn.best_global_fitness);
    int algos_here = 0;
    for (const auto& [algo, n] : node.visits)
      if (n > 0) ++algos_here;
    node.is_shared = algos_here >= 2;
  }
  return stn;
}

GraphFormat parse_graph_format(const std::string& s) {
  if (s == "dot") return GraphFormat::Dot;
  if (s == "graphml") return GraphFormat::GraphML;
  throw InputError(fmt::format("unknown graph format '{}' (expected dot or graphml)", s));
}

namespace {

std::string export_dot(const STN& stn) {
  std::string out = "digraph stn {\n";
  for (const auto& node : stn.nodes) {
    out += fmt::format("  {} [start={}, end={}, best={}, shared={}, fitness={}",
                       dot_quote(node.id), node.is_start, node.is_end, node.is_best,
                       node.is_shared, node.best_fitness_at_node);
    for (const auto& [algo, n] : node.visits)
      if (n > 0) out += fmt::format(", visits_{}={}", attr_suffix(algo), n);
    out += fmt::format(", color={}];\n", dot_quote(color_for(stn, node.visits)));
  }
  for (const auto& edge : stn.edges) {
    out += fmt::format("  {} -> {} [", dot_quote(stn.nodes[edge.from].id),
                       dot_quote(stn.nodes[edge.to].id));
    bool first = true;
    for (const auto& [algo, n] : edge.traversals) {
      if (n > 0) {
        out += fmt::format("{}traversals_{}={}", first ? "" : ", ", attr_suffix(algo), n);
        first = false;
      }
    }
    out += fmt::format("{}color={}];\n", first ? "" : ", ", dot_quote(color_for(stn, edge.traversals)));
  }
  out += "}\n";
  return out;
}

std::string export_graphml(const STN& stn) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"n_start\" for=\"node\" attr.name=\"start\" attr.type=\"boolean\"/>\n"
      "  <key id=\"n_end\" for=\"node\" attr.name=\"end\" attr.type=\"boolean\"/>\n"
      "  <key id=\"n_best\" for=\"node\" attr.name=\"best\" attr.type=\"boolean\"/>\n"
      "  <key id=\"n_shared\" for=\"node\" attr.name=\"shared\" attr.type=\"boolean\"/>\n"
      "  <key id=\"n_fitness\" for=\"node\" attr.name=\"fitness\" attr.type=\"double\"/>\n"
      "  <key id=\"n_color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
      "  <key id=\"e_color\" for=\"edge\" attr.name=\"color\" attr.type=\"string\"/>\n";
  for (size_t i = 0; i < stn.algorithms.size(); ++i) {
    std::string suffix = attr_suffix(stn.algorithms[i]);
    out += fmt::format(
        "  <key id=\"n_visits_{0}\" for=\"node\" attr.name=\"visits_{0}\" attr.type=\"int\"/>\n"
        "  <key id=\"e_traversals_{0}\" for=\"edge\" attr.name=\"traversals_{0}\" attr.type=\"int\"/>\n",
        suffix);
  }
  out += "  <graph id=\"stn\" edgedefault=\"directed\">\n";
  auto flag = [](bool b) { return b ? "true" : "false"; };
  for (const auto& node : stn.nodes) {
    out += fmt::format("    <node id=\"{}\">\n", xml_escape(node.id));
    out += fmt::format("      <data key=\"n_start\">{}</data>\n", flag(node.is_start));
    out += fmt::format("      <data key=\"n_end\">{}</data>\n", flag(node.is_end));
    out += fmt::format("      <data key=\"n_best\">{}</data>\n", flag(node.is_best));
    out += fmt::format("      <data key=\"n_shared\">{}</data>\n", flag(node.is_shared));
    out += fmt::format("      <data key=\"n_fitness\">{}</data>\n", node.best_fitness_at_node);
    for (const auto& [algo, n] : node.visits)
      if (n > 0)
        out += fmt::format("      <data key=\"n_visits_{}\">{}</data>\n", attr_suffix(algo), n);
    out += fmt::format("      <data key=\"n_color\">{}</data>\n", color_for(stn, node.visits));
    out += "    </node>\n";
  }
  for (const auto& edge : stn.edges) {
    out += fmt::format("    <edge source=\"{}\" target=\"{}\">\n",
                       xml_escape(stn.nodes[edge.from].id), xml_escape(stn.nodes[edge.to].id));
    for (const auto& [algo, n] : edge.traversals)
      if (n > 0)
        out += fmt::format("      <data key=\"e_traversals_{}\">{}</data>\n", attr_suffix(algo), n);
    out += fmt::format("      <data key=\"e_color\">{}</data>\n", color_for(stn, edge.traversals));
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace

std::string export_graph(const STN& stn, GraphFormat format) {
  return format == GraphFormat::Dot ? export_dot(stn) : export_graphml(stn);
}

}  // namespace stn
