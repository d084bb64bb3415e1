#pragma once

#include <map>
#include <string>
#include <vector>

#include "stn/partitioning.hpp"
#include "stn/trajectory.hpp"

namespace stn {

/// A location in the merged search trajectory network. Locations are raw
/// solutions, or clusters when a partition maps the space down.
struct StnNode {
  std::string id;
  double best_fitness_at_node = 0.0;
  bool is_start = false;   ///< some trajectory begins here
  bool is_end = false;     ///< some trajectory finishes here
  bool is_best = false;    ///< fitness here matches the global best
  bool is_shared = false;  ///< visited by at least two algorithms
  std::map<std::string, int> visits;  ///< algorithm -> distinct trajectories
};

struct StnEdge {
  int from = 0;  // node indices
  int to = 0;
  std::map<std::string, int> traversals;  ///< algorithm -> times walked
};

/// Merged, immutable search trajectory network over every algorithm's runs.
struct STN {
  std::vector<StnNode> nodes;
  std::vector<StnEdge> edges;
  std::vector<std::string> algorithms;  // dataset order
  double best_global_fitness = 0.0;
  Sense sense = Sense::Minimize;

  /// Collapsed node walk of every trajectory: walks[a][t] lists node indices
  /// for trajectory t of algorithms[a]. Connectivity is computed from these.
  std::vector<std::vector<std::vector<int>>> walks;

  /// Index of the node with the given location id, or -1.
  int node_index(const std::string& id) const;
};

/// Builds the merged STN. Consecutive identical locations within a
/// trajectory are collapsed, so the graph has no self-loops. With a
/// partition, locations are cluster ids and the partition must cover every
/// solution in the dataset.
STN build_stn(const Dataset& dataset, const PartitionResult* partition = nullptr);

enum class GraphFormat { Dot, GraphML };

GraphFormat parse_graph_format(const std::string& s);

/// Serializes the STN. Nodes carry `start`, `end`, `best`, `shared`,
/// `fitness` and per-algorithm `visits_<algo>` attributes; edges carry
/// `traversals_<algo>`. Colors come from algorithm_color(), shared elements
/// are grey.
std::string export_graph(const STN& stn, GraphFormat format);

/// Stable palette entry for the algorithm at the given dataset position.
std::string algorithm_color(size_t index);

}  // namespace stn
