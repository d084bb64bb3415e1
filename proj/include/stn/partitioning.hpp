#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stn/trajectory.hpp"

namespace stn {

enum class DistanceMeasure { Hamming, Euclidean, Manhattan };

DistanceMeasure parse_measure(const std::string& s);
std::string to_string(DistanceMeasure m);

/// Controls for the search space partitioning step.
struct PartitionConfig {
  double cluster_size_pct = 100.0;  ///< max cluster size, % of all solutions
  double volume_size_pct = 100.0;   ///< max spanned volume, % of dataset span
  DistanceMeasure measure = DistanceMeasure::Euclidean;
  int cluster_number = 1;

  void validate() const;  // percentages in (0,100], cluster_number >= 1
};

/// Reachable cluster-count range for a solution set under a config.
/// max_clusters is the number of distinct solutions; min_clusters is the
/// count at which no further merge can respect both percentage limits.
struct ClusterLimits {
  int min_clusters = 1;
  int max_clusters = 1;
};

/// Assignment of every distinct solution to one of cluster_count clusters,
/// ids 0..cluster_count-1, with the medoid of each cluster.
struct PartitionResult {
  std::vector<SolutionPoint> solutions;  // distinct, first-appearance order
  std::vector<int> assignment;           // parallel to `solutions`
  int cluster_count = 0;
  std::vector<SolutionPoint> representatives;  // per cluster id

  /// Cluster id of a solution that participated in the partitioning.
  /// Throws ConstraintError for unknown solutions (coverage gap).
  int cluster_of(const SolutionPoint& p) const;

  /// CSV export, header `solution_index,solution,cluster_id`, one row per
  /// distinct solution in first-appearance order.
  std::string assignments_csv() const;

 private:
  friend PartitionResult partition(const std::vector<SolutionPoint>&, const PartitionConfig&);
  std::unordered_map<SolutionPoint, int, SolutionPointHash> index_;
};

/// Pairwise distance under the given measure. Hamming requires equal-length
/// discrete tokens; Euclidean/Manhattan require continuous vectors of equal
/// dimension.
double distance(const SolutionPoint& a, const SolutionPoint& b, DistanceMeasure measure);

ClusterLimits cluster_limits(const std::vector<SolutionPoint>& solutions,
                             const PartitionConfig& config);

/// Complete-linkage agglomerative clustering down to config.cluster_number
/// clusters, never merging past either percentage limit. Deterministic:
/// equal-distance merge candidates are taken in lowest-pair order, indices
/// by first appearance.
PartitionResult partition(const std::vector<SolutionPoint>& solutions,
                          const PartitionConfig& config);

/// All solutions of a dataset in encounter order (algorithms, trajectories,
/// steps), duplicates included.
std::vector<SolutionPoint> collect_solutions(const Dataset& dataset);

/// One suggested change to a clustering parameter, as parsed from an LLM
/// reply. Known names: cluster_size, volume_size, cluster_number,
/// distance_measure.
struct ParameterUpdate {
  std::string name;
  std::string value;  // verbatim

  /// Numeric value if `value` parses as a real (an optional trailing '%'
  /// is accepted and dropped).
  std::optional<double> numeric() const;

  bool operator==(const ParameterUpdate&) const = default;
};

bool is_known_parameter(const std::string& name);

}  // namespace stn
