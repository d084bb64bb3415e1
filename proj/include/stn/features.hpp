#pragma once

#include <string>
#include <vector>

#include "stn/stn_graph.hpp"
#include "stn/trajectory.hpp"

namespace stn {

/// The three per-algorithm behaviour features fed into the prompts.
struct AlgorithmFeatures {
  std::string algorithm;
  int total_best_global_fitness = 0;  ///< trajectories attaining the global best
  double connectivity = 0.0;          ///< overlapping trajectory pairs / all pairs
  double avg_fitness = 0.0;           ///< mean of per-trajectory best fitness
  int trajectory_count = 0;

  bool operator==(const AlgorithmFeatures&) const = default;
};

/// Which step of a trajectory the fitness average is taken over.
/// BestStep is the definition used everywhere; LastStep exists as an
/// explicit alternative and is never the default.
enum class FitnessBasis { BestStep, LastStep };

/// Number of trajectories whose best fitness equals best_global within the
/// fitness tolerance. best_global must be the optimum over the whole dataset.
int total_best_global_fitness(const AlgorithmRuns& algo, double best_global, Sense sense);

/// Fraction of trajectory pairs that share at least one location. Takes one
/// location list per trajectory (repeats are fine); 0 when there are fewer
/// than two trajectories.
double connectivity(const std::vector<std::vector<int>>& trajectory_locations);

double avg_fitness(const AlgorithmRuns& algo, Sense sense,
                   FitnessBasis basis = FitnessBasis::BestStep);

/// One AlgorithmFeatures per dataset algorithm, in dataset order. The STN
/// must have been built from the same dataset (connectivity uses its walks).
std::vector<AlgorithmFeatures> extract_all(const Dataset& dataset, const STN& stn);

}  // namespace stn
