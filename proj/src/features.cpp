#include "stn/features.hpp"

#include <algorithm>
#include <set>

#include "stn/common.hpp"

namespace stn {

int total_best_global_fitness(const AlgorithmRuns& algo, double best_global, Sense sense) {
  int count = 0;
  for (const auto& traj : algo.trajectories)
    if (fitness_equal(traj.best_fitness(sense), best_global)) ++count;
  return count;
}

double connectivity(const std::vector<std::vector<int>>& trajectory_locations) {
  const int m = static_cast<int>(trajectory_locations.size());
  if (m < 2) return 0.0;
  std::vector<std::set<int>> sets;
  sets.reserve(m);
  for (const auto& locs : trajectory_locations) sets.emplace_back(locs.begin(), locs.end());
  int overlapping = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const auto& small = sets[i].size() <= sets[j].size() ? sets[i] : sets[j];
      const auto& large = sets[i].size() <= sets[j].size() ? sets[j] : sets[i];
      if (std::any_of(small.begin(), small.end(), [&](int n) { return large.count(n) > 0; }))
        ++overlapping;
    }
  return static_cast<double>(overlapping) / (static_cast<double>(m) * (m - 1) / 2.0);
}

double avg_fitness(const AlgorithmRuns& algo, Sense sense, FitnessBasis basis) {
  if (algo.trajectories.empty())
    throw InputError("average fitness needs at least one trajectory");
  double sum = 0.0;
  for (const auto& traj : algo.trajectories)
    sum += basis == FitnessBasis::BestStep ? traj.best_fitness(sense) : traj.final_fitness();
  return sum / static_cast<double>(algo.trajectories.size());
}

std::vector<AlgorithmFeatures> extract_all(const Dataset& dataset, const STN& stn) {
  if (stn.algorithms.size() != dataset.algorithms.size())
    throw InputError("STN was not built from this dataset (algorithm count differs)");
  std::vector<AlgorithmFeatures> out;
  out.reserve(dataset.algorithms.size());
  for (size_t a = 0; a < dataset.algorithms.size(); ++a) {
    const auto& algo = dataset.algorithms[a];
    if (stn.algorithms[a] != algo.name)
      throw InputError("STN was not built from this dataset (algorithm names differ)");
    AlgorithmFeatures f;
    f.algorithm = algo.name;
    f.trajectory_count = static_cast<int>(algo.trajectories.size());
    f.total_best_global_fitness =
        total_best_global_fitness(algo, stn.best_global_fitness, dataset.sense);
    f.connectivity = connectivity(stn.walks[a]);
    f.avg_fitness = avg_fitness(algo, dataset.sense);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace stn
