#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stn/common.hpp"

namespace stn {

/// A single visited solution: an opaque token in discrete spaces, a real
/// vector in continuous ones. Identity is structural; two points parsed from
/// different textual spellings of the same value compare equal.
class SolutionPoint {
 public:
  static SolutionPoint discrete(std::string token);
  static SolutionPoint continuous(Eigen::VectorXd coords);

  Space kind() const { return kind_; }
  const std::string& token() const { return token_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dimension() const { return coords_.size(); }

  /// Canonical text form: the token itself, or comma-joined shortest
  /// round-trip coordinates. Stable across runs; used as location identity.
  std::string key() const;

  bool operator==(const SolutionPoint& other) const;

 private:
  Space kind_ = Space::Discrete;
  std::string token_;
  Eigen::VectorXd coords_;
};

struct SolutionPointHash {
  std::size_t operator()(const SolutionPoint& p) const;
};

struct Step {
  double fitness = 0.0;
  SolutionPoint solution;
};

/// One run of one algorithm: the ordered log of visited (fitness, solution)
/// states.
struct Trajectory {
  int run_id = 0;
  std::vector<Step> steps;

  double best_fitness(Sense sense) const;
  double final_fitness() const;
};

struct AlgorithmRuns {
  std::string name;
  std::vector<Trajectory> trajectories;
};

struct Dataset {
  std::vector<AlgorithmRuns> algorithms;
  Sense sense = Sense::Minimize;
  Space space = Space::Continuous;

  /// Optimum fitness over every step of every trajectory of every algorithm.
  double best_global_fitness() const;
};

/// Parses one TSV trajectory file (`run<TAB>fitness<TAB>solution`, one line
/// per step; gzip-compressed files with a `.gz` suffix are accepted).
/// Steps are grouped by run id; trajectories appear in order of first
/// appearance, steps in line order.
AlgorithmRuns parse_trajectory_file(const std::filesystem::path& path,
                                    const std::string& algorithm_name,
                                    Space space);

/// Same parse over in-memory text, for callers that already hold the bytes.
AlgorithmRuns parse_trajectory_text(const std::string& text,
                                    const std::string& algorithm_name,
                                    Space space,
                                    const std::string& origin = "<memory>");

/// Loads and validates the full dataset: distinct algorithm names, one
/// space kind, one coordinate dimension across all files.
Dataset load_dataset(
    const std::vector<std::pair<std::filesystem::path, std::string>>& inputs,
    Sense sense, Space space);

/// Canonical TSV serialization of one algorithm's runs. Parsing the output
/// again yields an equal AlgorithmRuns.
std::string to_tsv(const AlgorithmRuns& runs);

bool operator==(const Step& a, const Step& b);
bool operator==(const Trajectory& a, const Trajectory& b);
bool operator==(const AlgorithmRuns& a, const AlgorithmRuns& b);

}  // namespace stn
