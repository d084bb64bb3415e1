#include "stn/partitioning.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "stn/common.hpp"
#include "stn/csv.hpp"

namespace stn {

DistanceMeasure parse_measure(const std::string& s) {
  std::string low;
  low.reserve(s.size());
  for (char c : s) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "hamming") return DistanceMeasure::Hamming;
  if (low == "euclidean") return DistanceMeasure::Euclidean;
  if (low == "manhattan") return DistanceMeasure::Manhattan;
  throw InputError(fmt::format("unknown distance measure '{}' (expected hamming, euclidean or manhattan)", s));
}

std::string to_string(DistanceMeasure m) {
  switch (m) {
    case DistanceMeasure::Hamming: return "hamming";
    case DistanceMeasure::Euclidean: return "euclidean";
    case DistanceMeasure::Manhattan: return "manhattan";
  }
  throw Error("unreachable");
}

void PartitionConfig::validate() const {
  if (!(cluster_size_pct > 0.0) || cluster_size_pct > 100.0)
    throw InputError(fmt::format("cluster_size must be in (0, 100], got {}", cluster_size_pct));
  if (!(volume_size_pct > 0.0) || volume_size_pct > 100.0)
    throw InputError(fmt::format("volume_size must be in (0, 100], got {}", volume_size_pct));
  if (cluster_number < 1)
    throw InputError(fmt::format("cluster_number must be at least 1, got {}", cluster_number));
}

double distance(const SolutionPoint& a, const SolutionPoint& b, DistanceMeasure measure) {
  if (a.kind() != b.kind())
    throw InputError("cannot measure distance between discrete and continuous solutions");
  if (measure == DistanceMeasure::Hamming) {
    if (a.kind() != Space::Discrete)
      throw InputError("hamming distance requires discrete solutions");
    const std::string& s = a.token();
    const std::string& t = b.token();
    if (s.size() != t.size())
      throw InputError(fmt::format("hamming distance requires equal-length solutions ({} vs {})",
                                   s.size(), t.size()));
    int diff = 0;
    for (size_t i = 0; i < s.size(); ++i)
      if (s[i] != t[i]) ++diff;
    return static_cast<double>(diff);
  }
  if (a.kind() != Space::Continuous)
    throw InputError(fmt::format("{} distance requires continuous solutions", to_string(measure)));
  if (a.dimension() != b.dimension())
    throw InputError(fmt::format("dimension mismatch in distance ({} vs {})", a.dimension(), b.dimension()));
  if (measure == DistanceMeasure::Euclidean) return (a.coords() - b.coords()).norm();
  return (a.coords() - b.coords()).lpNorm<1>();
}

namespace {

constexpr double kSlack = 1e-9;

/// Per-cluster bookkeeping needed to evaluate the size and volume limits
/// without rescanning the members.
struct ClusterState {
  std::vector<int> members;            // original (deduped) indices
  Eigen::VectorXd lo, hi;              // continuous bounding box
  std::vector<std::set<char>> symbols; // discrete: distinct symbols per position
};

struct SpanInfo {
  Eigen::VectorXd continuous;      // per-dimension dataset span
  std::vector<int> discrete;       // per-position distinct symbol count - 1
};

SpanInfo dataset_spans(const std::vector<SolutionPoint>& pts) {
  SpanInfo info;
  if (pts.front().kind() == Space::Continuous) {
    Eigen::VectorXd lo = pts.front().coords();
    Eigen::VectorXd hi = lo;
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p.coords());
      hi = hi.cwiseMax(p.coords());
    }
    info.continuous = hi - lo;
  } else {
    const size_t len = pts.front().token().size();
    std::vector<std::set<char>> seen(len);
    for (const auto& p : pts) {
      if (p.token().size() != len)
        throw InputError("volume limit requires equal-length discrete solutions");
      for (size_t i = 0; i < len; ++i) seen[i].insert(p.token()[i]);
    }
    info.discrete.reserve(len);
    for (const auto& s : seen) info.discrete.push_back(static_cast<int>(s.size()) - 1);
  }
  return info;
}

ClusterState singleton(const std::vector<SolutionPoint>& pts, int idx, bool track_volume) {
  ClusterState c;
  c.members.push_back(idx);
  if (!track_volume) return c;
  const SolutionPoint& p = pts[idx];
  if (p.kind() == Space::Continuous) {
    c.lo = p.coords();
    c.hi = p.coords();
  } else {
    c.symbols.resize(p.token().size());
    for (size_t i = 0; i < p.token().size(); ++i) c.symbols[i].insert(p.token()[i]);
  }
  return c;
}

/// Fraction of the dataset bounding volume a merge of `a` and `b` would span.
/// Dimensions the dataset itself does not vary in are skipped.
double merged_volume_ratio(const ClusterState& a, const ClusterState& b, const SpanInfo& spans) {
  double ratio = 1.0;
  if (a.lo.size() > 0) {
    for (Eigen::Index d = 0; d < spans.continuous.size(); ++d) {
      if (spans.continuous[d] <= 0.0) continue;
      double span = std::max(a.hi[d], b.hi[d]) - std::min(a.lo[d], b.lo[d]);
      ratio *= span / spans.continuous[d];
    }
  } else {
    for (size_t i = 0; i < spans.discrete.size(); ++i) {
      if (spans.discrete[i] <= 0) continue;
      std::set<char> u = a.symbols[i];
      u.insert(b.symbols[i].begin(), b.symbols[i].end());
      ratio *= static_cast<double>(u.size() - 1) / spans.discrete[i];
    }
  }
  return ratio;
}

struct Agglomeration {
  std::vector<ClusterState> clusters;  // ordered by lowest contained index
};

/// Complete-linkage agglomeration over the deduped points. Stops when the
/// cluster count reaches `target`, or when no pair can merge without breaking
/// a limit (target <= 0 runs to exhaustion). Among equally close mergeable
/// pairs the one with the lowest slot indices wins, which makes the merge
/// order - and therefore every downstream id - deterministic.
Agglomeration agglomerate(const std::vector<SolutionPoint>& pts, const PartitionConfig& cfg,
                          int target) {
  const int n = static_cast<int>(pts.size());
  const bool check_size = cfg.cluster_size_pct < 100.0;
  const bool check_volume = cfg.volume_size_pct < 100.0;
  SpanInfo spans;
  if (check_volume) spans = dataset_spans(pts);

  Agglomeration agg;
  agg.clusters.reserve(n);
  for (int i = 0; i < n; ++i) agg.clusters.push_back(singleton(pts, i, check_volume));

  // Complete-linkage distance matrix, kept in step with the cluster list.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = distance(pts[i], pts[j], cfg.measure);

  auto merge_allowed = [&](int i, int j) {
    if (check_size) {
      double size = static_cast<double>(agg.clusters[i].members.size() + agg.clusters[j].members.size());
      if (100.0 * size > cfg.cluster_size_pct * n + kSlack) return false;
    }
    if (check_volume) {
      double ratio = merged_volume_ratio(agg.clusters[i], agg.clusters[j], spans);
      if (100.0 * ratio > cfg.volume_size_pct + kSlack) return false;
    }
    return true;
  };

  while (static_cast<int>(agg.clusters.size()) > std::max(target, 1)) {
    const int m = static_cast<int>(agg.clusters.size());
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (dist[i][j] < best && merge_allowed(i, j)) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
    if (bi < 0) break;  // every remaining merge would break a limit

    ClusterState& a = agg.clusters[bi];
    ClusterState& b = agg.clusters[bj];
    a.members.insert(a.members.end(), b.members.begin(), b.members.end());
    if (check_volume) {
      if (a.lo.size() > 0) {
        a.lo = a.lo.cwiseMin(b.lo);
        a.hi = a.hi.cwiseMax(b.hi);
      } else {
        for (size_t p = 0; p < a.symbols.size(); ++p)
          a.symbols[p].insert(b.symbols[p].begin(), b.symbols[p].end());
      }
    }
    for (int k = 0; k < m; ++k)
      if (k != bi && k != bj) dist[bi][k] = dist[k][bi] = std::max(dist[bi][k], dist[bj][k]);
    agg.clusters.erase(agg.clusters.begin() + bj);
    for (auto& row : dist) row.erase(row.begin() + bj);
    dist.erase(dist.begin() + bj);
  }
  return agg;
}

std::vector<SolutionPoint> dedupe(const std::vector<SolutionPoint>& solutions) {
  std::vector<SolutionPoint> pts;
  std::unordered_map<SolutionPoint, int, SolutionPointHash> seen;
  for (const auto& p : solutions)
    if (seen.emplace(p, static_cast<int>(pts.size())).second) pts.push_back(p);
  return pts;
}

}  // namespace

ClusterLimits cluster_limits(const std::vector<SolutionPoint>& solutions,
                             const PartitionConfig& config) {
  config.validate();
  if (solutions.empty()) throw InputError("cannot derive cluster limits for an empty solution set");
  std::vector<SolutionPoint> pts = dedupe(solutions);
  Agglomeration agg = agglomerate(pts, config, /*target=*/0);
  ClusterLimits limits;
  limits.min_clusters = static_cast<int>(agg.clusters.size());
  limits.max_clusters = static_cast<int>(pts.size());
  return limits;
}

PartitionResult partition(const std::vector<SolutionPoint>& solutions,
                          const PartitionConfig& config) {
  config.validate();
  if (solutions.empty()) throw InputError("cannot partition an empty solution set");
  std::vector<SolutionPoint> pts = dedupe(solutions);
  ClusterLimits limits = cluster_limits(pts, config);
  if (config.cluster_number < limits.min_clusters || config.cluster_number > limits.max_clusters)
    throw ConstraintError(fmt::format(
        "cluster_number {} is outside the reachable range [{}, {}] under the configured limits",
        config.cluster_number, limits.min_clusters, limits.max_clusters));

  Agglomeration agg = agglomerate(pts, config, config.cluster_number);

  PartitionResult result;
  result.solutions = std::move(pts);
  result.cluster_count = static_cast<int>(agg.clusters.size());
  result.assignment.assign(result.solutions.size(), -1);
  for (int cid = 0; cid < result.cluster_count; ++cid)
    for (int idx : agg.clusters[cid].members) result.assignment[idx] = cid;

  // Medoid representative: member with the smallest total distance to the
  // rest of its cluster, earliest one on ties.
  result.representatives.reserve(result.cluster_count);
  for (int cid = 0; cid < result.cluster_count; ++cid) {
    std::vector<int> members = agg.clusters[cid].members;
    std::sort(members.begin(), members.end());
    int best_idx = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (int i : members) {
      double sum = 0.0;
      for (int j : members)
        if (j != i) sum += distance(result.solutions[i], result.solutions[j], config.measure);
      if (sum < best_sum) {
        best_sum = sum;
        best_idx = i;
      }
    }
    result.representatives.push_back(result.solutions[best_idx]);
  }

  for (size_t i = 0; i < result.solutions.size(); ++i)
    result.index_.emplace(result.solutions[i], result.assignment[i]);
  return result;
}

int PartitionResult::cluster_of(const SolutionPoint& p) const {
  auto it = index_.find(p);
  if (it == index_.end())
    throw ConstraintError(fmt::format("solution '{}' is not covered by the partition", p.key()));
  return it->second;
}

std::string PartitionResult::assignments_csv() const {
  std::string out = "solution_index,solution,cluster_id\n";
  for (size_t i = 0; i < solutions.size(); ++i)
    out += fmt::format("{},{},{}\n", i, csv_escape(solutions[i].key()), assignment[i]);
  return out;
}

std::vector<SolutionPoint> collect_solutions(const Dataset& dataset) {
  std::vector<SolutionPoint> all;
  for (const auto& algo : dataset.algorithms)
    for (const auto& traj : algo.trajectories)
      for (const auto& step : traj.steps) all.push_back(step.solution);
  return all;
}

std::optional<double> ParameterUpdate::numeric() const {
  std::string s = value;
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  if (!s.empty() && s.back() == '%') s.pop_back();
  while (!s.empty() && issp(s.back())) s.pop_back();
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_known_parameter(const std::string& name) {
  return name == "cluster_size" || name == "volume_size" || name == "cluster_number" ||
         name == "distance_measure";
}

}  // namespace stn
