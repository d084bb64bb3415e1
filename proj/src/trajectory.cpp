#include "stn/trajectory.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace stn {

Sense parse_sense(const std::string& s) {
  if (s == "minimize" || s == "min") return Sense::Minimize;
  if (s == "maximize" || s == "max") return Sense::Maximize;
  throw InputError(fmt::format("unknown sense '{}' (expected minimize or maximize)", s));
}

Space parse_space(const std::string& s) {
  if (s == "discrete") return Space::Discrete;
  if (s == "continuous") return Space::Continuous;
  throw InputError(fmt::format("unknown space '{}' (expected discrete or continuous)", s));
}

std::string to_string(Sense s) {
  return s == Sense::Minimize ? "minimize" : "maximize";
}

std::string to_string(Space s) {
  return s == Space::Discrete ? "discrete" : "continuous";
}

SolutionPoint SolutionPoint::discrete(std::string token) {
  SolutionPoint p;
  p.kind_ = Space::Discrete;
  p.token_ = std::move(token);
  return p;
}

SolutionPoint SolutionPoint::continuous(Eigen::VectorXd coords) {
  SolutionPoint p;
  p.kind_ = Space::Continuous;
  p.coords_ = std::move(coords);
  return p;
}

std::string SolutionPoint::key() const {
  if (kind_ == Space::Discrete) return token_;
  std::string out;
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt::format("{}", coords_[i]);
  }
  return out;
}

bool SolutionPoint::operator==(const SolutionPoint& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Space::Discrete) return token_ == other.token_;
  return coords_.size() == other.coords_.size() && coords_ == other.coords_;
}

std::size_t SolutionPointHash::operator()(const SolutionPoint& p) const {
  std::size_t h = p.kind() == Space::Discrete ? 0x9e3779b97f4a7c15ull : 0x2545f4914f6cdd1dull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  if (p.kind() == Space::Discrete) {
    mix(std::hash<std::string>{}(p.token()));
  } else {
    for (Eigen::Index i = 0; i < p.coords().size(); ++i)
      mix(std::hash<double>{}(p.coords()[i]));
  }
  return h;
}

double Trajectory::best_fitness(Sense sense) const {
  double best = steps.front().fitness;
  for (const Step& s : steps)
    if (fitness_better(sense, s.fitness, best)) best = s.fitness;
  return best;
}

double Trajectory::final_fitness() const { return steps.back().fitness; }

double Dataset::best_global_fitness() const {
  bool first = true;
  double best = 0.0;
  for (const AlgorithmRuns& a : algorithms)
    for (const Trajectory& t : a.trajectories) {
      double b = t.best_fitness(sense);
      if (first || fitness_better(sense, b, best)) {
        best = b;
        first = false;
      }
    }
  if (first) throw InputError("dataset has no trajectories");
  return best;
}

namespace {

std::string read_file_maybe_gz(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw InputError(fmt::format("input file does not exist: {}", path.string()));
  if (path.extension() == ".gz") {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (!gz) throw InputError(fmt::format("cannot open {}", path.string()));
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<size_t>(n));
    bool bad = n < 0;
    gzclose(gz);
    if (bad) throw InputError(fmt::format("gzip read error in {}", path.string()));
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError(fmt::format("read error in {}", path.string()));
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, const std::string& origin, int line_no,
                    const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError(fmt::format("{}:{}: malformed {} '{}'", origin, line_no, what, s));
  if (!std::isfinite(v))
    throw InputError(fmt::format("{}:{}: non-finite {} '{}'", origin, line_no, what, s));
  return v;
}

SolutionPoint parse_solution(std::string_view field, Space space,
                             const std::string& origin, int line_no) {
  if (space == Space::Discrete) {
    if (field.empty())
      throw InputError(fmt::format("{}:{}: empty solution token", origin, line_no));
    return SolutionPoint::discrete(std::string(field));
  }
  std::vector<double> coords;
  size_t start = 0;
  while (true) {
    size_t comma = field.find(',', start);
    std::string_view part = trim(field.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    coords.push_back(parse_double(part, origin, line_no, "coordinate"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
  return SolutionPoint::continuous(std::move(v));
}

}  // namespace

AlgorithmRuns parse_trajectory_text(const std::string& text,
                                    const std::string& algorithm_name,
                                    Space space, const std::string& origin) {
  AlgorithmRuns runs;
  runs.name = algorithm_name;
  std::map<int, size_t> index_of_run;  // run id -> position in runs.trajectories
  Eigen::Index dim = -1;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string_view::npos ? std::string_view::npos : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos)
      throw InputError(fmt::format("{}:{}: expected run<TAB>fitness<TAB>solution", origin, line_no));

    std::string_view run_field = trim(line.substr(0, t1));
    int run_id = 0;
    auto res = std::from_chars(run_field.data(), run_field.data() + run_field.size(), run_id);
    if (res.ec != std::errc{} || res.ptr != run_field.data() + run_field.size() || run_id < 1)
      throw InputError(fmt::format("{}:{}: malformed run id '{}'", origin, line_no, run_field));

    double fitness = parse_double(trim(line.substr(t1 + 1, t2 - t1 - 1)), origin, line_no, "fitness");
    SolutionPoint sol = parse_solution(trim(line.substr(t2 + 1)), space, origin, line_no);
    if (space == Space::Continuous) {
      if (dim < 0) dim = sol.dimension();
      if (sol.dimension() != dim)
        throw InputError(fmt::format("{}:{}: solution dimension {} differs from {}", origin,
                                     line_no, sol.dimension(), dim));
    }

    auto [it, inserted] = index_of_run.try_emplace(run_id, runs.trajectories.size());
    if (inserted) runs.trajectories.push_back(Trajectory{run_id, {}});
    runs.trajectories[it->second].steps.push_back(Step{fitness, std::move(sol)});
  }

  if (runs.trajectories.empty())
    throw InputError(fmt::format("{}: no trajectory data", origin));
  return runs;
}

AlgorithmRuns parse_trajectory_file(const std::filesystem::path& path,
                                    const std::string& algorithm_name, Space space) {
  return parse_trajectory_text(read_file_maybe_gz(path), algorithm_name, space, path.string());
}

Dataset load_dataset(
    const std::vector<std::pair<std::filesystem::path, std::string>>& inputs,
    Sense sense, Space space) {
  if (inputs.empty()) throw InputError("no input files given");
  Dataset ds;
  ds.sense = sense;
  ds.space = space;
  std::set<std::string> names;
  for (const auto& [path, name] : inputs) {
    if (!names.insert(name).second)
      throw InputError(fmt::format("duplicate algorithm name '{}'", name));
    ds.algorithms.push_back(parse_trajectory_file(path, name, space));
  }
  if (space == Space::Continuous) {
    Eigen::Index dim = -1;
    for (const AlgorithmRuns& a : ds.algorithms)
      for (const Trajectory& t : a.trajectories)
        for (const Step& s : t.steps) {
          if (dim < 0) dim = s.solution.dimension();
          if (s.solution.dimension() != dim)
            throw InputError(fmt::format(
                "algorithm '{}' has solution dimension {} but the dataset uses {}", a.name,
                s.solution.dimension(), dim));
        }
  }
  return ds;
}

std::string to_tsv(const AlgorithmRuns& runs) {
  std::string out;
  for (const Trajectory& t : runs.trajectories)
    for (const Step& s : t.steps)
      out += fmt::format("{}\t{}\t{}\n", t.run_id, s.fitness, s.solution.key());
  return out;
}

bool operator==(const Step& a, const Step& b) {
  return a.fitness == b.fitness && a.solution == b.solution;
}

bool operator==(const Trajectory& a, const Trajectory& b) {
  return a.run_id == b.run_id && a.steps == b.steps;
}

bool operator==(const AlgorithmRuns& a, const AlgorithmRuns& b) {
  return a.name == b.name && a.trajectories == b.trajectories;
}

}  // namespace stn
