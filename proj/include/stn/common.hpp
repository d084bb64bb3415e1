#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stn {

/// Optimization direction of the objective function.
enum class Sense { Minimize, Maximize };

/// Kind of search space the trajectories live in.
enum class Space { Discrete, Continuous };

/// Absolute tolerance for comparing fitness values. Integer-valued fitness
/// compares exactly under this tolerance as well, since distinct integers
/// differ by at least 1.
inline constexpr double kFitnessTolerance = 1e-9;

inline bool fitness_equal(double a, double b) {
  return std::abs(a - b) <= kFitnessTolerance;
}

/// True if `a` is strictly better than `b` under the given sense.
inline bool fitness_better(Sense sense, double a, double b) {
  return sense == Sense::Minimize ? a < b : a > b;
}

Sense parse_sense(const std::string& s);
Space parse_space(const std::string& s);
std::string to_string(Sense s);
std::string to_string(Space s);

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad or missing input: unreadable files, malformed lines, inconsistent
/// datasets, unknown names. Maps to exit code 2 in the CLI.
struct InputError : Error {
  using Error::Error;
};

/// A domain constraint was violated: cluster number outside the derived
/// limits, incompatible distance measure, inconsistent limits. Exit code 3.
struct ConstraintError : Error {
  using Error::Error;
};

/// Endpoint-side failure when talking to an LLM service. Exit code 4.
struct EndpointError : Error {
  using Error::Error;
};

}  // namespace stn
