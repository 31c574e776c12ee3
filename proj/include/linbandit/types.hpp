#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace linbandit {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random engine used everywhere. Every function that draws takes one by reference.
using Rng = std::mt19937_64;

/// Tolerance on the unit-norm constraint of arms.
inline constexpr double kNormTolerance = 1e-9;

/// A playable feature vector. Finite arm sets also carry the item's position and id.
struct Arm {
  Vector vector;
  std::optional<Index> index;
  std::optional<std::string> id;
};

// Error taxonomy. The CLI maps each family onto a distinct exit code.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or contradictory configuration (includes violated theorem hypotheses).
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed input data, e.g. a bad catalog row.
struct InputError : Error {
  using Error::Error;
};

/// A numerical invariant was violated at runtime.
struct NumericalError : Error {
  using Error::Error;
};

/// The exploration kernel around a finite-set arm could not be built.
struct KernelInfeasible : Error {
  using Error::Error;
};

}  // namespace linbandit
