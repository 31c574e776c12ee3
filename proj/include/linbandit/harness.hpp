#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linbandit/bounds.hpp"
#include "linbandit/environment.hpp"
#include "linbandit/geometry.hpp"
#include "linbandit/policies.hpp"

namespace linbandit {

struct ArmSetSpec {
  enum class Kind { Ball, Cloud, Catalog };
  Kind kind = Kind::Ball;
  /// Ball radius (ball kind only).
  double radius = 1.0;
  /// Number of points (cloud kind only).
  Index cloud_size = 0;
  std::string catalog_path;
  /// Radius of the inner subset X' (finite kinds). Zero selects the kind's default:
  /// 1/2 for clouds, 1 for catalogs.
  double inner_radius = 0.0;
  /// Neighbourhood radius of the exploration kernel (finite kinds).
  double kernel_radius = 0.5;
  bool renormalize = false;

  bool operator==(const ArmSetSpec&) const = default;
};

struct SimulationConfig {
  Index p = 30;
  /// Noise-to-signal ratio Delta = p sigma^2.
  double delta = 1.0;
  Index horizon = 100;
  Index reps = 2000;
  PolicyKind policy = PolicyKind::BallExplore;
  ArmSetSpec arm_set;
  std::uint64_t seed = 0;
  FeedbackKind feedback = FeedbackKind::GaussianLinear;
  double user_offset = 3.5;
  PhasedSchedule phased;
  bool diagnostics = false;
  bool bounds = true;
  /// Worker threads; 0 means hardware concurrency. Never affects results.
  unsigned workers = 0;

  double noise_var() const { return delta / static_cast<double>(p); }
  bool operator==(const SimulationConfig&) const = default;
};

/// Throws ConfigError on out-of-range fields, and on p < 2 or p Delta < 2 when bounds are on.
void validate(const SimulationConfig& config);

/// Builds (or loads) the arm set a config describes. Catalog problems raise InputError.
ArmSet build_arm_set(const SimulationConfig& config);

/// Independent stream for realization `index`, a pure function of (seed, index).
Rng realization_rng(std::uint64_t seed, std::uint64_t index);

/// Geometric grid 2, 4, 8, ... together with p Delta, 2 p Delta, 10 p Delta,
/// 20 p Delta, restricted to [1, horizon], sorted and unique.
std::vector<Index> probe_times(Index p, double delta, Index horizon);

/// Monte Carlo averages over realizations. Arrays are indexed by t - 1.
/// Posterior quantities at t are those of the state used to choose arm t,
/// i.e. after t - 1 observations.
struct TrajectorySummary {
  Index reps = 0;
  Index horizon = 0;
  std::vector<double> mean_reward, se_reward;
  std::vector<double> mean_risk, se_risk;
  std::vector<double> mean_trace, se_trace;
  std::vector<double> mean_norm;
  std::vector<double> mean_norm_sq, se_norm_sq;
  /// ||theta_hat_t||^2 + Tr Sigma_t.
  std::vector<double> mean_conservation, se_conservation;
  double mean_oracle_reward = 0.0;
  std::vector<Index> probes;
  /// Row-major [realization][probe] samples of ||theta_hat_t||; filled when diagnostics are on.
  std::vector<double> norm_samples;
};

TrajectorySummary run_experiment(const SimulationConfig& config, const ArmSet& set);
TrajectorySummary run_experiment(const SimulationConfig& config);

/// Exploration constants (kappa, gamma) used for bound curves and diagnostics.
/// Balls use the closed form (radius/sqrt 3, 2 radius^2/3); finite sets are probed.
struct GeometryConstants {
  double kappa = 0.0;
  double gamma = 0.0;
  bool estimated = false;
  GeometryCertificate certificate;
};

GeometryConstants geometry_constants(const ArmSet& set, std::uint64_t seed);

// Diagnostics.

struct DiagnosticCheck {
  std::string name;
  Index t = 0;
  double empirical = 0.0;
  double bound = 0.0;
  double se = 0.0;
  bool pass = false;
};

struct DiagnosticReport {
  std::vector<DiagnosticCheck> checks;
  bool all_pass() const;
};

/// Checks, at each probe time:
///  - conservation: mean(||theta_hat||^2 + Tr Sigma) = 1 within 3 s.e.
///  - second moment: E||theta_hat_t||^2 >= C(gamma, Delta)(t-1)/p - 3 s.e. for 2 <= t <= p Delta
///  - sub-Gaussian tail: P(||theta_hat_t|| >= sqrt(8(t-1)/(p Delta)) nu) <= exp(-(nu-1)^2/3) + 3 s.e.
///    for nu in {1.5, 2, 3}, t >= 2
///  - trace decay: E Tr Sigma_t <= C4 sqrt(p/t) + 3 s.e. for t > p Delta
DiagnosticReport run_diagnostics(const TrajectorySummary& summary, const SimulationConfig& config,
                                 double gamma);

// Regime fits.

struct FitReport {
  Index split = 0;
  /// R_t ~ c3 t^{3/2}.
  double c3 = 0.0;
  double residual_power = 0.0;
  /// R_t ~ c1 t - c2 sqrt(t).
  double c1 = 0.0;
  double c2 = 0.0;
  double residual_linear = 0.0;
  bool degenerate = false;
  std::string winner;
};

/// Least-squares fits of both forms to R_t on 1 <= t <= split.
FitReport fit_regimes(const std::vector<double>& cumulative_reward, Index split);
FitReport fit_regimes(const TrajectorySummary& summary, Index split);

}  // namespace linbandit
