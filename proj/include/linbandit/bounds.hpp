#pragma once

#include <vector>

#include "linbandit/types.hpp"

namespace linbandit {

/// Explicit constants of the short- and long-horizon reward bounds.
struct BoundConstants {
  double c_gamma_delta = 0.0;  // C(gamma, Delta) = gamma / (4 (Delta + 1))
  double alpha = 0.0;          // 1 + sqrt(3 log(96 / (Delta C)))
  double c1 = 0.0;             // kappa sqrt(Delta) C / (24 alpha)
  double c2 = 0.0;             // 2 / (3 sqrt(Delta))
  double c3 = 0.0;             // 70 (Delta + 1) / sqrt(Delta)
  double c4 = 0.0;             // 3 (Delta + 1) / sqrt(Delta)
  double omega = 0.0;          // 1 / (2 (p + 2))
};

/// Bound curves on t = 1..T (index t-1). Entries outside a bound's range of
/// validity are NaN: the reward sandwich applies for 1 < t <= p Delta (upper
/// for t >= 1), the risk bounds for t > p Delta.
struct BoundCurves {
  BoundConstants constants;
  std::vector<double> lower_short;
  std::vector<double> upper_short;
  std::vector<double> lower_long_risk;
  std::vector<double> upper_long_risk;
};

/// Throws ConfigError unless p >= 2, p Delta >= 2 and kappa, gamma in (0, 1].
BoundConstants bound_constants(Index p, double delta, double kappa, double gamma);

BoundCurves bound_curves(Index p, double delta, double kappa, double gamma, Index horizon);

/// Cumulative reward sandwich at time t.
double short_lower(const BoundConstants& c, Index p, double t);
double short_upper(const BoundConstants& c, Index p, double t);
/// Risk floor sqrt(p t Delta) - p Delta / 2 valid for any policy at t > p Delta.
double long_risk_lower(Index p, double delta, double t);
/// Risk ceiling C3 (p t)^{1/2 + omega}.
double long_risk_upper(const BoundConstants& c, Index p, double t);

}  // namespace linbandit
