#include <cmath>

#include <Eigen/QR>

#include "linbandit/harness.hpp"

namespace linbandit {

FitReport fit_regimes(const std::vector<double>& reward, Index split) {
  const Index T = static_cast<Index>(reward.size());
  if (split <= 1 || split >= T)
    throw std::invalid_argument("fit split must lie strictly between 1 and the horizon");

  FitReport out;
  out.split = split;
  Vector y(split);
  Vector t(split);
  for (Index i = 0; i < split; ++i) {
    y[i] = reward[static_cast<std::size_t>(i)];
    t[i] = static_cast<double>(i + 1);
  }

  const Vector t32 = t.array().pow(1.5).matrix();
  const double denom = t32.squaredNorm();
  out.c3 = t32.dot(y) / denom;
  out.residual_power = (y - out.c3 * t32).squaredNorm();

  Matrix design(split, 2);
  design.col(0) = t;
  design.col(1) = -t.array().sqrt().matrix();
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < 2) {
    out.degenerate = true;
    out.winner = "degenerate";
    return out;
  }
  const Vector coef = qr.solve(y);
  out.c1 = coef[0];
  out.c2 = coef[1];
  out.residual_linear = (y - design * coef).squaredNorm();
  out.winner = out.residual_power < out.residual_linear ? "power_3_2" : "linear_minus_root";
  return out;
}

FitReport fit_regimes(const TrajectorySummary& summary, Index split) {
  return fit_regimes(summary.mean_reward, split);
}

}  // namespace linbandit
