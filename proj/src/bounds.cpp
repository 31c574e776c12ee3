#include "linbandit/bounds.hpp"

#include <cmath>
#include <limits>

namespace linbandit {

BoundConstants bound_constants(Index p, double delta, double kappa, double gamma) {
  const double pd = static_cast<double>(p) * delta;
  if (p < 2 || !(pd >= 2.0))
    throw ConfigError("bounds require p >= 2 and p*delta >= 2 (got p=" + std::to_string(p) +
                      ", p*delta=" + std::to_string(pd) + ")");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("kappa must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");

  BoundConstants c;
  const double sd = std::sqrt(delta);
  c.c_gamma_delta = gamma / (4.0 * (delta + 1.0));
  c.alpha = 1.0 + std::sqrt(3.0 * std::log(96.0 / (delta * c.c_gamma_delta)));
  c.c1 = kappa * sd * c.c_gamma_delta / (24.0 * c.alpha);
  c.c2 = 2.0 / (3.0 * sd);
  c.c3 = 70.0 * (delta + 1.0) / sd;
  c.c4 = 3.0 * (delta + 1.0) / sd;
  c.omega = 1.0 / (2.0 * (static_cast<double>(p) + 2.0));
  return c;
}

double short_lower(const BoundConstants& c, Index p, double t) {
  return c.c1 * std::pow(t, 1.5) / std::sqrt(static_cast<double>(p));
}

double short_upper(const BoundConstants& c, Index p, double t) {
  return c.c2 * std::pow(t, 1.5) / std::sqrt(static_cast<double>(p));
}

double long_risk_lower(Index p, double delta, double t) {
  const double pd = static_cast<double>(p) * delta;
  return std::sqrt(pd * t) - pd / 2.0;
}

double long_risk_upper(const BoundConstants& c, Index p, double t) {
  return c.c3 * std::pow(static_cast<double>(p) * t, 0.5 + c.omega);
}

BoundCurves bound_curves(Index p, double delta, double kappa, double gamma, Index horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  BoundCurves out;
  out.constants = bound_constants(p, delta, kappa, gamma);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double pd = static_cast<double>(p) * delta;
  const auto n = static_cast<std::size_t>(horizon);
  out.lower_short.assign(n, nan);
  out.upper_short.assign(n, nan);
  out.lower_long_risk.assign(n, nan);
  out.upper_long_risk.assign(n, nan);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    if (t <= pd) {
      if (t > 1.0) out.lower_short[i] = short_lower(out.constants, p, t);
      out.upper_short[i] = short_upper(out.constants, p, t);
    } else {
      out.lower_long_risk[i] = long_risk_lower(p, delta, t);
      out.upper_long_risk[i] = long_risk_upper(out.constants, p, t);
    }
  }
  return out;
}

}  // namespace linbandit
