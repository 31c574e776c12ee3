#include "linbandit/environment.hpp"

#include <algorithm>
#include <cmath>

namespace linbandit {

ParameterVector draw_theta(Index p, Rng& rng) {
  if (p < 1) throw std::invalid_argument("dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(p)));
  ParameterVector out{Vector(p)};
  for (Index i = 0; i < p; ++i) out.theta[i] = normal(rng);
  return out;
}

double quantize_rating(double z) { return std::clamp(std::floor(z + 0.5), 1.0, 5.0); }

Reward reward(const FeedbackModel& model, const Vector& arm, const ParameterVector& theta, Rng& rng) {
  if (arm.size() != theta.theta.size())
    throw std::invalid_argument("arm and parameter dimensions differ");
  if (model.sigma < 0.0) throw std::invalid_argument("noise standard deviation must be >= 0");
  const double mean = arm.dot(theta.theta);
  Reward r;
  r.expected = mean;
  switch (model.kind) {
    case FeedbackKind::GaussianLinear: {
      double noise = 0.0;
      if (model.sigma > 0.0) noise = std::normal_distribution<double>(0.0, model.sigma)(rng);
      r.observed = mean + noise;
      break;
    }
    case FeedbackKind::QuantizedCatalog:
      r.observed = quantize_rating(model.user_offset + mean) - model.user_offset;
      break;
  }
  return r;
}

}  // namespace linbandit
