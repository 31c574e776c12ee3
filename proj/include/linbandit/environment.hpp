#pragma once

#include "linbandit/types.hpp"

namespace linbandit {

/// The unknown user vector theta.
struct ParameterVector {
  Vector theta;
};

enum class FeedbackKind { GaussianLinear, QuantizedCatalog };

/// How an arm's reward is observed.
///
/// GaussianLinear:   y = <x, theta> + N(0, sigma^2).
/// QuantizedCatalog: y = Quant(a_u + <x, theta>) - a_u, a one-to-five star
///                   rating centred by the user offset a_u.
struct FeedbackModel {
  FeedbackKind kind = FeedbackKind::GaussianLinear;
  double sigma = 1.0;
  double user_offset = 3.5;
};

struct Reward {
  double observed = 0.0;
  double expected = 0.0;
};

/// theta ~ N(0, I_p / p).
ParameterVector draw_theta(Index p, Rng& rng);

/// Round half up, then clamp to {1, ..., 5}.
double quantize_rating(double z);

Reward reward(const FeedbackModel& model, const Vector& arm, const ParameterVector& theta, Rng& rng);

}  // namespace linbandit
