#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "linbandit/types.hpp"

namespace linbandit {

/// Gaussian posterior over the parameter vector under linear observations
/// y = <x, theta> + N(0, noise_var), starting from the prior N(0, I/p).
///
/// `step` counts observations absorbed plus one, so a fresh state has step 1
/// and holds the posterior given zero observations.
template <typename Scalar>
struct Posterior {
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  VectorType mean;
  MatrixType covariance;
  std::size_t step = 1;
  Scalar noise_var = Scalar(1);

  Index dim() const { return mean.size(); }
};

using PosteriorState = Posterior<double>;

template <typename Scalar = double>
Posterior<Scalar> init_posterior(Index p, Scalar noise_var) {
  if (p < 1) throw std::invalid_argument("posterior dimension must be >= 1");
  if (!(noise_var > Scalar(0)) || !std::isfinite(static_cast<double>(noise_var)))
    throw std::invalid_argument("noise variance must be positive and finite");
  Posterior<Scalar> state;
  state.mean = Posterior<Scalar>::VectorType::Zero(p);
  state.covariance = Posterior<Scalar>::MatrixType::Identity(p, p) / Scalar(p);
  state.step = 1;
  state.noise_var = noise_var;
  return state;
}

/// Absorbs one observation in place using the rank-one inversion-lemma form.
///
/// Sigma' = Sigma - (Sigma x)(Sigma x)^T / s,  s = noise_var + x^T Sigma x
/// mean'  = mean + (Sigma x)(y - <x, mean>) / s
///
/// The covariance is re-symmetrized afterwards. A negative diagonal entry
/// below -1e-8 means the update lost positive semidefiniteness; that is
/// reported as a NumericalError instead of being repaired.
template <typename Scalar, typename Derived>
void absorb(Posterior<Scalar>& state, const Eigen::MatrixBase<Derived>& x, Scalar y) {
  if (x.size() != state.dim())
    throw std::invalid_argument("arm dimension " + std::to_string(x.size()) +
                                " does not match posterior dimension " +
                                std::to_string(state.dim()));
  if (!std::isfinite(static_cast<double>(y)))
    throw std::invalid_argument("reward must be finite");
  if (static_cast<double>(x.norm()) > 1.0 + kNormTolerance)
    throw std::invalid_argument("arm norm exceeds 1");

  const typename Posterior<Scalar>::VectorType sx = state.covariance * x;
  const Scalar s = state.noise_var + x.dot(sx);
  if (!(s > Scalar(0))) throw NumericalError("non-positive innovation variance in posterior update");

  const Scalar innovation = y - x.dot(state.mean);
  state.mean.noalias() += sx * (innovation / s);
  state.covariance.noalias() -= (sx / s) * sx.transpose();

  const Index p = state.dim();
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const Scalar avg = (state.covariance(i, j) + state.covariance(j, i)) / Scalar(2);
      state.covariance(i, j) = avg;
      state.covariance(j, i) = avg;
    }
  }
  if (static_cast<double>(state.covariance.diagonal().minCoeff()) < -1e-8)
    throw NumericalError("posterior covariance lost positive semidefiniteness");
  ++state.step;
}

/// Pure form of absorb().
template <typename Scalar, typename Derived>
Posterior<Scalar> update(Posterior<Scalar> state, const Eigen::MatrixBase<Derived>& x, Scalar y) {
  absorb(state, x, y);
  return state;
}

template <typename Scalar>
Scalar trace_cov(const Posterior<Scalar>& state) {
  return state.covariance.trace();
}

template <typename Scalar>
Scalar mean_norm(const Posterior<Scalar>& state) {
  return state.mean.norm();
}

}  // namespace linbandit
