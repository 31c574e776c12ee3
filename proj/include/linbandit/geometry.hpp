#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linbandit/types.hpp"

namespace linbandit {

enum class ArmSetKind { UnitBall, ContainedBall, UniformCloud, Catalog };

/// Which part of the arm set an argmax ranges over: the whole set X, or the
/// inner subset X' from which exploration kernels are centred.
enum class Subset { Full, Inner };

/// An immutable arm set.
///
/// Ball kinds: X = Ball(radius), X' = boundary of Ball(radius / sqrt(3)),
/// exploration kernel z = x + sqrt(2/3) radius P_x^perp u.
///
/// Finite kinds (uniform cloud, catalog): X is the stored point list,
/// X' = X intersected with Ball(inner_radius), and the exploration kernel is a
/// reweighting of the items within kernel_radius of the centre.
class ArmSet {
 public:
  static ArmSet unit_ball(Index p);
  static ArmSet contained_ball(Index p, double radius);
  /// M points i.i.d. uniform in the unit ball, drawn from their own stream.
  static ArmSet uniform_cloud(Index p, Index m, std::uint64_t seed, double inner_radius = 0.5,
                              double kernel_radius = 0.5);
  /// Items are columns of `points`. Items are reordered by id (numerically when
  /// every id is an integer) so that index order equals id order.
  static ArmSet catalog(Matrix points, std::vector<std::string> ids, double inner_radius = 1.0,
                        double kernel_radius = 0.5);
  /// Finite set from raw columns in the given order (used for hand-built sets).
  static ArmSet finite(Matrix points, double inner_radius = 1.0, double kernel_radius = 0.5);

  ArmSetKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  bool is_finite() const { return kind_ == ArmSetKind::UniformCloud || kind_ == ArmSetKind::Catalog; }

  /// Ball kinds only.
  double radius() const { return radius_; }
  /// Radius of X' (ball kinds: radius/sqrt(3)).
  double inner_radius() const { return inner_radius_; }
  double kernel_radius() const { return kernel_radius_; }

  /// Finite kinds only: points as columns, optional ids, indices of X'.
  const Matrix& points() const { return points_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Index>& inner_indices() const { return inner_; }
  Index size() const { return points_.cols(); }

  Arm item(Index i) const;

  /// Membership in X up to the norm tolerance (ball) or exact column match (finite).
  bool contains(const Vector& x) const;

 private:
  ArmSetKind kind_ = ArmSetKind::UnitBall;
  Index dim_ = 0;
  double radius_ = 1.0;
  double inner_radius_ = 1.0;
  double kernel_radius_ = 0.5;
  Matrix points_;
  std::vector<std::string> ids_;
  std::vector<Index> inner_;

  void build_inner();
};

/// Uniformly distributed unit vector (normalized standard Gaussian).
Vector uniform_unit_vector(Index p, Rng& rng);
/// Uniform point in Ball(radius).
Vector uniform_in_ball(Index p, double radius, Rng& rng);

/// u - d <d, u> for a unit vector d.
Vector project_out(const Vector& u, const Vector& unit_direction);

/// Maximizer of <x, direction> over X (Subset::Full) or X' (Subset::Inner).
/// A zero direction is replaced by e_1. Ties in finite sets go to the lowest index.
/// Throws ConfigError if the requested subset is empty.
Arm best_arm(const ArmSet& set, const Vector& direction, Subset subset = Subset::Inner);

/// Weighted neighbour list forming the exploration kernel of a finite-set arm.
struct Kernel {
  std::vector<Index> indices;
  std::vector<double> weights;
  /// True when moment-matching weights came out negative and uniform weights were used.
  bool fallback = false;
};

/// Minimum neighbour count required before the kernel is attempted.
Index kernel_min_neighbors(Index p);

/// Moment-matching kernel around `center` from the items within `delta` of it.
///
/// With u_j = v_j - center, ubar their mean and Q = sum u_j u_j^T / n,
///   w_j = (1/n) (1 - u_j^T Q^{-1} ubar) / (1 - ubar^T Q^{-1} ubar),
/// which sums to one and reproduces the centre as first moment.
/// Throws KernelInfeasible on too few neighbours or a singular Q.
Kernel cloud_kernel(const ArmSet& set, const Arm& center, double delta);

/// Draws from the exploration kernel P_center.
Arm sample_exploration(const ArmSet& set, const Arm& center, Rng& rng);

struct GeometryCertificate {
  double kappa_est = 0.0;
  double gamma_est = 0.0;
  Index directions_probed = 0;
  Index centers_probed = 0;
  Index kernel_failures = 0;
};

/// min over the given unit directions (columns) of max_{x in X'} <x, theta>.
double support_min(const ArmSet& set, const Matrix& directions);

/// Numerical probe of the exploration constants kappa and gamma.
///
/// kappa_est is the support-function minimum over `n_directions` random unit
/// directions, an upper estimate of the true kappa. gamma_est is the minimum
/// over probed centres in X' of p * lambda_min(E_x[z z^T]); for balls the second
/// moment is evaluated in closed form, for finite sets from the kernel weights.
GeometryCertificate verify_assumption(const ArmSet& set, Index n_directions, Rng& rng);

}  // namespace linbandit
