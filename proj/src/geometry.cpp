#include "linbandit/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace linbandit {

namespace {

bool parse_integer(const std::string& s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !s.empty();
}

void check_radius(double r, const char* what) {
  if (!(r > 0.0) || r > 1.0 || !std::isfinite(r))
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
}

}  // namespace

ArmSet ArmSet::unit_ball(Index p) { return contained_ball(p, 1.0); }

ArmSet ArmSet::contained_ball(Index p, double radius) {
  if (p < 1) throw std::invalid_argument("arm set dimension must be >= 1");
  check_radius(radius, "ball radius");
  ArmSet set;
  set.kind_ = radius == 1.0 ? ArmSetKind::UnitBall : ArmSetKind::ContainedBall;
  set.dim_ = p;
  set.radius_ = radius;
  set.inner_radius_ = radius / std::sqrt(3.0);
  return set;
}

ArmSet ArmSet::uniform_cloud(Index p, Index m, std::uint64_t seed, double inner_radius,
                             double kernel_radius) {
  if (p < 1) throw std::invalid_argument("arm set dimension must be >= 1");
  if (m < 1) throw std::invalid_argument("uniform cloud needs at least one point");
  check_radius(inner_radius, "inner radius");
  check_radius(kernel_radius, "kernel radius");
  Rng rng(seed);
  ArmSet set;
  set.kind_ = ArmSetKind::UniformCloud;
  set.dim_ = p;
  set.inner_radius_ = inner_radius;
  set.kernel_radius_ = kernel_radius;
  set.points_.resize(p, m);
  for (Index j = 0; j < m; ++j) set.points_.col(j) = uniform_in_ball(p, 1.0, rng);
  set.build_inner();
  return set;
}

ArmSet ArmSet::catalog(Matrix points, std::vector<std::string> ids, double inner_radius,
                       double kernel_radius) {
  if (points.cols() < 1) throw std::invalid_argument("catalog is empty");
  if (static_cast<Index>(ids.size()) != points.cols())
    throw std::invalid_argument("catalog ids and points disagree in count");
  check_radius(inner_radius, "inner radius");
  check_radius(kernel_radius, "kernel radius");

  std::vector<long long> numeric(ids.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < ids.size() && all_numeric; ++i)
    all_numeric = parse_integer(ids[i], numeric[i]);

  std::vector<Index> order(ids.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return all_numeric ? numeric[a] < numeric[b] : ids[a] < ids[b];
  });

  ArmSet set;
  set.kind_ = ArmSetKind::Catalog;
  set.dim_ = points.rows();
  set.inner_radius_ = inner_radius;
  set.kernel_radius_ = kernel_radius;
  set.points_.resize(points.rows(), points.cols());
  set.ids_.resize(ids.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    set.points_.col(static_cast<Index>(k)) = points.col(order[k]);
    set.ids_[k] = std::move(ids[order[k]]);
  }
  for (Index j = 0; j < set.points_.cols(); ++j)
    if (set.points_.col(j).norm() > 1.0 + kNormTolerance)
      throw std::invalid_argument("catalog item norm exceeds 1");
  set.build_inner();
  return set;
}

ArmSet ArmSet::finite(Matrix points, double inner_radius, double kernel_radius) {
  if (points.cols() < 1) throw std::invalid_argument("finite arm set is empty");
  check_radius(inner_radius, "inner radius");
  check_radius(kernel_radius, "kernel radius");
  for (Index j = 0; j < points.cols(); ++j)
    if (points.col(j).norm() > 1.0 + kNormTolerance)
      throw std::invalid_argument("arm norm exceeds 1");
  ArmSet set;
  set.kind_ = ArmSetKind::Catalog;
  set.dim_ = points.rows();
  set.inner_radius_ = inner_radius;
  set.kernel_radius_ = kernel_radius;
  set.points_ = std::move(points);
  set.build_inner();
  return set;
}

void ArmSet::build_inner() {
  inner_.clear();
  for (Index j = 0; j < points_.cols(); ++j)
    if (points_.col(j).norm() <= inner_radius_ + kNormTolerance) inner_.push_back(j);
}

Arm ArmSet::item(Index i) const {
  Arm arm{points_.col(i), i, std::nullopt};
  if (!ids_.empty()) arm.id = ids_[static_cast<std::size_t>(i)];
  return arm;
}

bool ArmSet::contains(const Vector& x) const {
  if (x.size() != dim_) return false;
  if (!is_finite()) return x.norm() <= radius_ + kNormTolerance;
  for (Index j = 0; j < points_.cols(); ++j)
    if (points_.col(j) == x) return true;
  return false;
}

Vector uniform_unit_vector(Index p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(p);
  double n2 = 0.0;
  do {
    for (Index i = 0; i < p; ++i) u[i] = normal(rng);
    n2 = u.squaredNorm();
  } while (n2 == 0.0);
  return u / std::sqrt(n2);
}

Vector uniform_in_ball(Index p, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector dir = uniform_unit_vector(p, rng);
  return dir * (radius * std::pow(unif(rng), 1.0 / static_cast<double>(p)));
}

Vector project_out(const Vector& u, const Vector& unit_direction) {
  return u - unit_direction * unit_direction.dot(u);
}

Arm best_arm(const ArmSet& set, const Vector& direction, Subset subset) {
  if (direction.size() != set.dim())
    throw std::invalid_argument("direction dimension does not match arm set");
  const double n = direction.norm();

  if (!set.is_finite()) {
    const double r = subset == Subset::Inner ? set.inner_radius() : set.radius();
    if (n == 0.0) return Arm{Vector::Unit(set.dim(), 0) * r, std::nullopt, std::nullopt};
    return Arm{direction * (r / n), std::nullopt, std::nullopt};
  }

  const Vector dir = n == 0.0 ? Vector::Unit(set.dim(), 0) : direction;
  Index best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  auto consider = [&](Index j) {
    const double v = set.points().col(j).dot(dir);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  };
  if (subset == Subset::Inner) {
    for (Index j : set.inner_indices()) consider(j);
  } else {
    for (Index j = 0; j < set.size(); ++j) consider(j);
  }
  if (best < 0) throw ConfigError("inner arm subset is empty (no item inside the inner radius)");
  return set.item(best);
}

Index kernel_min_neighbors(Index p) { return std::max<Index>(p + 2, 8); }

Kernel cloud_kernel(const ArmSet& set, const Arm& center, double delta) {
  if (!set.is_finite()) throw std::invalid_argument("cloud_kernel requires a finite arm set");
  const Index p = set.dim();
  const Vector& c = center.vector;

  Kernel kernel;
  for (Index j = 0; j < set.size(); ++j) {
    if (center.index && *center.index == j) continue;
    if ((set.points().col(j) - c).norm() <= delta) kernel.indices.push_back(j);
  }
  const Index n = static_cast<Index>(kernel.indices.size());
  if (n < kernel_min_neighbors(p))
    throw KernelInfeasible("only " + std::to_string(n) + " neighbours within radius " +
                           std::to_string(delta) + ", need " +
                           std::to_string(kernel_min_neighbors(p)));

  Matrix u(p, n);
  for (Index k = 0; k < n; ++k) u.col(k) = set.points().col(kernel.indices[k]) - c;
  const Vector ubar = u.rowwise().mean();
  const Matrix q = (u * u.transpose()) / static_cast<double>(n);

  Eigen::LDLT<Matrix> ldlt(q);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-12)
    throw KernelInfeasible("neighbour second-moment matrix is singular");
  const Vector qinv_ubar = ldlt.solve(ubar);
  const double denom = 1.0 - ubar.dot(qinv_ubar);
  if (!(denom > 1e-12)) throw KernelInfeasible("centre lies outside the neighbours' span");

  const Vector num = Vector::Ones(n) - u.transpose() * qinv_ubar;
  kernel.weights.resize(static_cast<std::size_t>(n));
  bool negative = false;
  for (Index k = 0; k < n; ++k) {
    kernel.weights[k] = num[k] / (static_cast<double>(n) * denom);
    negative = negative || kernel.weights[k] < 0.0;
  }
  if (negative) {
    std::fill(kernel.weights.begin(), kernel.weights.end(), 1.0 / static_cast<double>(n));
    kernel.fallback = true;
  }
  return kernel;
}

Arm sample_exploration(const ArmSet& set, const Arm& center, Rng& rng) {
  if (center.vector.size() != set.dim())
    throw std::invalid_argument("centre dimension does not match arm set");
  if (!set.is_finite()) {
    const double cn = center.vector.norm();
    const Vector d = cn > 0.0 ? Vector(center.vector / cn) : Vector(Vector::Unit(set.dim(), 0));
    const Vector u = uniform_unit_vector(set.dim(), rng);
    return Arm{center.vector + std::sqrt(2.0 / 3.0) * set.radius() * project_out(u, d),
               std::nullopt, std::nullopt};
  }
  const Kernel kernel = cloud_kernel(set, center, set.kernel_radius());
  std::discrete_distribution<std::size_t> pick(kernel.weights.begin(), kernel.weights.end());
  return set.item(kernel.indices[pick(rng)]);
}

double support_min(const ArmSet& set, const Matrix& directions) {
  double kappa = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < directions.cols(); ++k) {
    const Vector theta = directions.col(k);
    kappa = std::min(kappa, best_arm(set, theta, Subset::Inner).vector.dot(theta));
  }
  return kappa;
}

namespace {

double scaled_min_eigenvalue(const Matrix& second_moment) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(second_moment, Eigen::EigenvaluesOnly);
  return static_cast<double>(second_moment.rows()) * es.eigenvalues().minCoeff();
}

}  // namespace

GeometryCertificate verify_assumption(const ArmSet& set, Index n_directions, Rng& rng) {
  if (n_directions < 1) throw std::invalid_argument("need at least one probe direction");
  const Index p = set.dim();
  GeometryCertificate cert;

  Matrix dirs(p, n_directions);
  for (Index k = 0; k < n_directions; ++k) dirs.col(k) = uniform_unit_vector(p, rng);
  cert.directions_probed = n_directions;
  if (!set.is_finite() || !set.inner_indices().empty()) cert.kappa_est = support_min(set, dirs);

  double gamma = std::numeric_limits<double>::infinity();
  if (!set.is_finite()) {
    // E zz^T = x x^T + (2 r^2 / 3p) P_x^perp for z = x + sqrt(2/3) r P^perp u.
    for (Index k = 0; k < n_directions; ++k) {
      const Vector x = best_arm(set, dirs.col(k), Subset::Inner).vector;
      const Vector d = x.normalized();
      const double r = set.radius();
      const Matrix m2 = x * x.transpose() + (2.0 * r * r / (3.0 * static_cast<double>(p))) *
                                                 (Matrix::Identity(p, p) - d * d.transpose());
      gamma = std::min(gamma, scaled_min_eigenvalue(m2));
      ++cert.centers_probed;
    }
  } else {
    std::vector<Index> centers = set.inner_indices();
    std::shuffle(centers.begin(), centers.end(), rng);
    if (static_cast<Index>(centers.size()) > n_directions) centers.resize(n_directions);
    for (Index j : centers) {
      ++cert.centers_probed;
      try {
        const Kernel kernel = cloud_kernel(set, set.item(j), set.kernel_radius());
        if (kernel.fallback) ++cert.kernel_failures;
        Matrix m2 = Matrix::Zero(p, p);
        for (std::size_t k = 0; k < kernel.indices.size(); ++k) {
          const auto v = set.points().col(kernel.indices[k]);
          m2.noalias() += kernel.weights[k] * v * v.transpose();
        }
        gamma = std::min(gamma, scaled_min_eigenvalue(m2));
      } catch (const KernelInfeasible&) {
        ++cert.kernel_failures;
      }
    }
  }
  cert.gamma_est = std::isfinite(gamma) ? std::max(0.0, gamma) : 0.0;
  return cert;
}

}  // namespace linbandit
