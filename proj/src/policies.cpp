#include "linbandit/policies.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace linbandit {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 6> kNames{{
    {PolicyKind::BallExplore, "ball-explore"},
    {PolicyKind::SmoothExplore, "smooth-explore"},
    {PolicyKind::Neighborhood, "neighborhood"},
    {PolicyKind::Phased, "phased"},
    {PolicyKind::Greedy, "greedy"},
    {PolicyKind::Oracle, "oracle"},
}};

Vector unit_or_e1(const Vector& v) {
  const double n = v.norm();
  return n > 0.0 ? Vector(v / n) : Vector(Vector::Unit(v.size(), 0));
}

Arm ball_explore(const PolicyState& policy, const ArmSet& set, Rng& rng) {
  const Index p = set.dim();
  const double beta = exploration_beta(policy.posterior.step, p, policy.delta);
  const Vector d = unit_or_e1(policy.posterior.mean);
  const Vector u = uniform_unit_vector(p, rng);
  Vector x = std::sqrt(1.0 - beta * beta) * d + beta * project_out(u, d);
  x *= set.radius();
  return Arm{std::move(x), std::nullopt, std::nullopt};
}

Index resolve(Index value, Index p) { return value > 0 ? value : p; }

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<PolicyKind> policy_from_name(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

PolicyState make_policy(PolicyKind kind, Index p, double delta, PhasedSchedule phased,
                        Vector oracle_theta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (kind == PolicyKind::Oracle && oracle_theta.size() != p)
    throw std::invalid_argument("oracle policy needs the true parameter vector");
  PolicyState state;
  state.kind = kind;
  state.posterior = init_posterior(p, delta / static_cast<double>(p));
  state.delta = delta;
  state.phased = phased;
  state.oracle_theta = std::move(oracle_theta);
  return state;
}

double exploration_beta(std::size_t step, Index p, double delta) {
  if (step < 1) throw std::invalid_argument("step is 1-based");
  const double ratio = std::min(static_cast<double>(p) * delta / static_cast<double>(step), 1.0);
  return std::sqrt(2.0 / 3.0) * std::pow(ratio, 0.25);
}

Arm select_arm(const PolicyState& policy, const ArmSet& set, Rng& rng) {
  if (policy.posterior.dim() != set.dim())
    throw std::invalid_argument("policy and arm set dimensions differ");
  switch (policy.kind) {
    case PolicyKind::BallExplore:
      return ball_explore(policy, set, rng);
    case PolicyKind::SmoothExplore:
      return sample_exploration(set, best_arm(set, policy.posterior.mean, Subset::Inner), rng);
    case PolicyKind::Neighborhood:
      return select_arm_neighborhood(policy, set, rng);
    case PolicyKind::Phased:
      return phased_baseline_step(policy, set, rng);
    case PolicyKind::Greedy:
      return best_arm(set, policy.posterior.mean, Subset::Full);
    case PolicyKind::Oracle:
      return oracle_arm(set, policy.oracle_theta);
  }
  throw std::logic_error("unhandled policy kind");
}

std::vector<Index> neighborhood_members(const ArmSet& set, const Vector& center, double radius) {
  std::vector<Index> members;
  for (Index j = 0; j < set.size(); ++j)
    if ((set.points().col(j) - center).norm() <= radius) members.push_back(j);
  return members;
}

Arm select_arm_neighborhood(const PolicyState& policy, const ArmSet& set, Rng& rng) {
  if (!set.is_finite()) throw ConfigError("neighborhood policy requires a finite arm set");
  const Arm greedy = best_arm(set, policy.posterior.mean, Subset::Full);
  const double radius = exploration_beta(policy.posterior.step, set.dim(), policy.delta);
  const auto members = neighborhood_members(set, greedy.vector, radius);
  if (members.empty()) return greedy;
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  return set.item(members[pick(rng)]);
}

PhasePosition phased_position(std::size_t step, Index p, const PhasedSchedule& schedule) {
  if (step < 1) throw std::invalid_argument("step is 1-based");
  const Index explore = resolve(schedule.explore_len, p);
  const Index base = resolve(schedule.exploit_base, p);
  Index remaining = static_cast<Index>(step) - 1;
  for (Index k = 1;; ++k) {
    if (remaining < explore) return {true, k, remaining};
    remaining -= explore;
    // Exploitation blocks double; past 2^62 steps nothing is left to schedule.
    const Index exploit = k < 62 - 8 ? (Index{1} << k) * base : std::numeric_limits<Index>::max();
    if (remaining < exploit) return {false, k, remaining};
    remaining -= exploit;
  }
}

Arm basis_arm(const ArmSet& set, Index i) {
  const Vector e = Vector::Unit(set.dim(), i);
  if (!set.is_finite()) return Arm{e * set.radius(), std::nullopt, std::nullopt};
  Index best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < set.size(); ++j) {
    const double d = (set.points().col(j) - e).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  return set.item(best);
}

Arm phased_baseline_step(const PolicyState& policy, const ArmSet& set, Rng&) {
  const PhasePosition pos = phased_position(policy.posterior.step, set.dim(), policy.phased);
  if (pos.exploring) return basis_arm(set, pos.offset % set.dim());
  return best_arm(set, policy.posterior.mean, Subset::Full);
}

Arm oracle_arm(const ArmSet& set, const Vector& theta) {
  return best_arm(set, theta, Subset::Full);
}

double oracle_reward(const ArmSet& set, const Vector& theta) {
  if (theta.size() != set.dim()) throw std::invalid_argument("parameter dimension mismatch");
  if (!set.is_finite()) return set.radius() * theta.norm();
  return (set.points().transpose() * theta).maxCoeff();
}

void observe(PolicyState& policy, const Arm& arm, double observed_reward) {
  absorb(policy.posterior, arm.vector, observed_reward);
}

void check_compatible(PolicyKind kind, const ArmSet& set) {
  switch (kind) {
    case PolicyKind::BallExplore:
      if (set.is_finite()) throw ConfigError("ball-explore requires a ball arm set");
      break;
    case PolicyKind::Neighborhood:
      if (!set.is_finite()) throw ConfigError("neighborhood requires a cloud or catalog arm set");
      break;
    case PolicyKind::SmoothExplore:
      if (set.is_finite() && set.inner_indices().empty())
        throw ConfigError("smooth-explore: no item lies inside the inner radius");
      break;
    default:
      break;
  }
}

}  // namespace linbandit
