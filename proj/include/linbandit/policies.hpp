#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linbandit/geometry.hpp"
#include "linbandit/posterior.hpp"

namespace linbandit {

enum class PolicyKind { BallExplore, SmoothExplore, Neighborhood, Phased, Greedy, Oracle };

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> policy_from_name(std::string_view name);

/// Phase lengths of the explore-then-exploit comparator: exploration block k
/// has `explore_len` steps, exploitation block k has 2^k * `exploit_base` steps.
/// Zero means "use p".
struct PhasedSchedule {
  Index explore_len = 0;
  Index exploit_base = 0;

  bool operator==(const PhasedSchedule&) const = default;
};

struct PolicyState {
  PolicyKind kind = PolicyKind::BallExplore;
  PosteriorState posterior;
  /// Noise-to-signal ratio p * sigma^2, drives the exploration schedule.
  double delta = 1.0;
  PhasedSchedule phased;
  /// Only the oracle policy reads this.
  Vector oracle_theta;
};

PolicyState make_policy(PolicyKind kind, Index p, double delta, PhasedSchedule phased = {},
                        Vector oracle_theta = {});

/// Exploration weight beta_l = sqrt(2/3) * min(p*delta/l, 1)^{1/4}.
double exploration_beta(std::size_t step, Index p, double delta);

/// Dispatches to the rule named by `policy.kind`, using the posterior's
/// current step as the time index.
Arm select_arm(const PolicyState& policy, const ArmSet& set, Rng& rng);

/// Items of a finite set within `radius` of `center`.
std::vector<Index> neighborhood_members(const ArmSet& set, const Vector& center, double radius);

/// Uniform draw among catalog items within beta_t of the greedy item.
Arm select_arm_neighborhood(const PolicyState& policy, const ArmSet& set, Rng& rng);

struct PhasePosition {
  bool exploring = false;
  /// 1-based block counter k.
  Index block = 1;
  /// Offset inside the current block.
  Index offset = 0;
};

/// Locates 1-based `step` in the alternating explore/exploit schedule.
PhasePosition phased_position(std::size_t step, Index p, const PhasedSchedule& schedule);

/// Arm used to explore coordinate i: radius * e_i for balls, the item
/// nearest to e_i for finite sets.
Arm basis_arm(const ArmSet& set, Index i);

Arm phased_baseline_step(const PolicyState& policy, const ArmSet& set, Rng& rng);

/// sup_{x in X} <x, theta>.
double oracle_reward(const ArmSet& set, const Vector& theta);
Arm oracle_arm(const ArmSet& set, const Vector& theta);

/// Feeds an observation back into the policy's posterior.
void observe(PolicyState& policy, const Arm& arm, double observed_reward);

/// Throws ConfigError if `kind` cannot run on `set`.
void check_compatible(PolicyKind kind, const ArmSet& set);

}  // namespace linbandit
