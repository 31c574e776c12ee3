#include "linbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "linbandit/catalog.hpp"

namespace linbandit {

namespace {

constexpr Index kBlockSize = 16;

// Per-step sums over a block of realizations, laid out as kSeries arrays of length T.
enum Series : Index {
  kReward,
  kRewardSq,
  kRisk,
  kRiskSq,
  kTrace,
  kTraceSq,
  kNorm,
  kNormSq,
  kNormSqSq,
  kCons,
  kConsSq,
  kSeries
};

struct Accumulator {
  Index horizon = 0;
  std::vector<double> sums;
  double oracle_sum = 0.0;

  explicit Accumulator(Index t = 0) : horizon(t), sums(static_cast<std::size_t>(kSeries * t), 0.0) {}

  double& at(Series s, Index i) { return sums[static_cast<std::size_t>(s * horizon + i)]; }
  double get(Series s, Index i) const { return sums[static_cast<std::size_t>(s * horizon + i)]; }

  void merge(const Accumulator& other) {
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += other.sums[k];
    oracle_sum += other.oracle_sum;
  }
};

// Pairwise reduction over blocks fed in index order; the tree shape depends
// only on the number of blocks.
class PairwiseReducer {
 public:
  void push(Accumulator acc) {
    Index level = 0;
    while (!stack_.empty() && stack_.back().first == level) {
      Accumulator left = std::move(stack_.back().second);
      stack_.pop_back();
      left.merge(acc);
      acc = std::move(left);
      ++level;
    }
    stack_.emplace_back(level, std::move(acc));
  }

  Accumulator finish(Index horizon) {
    Accumulator total(horizon);
    for (auto& [level, acc] : stack_) total.merge(acc);
    stack_.clear();
    return total;
  }

 private:
  std::vector<std::pair<Index, Accumulator>> stack_;
};

void add_sample(Accumulator& acc, Series s, Series sq, Index i, double v) {
  acc.at(s, i) += v;
  acc.at(sq, i) += v * v;
}

struct RunContext {
  const SimulationConfig& config;
  const ArmSet& set;
  FeedbackModel feedback;
  std::vector<Index> probes;
};

void run_realization(const RunContext& ctx, Index r, Accumulator& acc, double* norm_samples) {
  const SimulationConfig& cfg = ctx.config;
  Rng rng = realization_rng(cfg.seed, static_cast<std::uint64_t>(r));
  const ParameterVector theta = draw_theta(cfg.p, rng);
  const double ropt = oracle_reward(ctx.set, theta.theta);
  acc.oracle_sum += ropt;

  PolicyState policy = make_policy(cfg.policy, cfg.p, cfg.delta, cfg.phased,
                                   cfg.policy == PolicyKind::Oracle ? theta.theta : Vector{});
  double cum_reward = 0.0;
  double cum_risk = 0.0;
  std::size_t next_probe = 0;
  for (Index i = 0; i < cfg.horizon; ++i) {
    const double trace = trace_cov(policy.posterior);
    const double norm_sq = policy.posterior.mean.squaredNorm();
    const double norm = std::sqrt(norm_sq);
    add_sample(acc, kTrace, kTraceSq, i, trace);
    add_sample(acc, kNormSq, kNormSqSq, i, norm_sq);
    add_sample(acc, kCons, kConsSq, i, norm_sq + trace);
    acc.at(kNorm, i) += norm;
    if (norm_samples && next_probe < ctx.probes.size() && ctx.probes[next_probe] == i + 1)
      norm_samples[next_probe++] = norm;

    const Arm arm = select_arm(policy, ctx.set, rng);
    if (arm.vector.norm() > 1.0 + kNormTolerance)
      throw NumericalError("policy emitted an arm outside the unit ball");
    const Reward rw = reward(ctx.feedback, arm.vector, theta, rng);
    cum_reward += rw.expected;
    cum_risk += ropt - rw.expected;
    add_sample(acc, kReward, kRewardSq, i, cum_reward);
    add_sample(acc, kRisk, kRiskSq, i, cum_risk);
    observe(policy, arm, rw.observed);
  }
}

void moments(double sum, double sum_sq, Index n, double& mean, double& se) {
  const double nd = static_cast<double>(n);
  mean = sum / nd;
  if (n < 2) {
    se = 0.0;
    return;
  }
  const double var = std::max(0.0, (sum_sq - sum * mean) / (nd - 1.0));
  se = std::sqrt(var / nd);
}

}  // namespace

void validate(const SimulationConfig& c) {
  if (c.p < 1) throw ConfigError("p must be >= 1");
  if (!(c.delta > 0.0) || !std::isfinite(c.delta)) throw ConfigError("delta must be positive");
  if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (c.reps < 1) throw ConfigError("reps must be >= 1");
  if (!std::isfinite(c.user_offset)) throw ConfigError("user offset must be finite");
  if (c.phased.explore_len < 0 || c.phased.exploit_base < 0)
    throw ConfigError("phase lengths must be non-negative");
  const ArmSetSpec& a = c.arm_set;
  auto radius_ok = [](double r) { return r > 0.0 && r <= 1.0; };
  switch (a.kind) {
    case ArmSetSpec::Kind::Ball:
      if (!radius_ok(a.radius)) throw ConfigError("ball radius must lie in (0, 1]");
      break;
    case ArmSetSpec::Kind::Cloud:
      if (a.cloud_size < 1) throw ConfigError("cloud size must be >= 1");
      break;
    case ArmSetSpec::Kind::Catalog:
      if (a.catalog_path.empty()) throw ConfigError("catalog path is empty");
      break;
  }
  if (a.kind != ArmSetSpec::Kind::Ball) {
    if (a.inner_radius != 0.0 && !radius_ok(a.inner_radius))
      throw ConfigError("inner radius must lie in (0, 1]");
    if (!radius_ok(a.kernel_radius)) throw ConfigError("kernel radius must lie in (0, 1]");
  }
  if (c.bounds) {
    const double pd = static_cast<double>(c.p) * c.delta;
    if (c.p < 2 || pd < 2.0)
      throw ConfigError("bound checks require p >= 2 and p*delta >= 2 (got p=" +
                        std::to_string(c.p) + ", p*delta=" + std::to_string(pd) + ")");
  }
}

ArmSet build_arm_set(const SimulationConfig& c) {
  const ArmSetSpec& a = c.arm_set;
  switch (a.kind) {
    case ArmSetSpec::Kind::Ball:
      return ArmSet::contained_ball(c.p, a.radius);
    case ArmSetSpec::Kind::Cloud: {
      const double inner = a.inner_radius > 0.0 ? a.inner_radius : 0.5;
      return ArmSet::uniform_cloud(c.p, a.cloud_size, c.seed ^ 0xC10D5EEDC10D5EEDULL, inner,
                                   a.kernel_radius);
    }
    case ArmSetSpec::Kind::Catalog: {
      CatalogData data = load_catalog_csv(a.catalog_path, a.renormalize);
      if (data.points.rows() != c.p)
        throw InputError("catalog has " + std::to_string(data.points.rows()) +
                         " features but p=" + std::to_string(c.p));
      const double inner = a.inner_radius > 0.0 ? a.inner_radius : 1.0;
      return ArmSet::catalog(std::move(data.points), std::move(data.ids), inner, a.kernel_radius);
    }
  }
  throw std::logic_error("unhandled arm set kind");
}

Rng realization_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6c696e62u};
  return Rng(seq);
}

std::vector<Index> probe_times(Index p, double delta, Index horizon) {
  std::vector<Index> out;
  for (Index t = 2; t <= horizon; t *= 2) out.push_back(t);
  const auto pd = static_cast<Index>(std::floor(static_cast<double>(p) * delta));
  for (Index mult : {1, 2, 10, 20}) {
    const Index t = std::max<Index>(1, pd * mult);
    if (t <= horizon) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TrajectorySummary run_experiment(const SimulationConfig& config) {
  validate(config);
  return run_experiment(config, build_arm_set(config));
}

TrajectorySummary run_experiment(const SimulationConfig& config, const ArmSet& set) {
  validate(config);
  if (set.dim() != config.p) throw ConfigError("arm set dimension does not match p");
  check_compatible(config.policy, set);

  RunContext ctx{config, set, {}, {}};
  ctx.feedback.kind = config.feedback;
  ctx.feedback.sigma = std::sqrt(config.noise_var());
  ctx.feedback.user_offset = config.user_offset;
  ctx.probes = probe_times(config.p, config.delta, config.horizon);

  const Index T = config.horizon;
  const Index n_probes = static_cast<Index>(ctx.probes.size());
  std::vector<double> samples;
  if (config.diagnostics) samples.assign(static_cast<std::size_t>(config.reps * n_probes), 0.0);

  const Index n_blocks = (config.reps + kBlockSize - 1) / kBlockSize;
  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<Index>(workers, n_blocks));

  std::atomic<Index> next_block{0};
  std::mutex mu;
  std::map<Index, Accumulator> pending;
  Index next_to_reduce = 0;
  PairwiseReducer reducer;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (;;) {
      const Index b = next_block.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      Accumulator acc(T);
      try {
        const Index end = std::min(config.reps, (b + 1) * kBlockSize);
        for (Index r = b * kBlockSize; r < end; ++r)
          run_realization(ctx, r, acc,
                          config.diagnostics ? samples.data() + r * n_probes : nullptr);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        failed = true;
        return;
      }
      std::lock_guard lock(mu);
      pending.emplace(b, std::move(acc));
      for (auto it = pending.find(next_to_reduce); it != pending.end();
           it = pending.find(next_to_reduce)) {
        reducer.push(std::move(it->second));
        pending.erase(it);
        ++next_to_reduce;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const Accumulator total = reducer.finish(T);
  TrajectorySummary s;
  s.reps = config.reps;
  s.horizon = T;
  const auto n = static_cast<std::size_t>(T);
  for (auto* v : {&s.mean_reward, &s.se_reward, &s.mean_risk, &s.se_risk, &s.mean_trace,
                  &s.se_trace, &s.mean_norm, &s.mean_norm_sq, &s.se_norm_sq,
                  &s.mean_conservation, &s.se_conservation})
    v->resize(n);
  for (Index i = 0; i < T; ++i) {
    const auto k = static_cast<std::size_t>(i);
    moments(total.get(kReward, i), total.get(kRewardSq, i), config.reps, s.mean_reward[k], s.se_reward[k]);
    moments(total.get(kRisk, i), total.get(kRiskSq, i), config.reps, s.mean_risk[k], s.se_risk[k]);
    moments(total.get(kTrace, i), total.get(kTraceSq, i), config.reps, s.mean_trace[k], s.se_trace[k]);
    moments(total.get(kNormSq, i), total.get(kNormSqSq, i), config.reps, s.mean_norm_sq[k],
            s.se_norm_sq[k]);
    moments(total.get(kCons, i), total.get(kConsSq, i), config.reps, s.mean_conservation[k],
            s.se_conservation[k]);
    s.mean_norm[k] = total.get(kNorm, i) / static_cast<double>(config.reps);
  }
  s.mean_oracle_reward = total.oracle_sum / static_cast<double>(config.reps);
  s.probes = std::move(ctx.probes);
  s.norm_samples = std::move(samples);
  return s;
}

GeometryConstants geometry_constants(const ArmSet& set, std::uint64_t seed) {
  GeometryConstants g;
  if (!set.is_finite()) {
    g.kappa = set.radius() / std::sqrt(3.0);
    g.gamma = 2.0 * set.radius() * set.radius() / 3.0;
    return g;
  }
  Rng rng(seed ^ 0x6E0C0DE5ULL);
  g.certificate = verify_assumption(set, 200, rng);
  g.kappa = g.certificate.kappa_est;
  g.gamma = g.certificate.gamma_est;
  g.estimated = true;
  return g;
}

}  // namespace linbandit
