#include <cmath>

#include "linbandit/harness.hpp"

namespace linbandit {

bool DiagnosticReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

DiagnosticReport run_diagnostics(const TrajectorySummary& s, const SimulationConfig& config,
                                 double gamma) {
  const Index n_probes = static_cast<Index>(s.probes.size());
  if (static_cast<Index>(s.norm_samples.size()) != s.reps * n_probes)
    throw std::invalid_argument("summary was produced without diagnostics samples");

  const double p = static_cast<double>(config.p);
  const double delta = config.delta;
  const double pd = p * delta;
  const double c_gamma = gamma / (4.0 * (delta + 1.0));
  const double c4 = 3.0 * (delta + 1.0) / std::sqrt(delta);
  const double n = static_cast<double>(s.reps);

  DiagnosticReport report;
  for (Index k = 0; k < n_probes; ++k) {
    const Index t = s.probes[static_cast<std::size_t>(k)];
    const auto i = static_cast<std::size_t>(t - 1);
    const double td = static_cast<double>(t);

    {
      DiagnosticCheck c{"conservation", t, s.mean_conservation[i], 1.0, s.se_conservation[i], false};
      c.pass = std::abs(c.empirical - 1.0) <= 3.0 * c.se + 1e-9;
      report.checks.push_back(c);
    }
    if (t >= 2 && td <= pd) {
      DiagnosticCheck c{"second_moment", t, s.mean_norm_sq[i], c_gamma * (td - 1.0) / p,
                        s.se_norm_sq[i], false};
      c.pass = c.empirical >= c.bound - 3.0 * c.se;
      report.checks.push_back(c);
    }
    if (t >= 2) {
      const double scale = std::sqrt(8.0 * (td - 1.0) / pd);
      for (double nu : {1.5, 2.0, 3.0}) {
        Index exceed = 0;
        for (Index r = 0; r < s.reps; ++r)
          if (s.norm_samples[static_cast<std::size_t>(r * n_probes + k)] >= scale * nu) ++exceed;
        const double freq = static_cast<double>(exceed) / n;
        DiagnosticCheck c{"subgaussian_nu_" + std::to_string(nu).substr(0, 3), t, freq,
                          std::exp(-(nu - 1.0) * (nu - 1.0) / 3.0),
                          std::sqrt(freq * (1.0 - freq) / n), false};
        c.pass = c.empirical <= c.bound + 3.0 * c.se;
        report.checks.push_back(c);
      }
    }
    if (td > pd) {
      DiagnosticCheck c{"trace_decay", t, s.mean_trace[i], c4 * std::sqrt(p / td), s.se_trace[i], false};
      c.pass = c.empirical <= c.bound + 3.0 * c.se;
      report.checks.push_back(c);
    }
  }
  return report;
}

}  // namespace linbandit
