#include "linbandit/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linbandit/output.hpp"

namespace linbandit {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ArmSetSpec parse_arm_set(const std::string& text) {
  ArmSetSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "ball") {
      spec.kind = ArmSetSpec::Kind::Ball;
      if (colon != std::string::npos) {
        std::size_t used = 0;
        spec.radius = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(tail);
      }
      return spec;
    }
    if (head == "cloud" && !tail.empty()) {
      spec.kind = ArmSetSpec::Kind::Cloud;
      std::size_t used = 0;
      spec.cloud_size = std::stoll(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
      return spec;
    }
    if (head == "catalog" && !tail.empty()) {
      spec.kind = ArmSetSpec::Kind::Catalog;
      spec.catalog_path = tail;
      return spec;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("--arm-set expects ball, ball:RADIUS, cloud:M or catalog:PATH (got '" + text + "')");
}

std::string render_arm_set(const ArmSetSpec& spec) {
  switch (spec.kind) {
    case ArmSetSpec::Kind::Ball:
      return spec.radius == 1.0 ? "ball" : "ball:" + format_double(spec.radius);
    case ArmSetSpec::Kind::Cloud:
      return "cloud:" + std::to_string(spec.cloud_size);
    case ArmSetSpec::Kind::Catalog:
      return "catalog:" + spec.catalog_path;
  }
  return "ball";
}

std::string feedback_name(FeedbackKind kind) {
  return kind == FeedbackKind::GaussianLinear ? "gaussian" : "quant";
}

json config_json(const SimulationConfig& c) {
  json j;
  j["p"] = c.p;
  j["delta"] = c.delta;
  j["noise_var"] = c.noise_var();
  j["horizon"] = c.horizon;
  j["reps"] = c.reps;
  j["policy"] = std::string(policy_name(c.policy));
  j["arm_set"] = render_arm_set(c.arm_set);
  j["inner_radius"] = c.arm_set.inner_radius;
  j["kernel_radius"] = c.arm_set.kernel_radius;
  j["renormalize"] = c.arm_set.renormalize;
  j["seed"] = c.seed;
  j["feedback"] = feedback_name(c.feedback);
  j["user_offset"] = c.user_offset;
  j["phase_explore"] = c.phased.explore_len > 0 ? c.phased.explore_len : c.p;
  j["phase_exploit_base"] = c.phased.exploit_base > 0 ? c.phased.exploit_base : c.p;
  j["diagnostics"] = c.diagnostics;
  j["bounds"] = c.bounds;
  return j;
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Removes every file it tracked unless committed.
class OutputTransaction {
 public:
  ~OutputTransaction() {
    if (committed_) return;
    for (const auto& path : written_) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }
  void write(const std::string& path, const std::string& contents) {
    written_.push_back(path);
    write_file(path, contents);
  }
  const std::vector<std::string>& written() const { return written_; }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> written_;
  bool committed_ = false;
};

}  // namespace

SimulationConfig paper_figure_preset() {
  SimulationConfig c;
  c.p = 30;
  c.delta = 1.0;
  c.reps = 5000;
  c.horizon = 1000;
  c.seed = 20100;
  return c;
}

std::string usage_text() {
  return "usage: linbandit --seed S [options]\n"
         "       linbandit --preset paper-figure [options]\n"
         "\n"
         "experiment:\n"
         "  --p P                 dimension (default 30)\n"
         "  --delta D             noise-to-signal ratio p sigma^2 (default 1)\n"
         "  --horizon T           steps per realization (default 100)\n"
         "  --reps N              realizations (default 2000)\n"
         "  --policy NAME         ball-explore | smooth-explore | neighborhood | phased | greedy | oracle\n"
         "  --arm-set SPEC        ball | ball:RADIUS | cloud:M | catalog:PATH (default ball)\n"
         "  --seed S              master seed (required unless a preset supplies one)\n"
         "  --preset NAME         paper-figure: p=30, delta=1, T=1000, 5000 reps, seed 20100\n"
         "  --feedback KIND       gaussian | quant (default gaussian)\n"
         "  --user-offset A       mean rating for quantized feedback (default 3.5)\n"
         "  --phase-explore E     phased exploration block length (0 = p)\n"
         "  --phase-exploit K     phased base exploitation length (0 = p)\n"
         "  --inner-radius R      inner arm subset radius for cloud/catalog (0 = 0.5 cloud, 1 catalog)\n"
         "  --kernel-radius R     exploration kernel neighbourhood radius (default 0.5)\n"
         "  --renormalize         divide catalog vectors by the largest norm\n"
         "\n"
         "output:\n"
         "  --out DIR             output directory (default .)\n"
         "  --diagnostics         check posterior lemmas, write diagnostics.json\n"
         "  --fit-split S         fit both reward forms on t <= S, write fit.json\n"
         "  --no-bounds           skip bound curves and their hypothesis check\n"
         "  --workers W           worker threads, 0 = all cores; never changes results\n"
         "  -h, --help            show this text\n";
}

CliOptions parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Linear bandit Monte Carlo harness", "linbandit"};
  std::optional<Index> p, horizon, reps, phase_explore, phase_exploit, fit_split;
  std::optional<double> delta, user_offset, inner_radius, kernel_radius;
  std::optional<std::string> policy, arm_set, preset, out, feedback;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool diagnostics = false, renormalize = false, no_bounds = false;

  app.add_option("--p", p, "dimension p");
  app.add_option("--delta", delta, "noise-to-signal ratio Delta = p sigma^2");
  app.add_option("--horizon", horizon, "number of steps T");
  app.add_option("--reps", reps, "number of realizations");
  app.add_option("--policy", policy,
                 "ball-explore | smooth-explore | neighborhood | phased | greedy | oracle");
  app.add_option("--arm-set", arm_set, "ball | ball:RADIUS | cloud:M | catalog:PATH");
  app.add_option("--seed", seed, "master seed (required unless a preset supplies one)");
  app.add_option("--out", out, "output directory");
  app.add_option("--preset", preset, "paper-figure");
  app.add_option("--feedback", feedback, "gaussian | quant");
  app.add_option("--user-offset", user_offset, "mean rating a_u for quantized feedback");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--phase-explore", phase_explore, "phased policy exploration block length (0 = p)");
  app.add_option("--phase-exploit", phase_exploit, "phased policy base exploitation length (0 = p)");
  app.add_option("--inner-radius", inner_radius, "radius of the inner arm subset for clouds/catalogs");
  app.add_option("--kernel-radius", kernel_radius, "exploration kernel neighbourhood radius");
  app.add_option("--fit-split", fit_split, "fit reward regimes on t <= split");
  app.add_flag("--diagnostics", diagnostics, "record and check posterior diagnostics");
  app.add_flag("--renormalize", renormalize, "divide catalog vectors by the largest norm");
  app.add_flag("--no-bounds", no_bounds, "skip theoretical bound curves");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CliOptions o;
    o.help = true;
    return o;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliOptions o;
  SimulationConfig& c = o.config;
  if (preset) {
    if (*preset != "paper-figure") throw UsageError("unknown preset '" + *preset + "'");
    c = paper_figure_preset();
  } else if (!seed) {
    throw ConfigError("--seed is required unless --preset supplies one");
  }
  if (p) c.p = *p;
  if (delta) c.delta = *delta;
  if (horizon) c.horizon = *horizon;
  if (reps) c.reps = *reps;
  if (seed) c.seed = *seed;
  if (policy) {
    const auto kind = policy_from_name(*policy);
    if (!kind) throw UsageError("unknown policy '" + *policy + "'");
    c.policy = *kind;
  }
  if (arm_set) c.arm_set = parse_arm_set(*arm_set);
  if (inner_radius) c.arm_set.inner_radius = *inner_radius;
  if (kernel_radius) c.arm_set.kernel_radius = *kernel_radius;
  c.arm_set.renormalize = renormalize;
  if (feedback) {
    if (*feedback == "gaussian") c.feedback = FeedbackKind::GaussianLinear;
    else if (*feedback == "quant") c.feedback = FeedbackKind::QuantizedCatalog;
    else throw UsageError("--feedback expects gaussian or quant");
  }
  if (user_offset) c.user_offset = *user_offset;
  if (workers) c.workers = *workers;
  if (phase_explore) c.phased.explore_len = *phase_explore;
  if (phase_exploit) c.phased.exploit_base = *phase_exploit;
  c.diagnostics = diagnostics;
  c.bounds = !no_bounds;
  if (out) o.out_dir = *out;
  o.fit_split = fit_split;

  validate(c);
  if (o.fit_split && (*o.fit_split <= 1 || *o.fit_split >= c.horizon))
    throw ConfigError("--fit-split must lie strictly between 1 and the horizon");
  return o;
}

std::vector<std::string> render_args(const CliOptions& o) {
  const SimulationConfig& c = o.config;
  std::vector<std::string> a{
      "--p",       std::to_string(c.p),
      "--delta",   format_double(c.delta),
      "--horizon", std::to_string(c.horizon),
      "--reps",    std::to_string(c.reps),
      "--policy",  std::string(policy_name(c.policy)),
      "--arm-set", render_arm_set(c.arm_set),
      "--seed",    std::to_string(c.seed),
      "--out",     o.out_dir,
      "--feedback", feedback_name(c.feedback),
      "--user-offset", format_double(c.user_offset),
      "--workers", std::to_string(c.workers),
      "--phase-explore", std::to_string(c.phased.explore_len),
      "--phase-exploit", std::to_string(c.phased.exploit_base),
      "--inner-radius", format_double(c.arm_set.inner_radius),
      "--kernel-radius", format_double(c.arm_set.kernel_radius),
  };
  if (o.fit_split) {
    a.push_back("--fit-split");
    a.push_back(std::to_string(*o.fit_split));
  }
  if (c.diagnostics) a.push_back("--diagnostics");
  if (c.arm_set.renormalize) a.push_back("--renormalize");
  if (!c.bounds) a.push_back("--no-bounds");
  return a;
}

int run(const CliOptions& o, std::string& err) {
  const auto started = std::chrono::steady_clock::now();
  const SimulationConfig& c = o.config;
  OutputTransaction tx;
  try {
    validate(c);
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    if (ec || !std::filesystem::is_directory(o.out_dir))
      throw ConfigError("cannot create output directory '" + o.out_dir + "'");

    const ArmSet set = build_arm_set(c);
    check_compatible(c.policy, set);

    json inputs = json::array();
    if (c.arm_set.kind == ArmSetSpec::Kind::Catalog)
      inputs.push_back({{"path", c.arm_set.catalog_path},
                        {"sha256", sha256_hex(read_file(c.arm_set.catalog_path))}});

    const GeometryConstants geom = geometry_constants(set, c.seed);
    std::optional<BoundCurves> bounds;
    std::string bounds_note;
    if (c.bounds) {
      try {
        bounds = bound_curves(c.p, c.delta, geom.kappa, geom.gamma, c.horizon);
      } catch (const ConfigError& e) {
        if (!geom.estimated) throw;
        bounds_note = std::string("bounds unavailable for this arm set: ") + e.what();
      }
    }

    const TrajectorySummary summary = run_experiment(c, set);

    json config = config_json(c);
    const std::string run_id = sha1_hex(config.dump() + kVersion);

    json meta;
    meta["version"] = kVersion;
    meta["run_id"] = run_id;
    meta["seed"] = c.seed;
    meta["config"] = config;
    meta["columns"] = kTrajectoryCsvHeader;
    meta["kappa"] = geom.kappa;
    meta["gamma"] = geom.gamma;
    meta["geometry_estimated"] = geom.estimated;
    if (geom.estimated)
      meta["geometry_certificate"] = {{"kappa_est", geom.certificate.kappa_est},
                                      {"gamma_est", geom.certificate.gamma_est},
                                      {"directions_probed", geom.certificate.directions_probed},
                                      {"centers_probed", geom.certificate.centers_probed},
                                      {"kernel_failures", geom.certificate.kernel_failures}};
    if (bounds) {
      const auto& k = bounds->constants;
      meta["constants"] = {{"C1", k.c1},    {"C2", k.c2},       {"C3", k.c3},
                           {"C4", k.c4},    {"alpha", k.alpha}, {"omega", k.omega},
                           {"C_gamma_delta", k.c_gamma_delta}};
    } else {
      meta["constants"] = nullptr;
    }
    if (!bounds_note.empty()) meta["bounds_note"] = bounds_note;
    meta["quantization"] = "round half up to the nearest integer, then clamp to [1, 5]";
    meta["phased_schedule"] = "exploration block k: phase_explore steps cycling basis arms; "
                              "exploitation block k: 2^k * phase_exploit_base greedy steps";
    meta["mean_oracle_reward"] = summary.mean_oracle_reward;

    std::optional<DiagnosticReport> diag;
    json diag_json;
    if (c.diagnostics) {
      diag = run_diagnostics(summary, c, geom.gamma);
      diag_json["all_pass"] = diag->all_pass();
      diag_json["checks"] = json::array();
      for (const auto& chk : diag->checks)
        diag_json["checks"].push_back({{"name", chk.name},
                                       {"t", chk.t},
                                       {"empirical", nan_safe(chk.empirical)},
                                       {"bound", nan_safe(chk.bound)},
                                       {"se", nan_safe(chk.se)},
                                       {"pass", chk.pass}});
    }
    json fit_json;
    if (o.fit_split) {
      const FitReport fit = fit_regimes(summary, *o.fit_split);
      fit_json = {{"split", fit.split},
                  {"c3", fit.c3},
                  {"residual_power", fit.residual_power},
                  {"c1", fit.c1},
                  {"c2", fit.c2},
                  {"residual_linear", fit.residual_linear},
                  {"degenerate", fit.degenerate},
                  {"winner", fit.winner}};
    }

    const std::filesystem::path dir(o.out_dir);
    tx.write((dir / "trajectory.csv").string(),
             trajectory_csv(summary, bounds ? &*bounds : nullptr));
    tx.write((dir / "metadata.json").string(), meta.dump(2) + "\n");
    if (diag) tx.write((dir / "diagnostics.json").string(), diag_json.dump(2) + "\n");
    if (o.fit_split) tx.write((dir / "fit.json").string(), fit_json.dump(2) + "\n");

    const std::string manifest_path = (dir / "manifest.json").string();
    json manifest;
    manifest["version"] = kVersion;
    manifest["run_id"] = run_id;
    manifest["config"] = config;
    manifest["inputs"] = inputs;
    json outputs = tx.written();
    outputs.push_back(manifest_path);
    manifest["outputs"] = outputs;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    tx.write(manifest_path, manifest.dump(2) + "\n");
    tx.commit();

    if (diag && !diag->all_pass()) {
      err = "diagnostic checks failed, see diagnostics.json";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const InputError& e) {
    err = e.what();
    return kExitInput;
  } catch (const ConfigError& e) {
    err = e.what();
    return kExitConfig;
  } catch (const NumericalError& e) {
    err = e.what();
    return kExitNumerical;
  } catch (const KernelInfeasible& e) {
    err = std::string("exploration kernel infeasible: ") + e.what();
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err = e.what();
    return kExitConfig;
  }
}

int main_entry(const std::vector<std::string>& args) {
  CliOptions options;
  try {
    options = parse_args(args);
  } catch (const UsageError& e) {
    std::cerr << "linbandit: " << e.what() << "\nrun 'linbandit --help' for the option list\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "linbandit: " << e.what() << "\n";
    return kExitConfig;
  }
  if (options.help) {
    std::cout << usage_text();
    return kExitOk;
  }
  std::string err;
  const int code = run(options, err);
  if (code != kExitOk) std::cerr << "linbandit: " << err << "\n";
  return code;
}

}  // namespace linbandit
