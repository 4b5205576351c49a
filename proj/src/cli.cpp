#include "a2c/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "a2c/analysis.hpp"
#include "a2c/error.hpp"
#include "a2c/export.hpp"

namespace a2c::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

template <typename T>
std::string bracketed(const std::vector<T>& values) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  os << ']';
  return os.str();
}

// Loads and overrides; prints the problem and returns nullopt on failure.
std::optional<SimConfig> load_effective(const CliInvocation& inv, std::ostream& err) {
  try {
    return apply_overrides(load_config(inv.config_path), inv.overrides);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

void prepare_output(const CliInvocation& inv, const SimConfig& config) {
  std::error_code ec;
  fs::create_directories(inv.output_dir, ec);
  if (ec) {
    throw Error(Errc::io_failure, "cannot create output directory '" + inv.output_dir.string() +
                                      "': " + ec.message());
  }
  write_text_file(inv.output_dir / "effective_config.json", to_json(config));
}

}  // namespace

SimConfig apply_overrides(SimConfig config, const ConfigOverrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.runs) config.runs = *o.runs;
  if (o.horizon) config.horizon = *o.horizon;
  if (o.policies) config.policies = *o.policies;
  if (o.alpha) config.alpha = *o.alpha;
  if (o.trace_every) config.trace_every = *o.trace_every;
  check_config(config);
  return config;
}

int cmd_validate(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  const auto config = load_effective(inv, err);
  if (!config) return kExitConfigInvalid;

  bool ok = true;
  try {
    const CertifiedGraph g = validate_graph(DirectedGraph(config->num_agents, zero_based_edges(*config)));
    out << "graph: " << g.num_agents() << " agents, " << g.graph().edges().size()
        << " directed edges (self-loops implicit), strongly connected\n";
  } catch (const NotStronglyConnected& e) {
    ok = false;
    err << "Assumption 3 violated: " << e.what() << '\n';
  } catch (const Error& e) {
    ok = false;
    err << "graph invalid: " << e.what() << '\n';
  }

  try {
    const Environment env = build_environment(ArmSet{config->arm_means, config->reward_model},
                                              AccessMatrix(config->access));
    const GroundTruth& truth = env.truth();
    out << "access matrix: valid (" << env.num_agents() << " x " << env.num_arms()
        << ", every arm accessible, every agent has an arm)\n";
    out << "generation masses g = " << bracketed(truth.generation_mass) << '\n';
    out << "global optimum: arm " << truth.global_opt_arm + 1 << ", mu* = " << fmt(truth.global_opt_mean)
        << '\n';
    out << "agent  accessible            best_arm  mu_i*     gaps\n";
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      std::vector<std::size_t> arms;
      std::ostringstream gaps;
      for (std::size_t k : env.access().accessible_arms(i)) {
        arms.push_back(k + 1);
        gaps << (arms.size() > 1 ? " " : "") << k + 1 << ':' << fmt(truth.gaps[i][k], 3);
      }
      char line[160];
      std::snprintf(line, sizeof line, "%-6zu %-21s %-9zu %-9s ", i + 1, bracketed(arms).c_str(),
                    truth.local_opt_arm[i] + 1, fmt(truth.local_opt_mean[i]).c_str());
      out << line << gaps.str() << '\n';
    }
    double loss = 0.0;
    for (double m : truth.local_opt_mean) loss += truth.global_opt_mean - m;
    out << "constraint-induced loss per round: " << fmt(loss) << '\n';
  } catch (const Error& e) {
    ok = false;
    err << e.what() << '\n';
  }

  out << (ok ? "valid\n" : "invalid\n");
  return ok ? kExitOk : kExitConfigInvalid;
}

int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  const auto config = load_effective(inv, err);
  if (!config) return kExitConfigInvalid;
  std::optional<Scenario> scenario;
  try {
    scenario.emplace(build_scenario(*config));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigInvalid;
  }

  try {
    prepare_output(inv, *config);
    const MixingDiagnostics mix = mixing_diagnostics(scenario->weights, inv.mixing_horizon);
    const TheoreticalBound bound =
        theorem_bound(scenario->environment, mix.consensus_error_bound, config->alpha, config->horizon);

    std::vector<DiagnosticEntry> diag{
        {"num_agents", static_cast<double>(config->num_agents)},
        {"num_arms", static_cast<double>(config->num_arms)},
        {"horizon", static_cast<double>(config->horizon)},
        {"runs", static_cast<double>(config->runs)},
        {"alpha", config->alpha},
        {"contraction_rate", mix.contraction_rate},
        {"contraction_coefficient", mix.contraction_coefficient},
        {"consensus_error_bound", mix.consensus_error_bound},
    };
    for (std::size_t i = 0; i < bound.per_agent_bound.size(); ++i) {
      diag.push_back({"theorem_bound_agent_" + std::to_string(i + 1), bound.per_agent_bound[i]});
    }

    for (PolicyKind policy : config->policies) {
      const auto start = std::chrono::steady_clock::now();
      const MonteCarloResult mc = run_monte_carlo(*scenario, *config, policy, inv.threads, {inv.weighting, std::nullopt});
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::string name(to_string(policy));
      export_run_curves(inv.output_dir / ("runs_" + name + ".csv"), mc);
      export_aggregate(inv.output_dir / ("aggregate_" + name + ".csv"), mc);
      const double mean = mc.mean_network_regret.back();
      const double sd = mc.std_network_regret.back();
      diag.push_back({name + "_final_mean_network_regret", mean});
      diag.push_back({name + "_final_std_network_regret", sd});
      for (std::size_t i = 0; i < mc.mean_final_agent_regret.size(); ++i) {
        diag.push_back({name + "_final_mean_regret_agent_" + std::to_string(i + 1),
                        mc.mean_final_agent_regret[i]});
      }
      out << name << ": final network regret " << fmt(mean, 3) << " +/- " << fmt(sd, 3) << " (std over "
          << config->runs << " runs, T = " << config->horizon << ")\n";
      if (!inv.quiet) err << name << ": " << config->runs << " runs in " << fmt(seconds, 2) << " s\n";
    }
    export_diagnostics(inv.output_dir / "run_diagnostics.csv", diag);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

int cmd_diagnose(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  auto config = load_effective(inv, err);
  if (!config) return kExitConfigInvalid;
  if (config->trace_every == 0) config->trace_every = 1;
  std::optional<Scenario> scenario;
  try {
    scenario.emplace(build_scenario(*config));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigInvalid;
  }

  bool audits_ok = true;
  try {
    prepare_output(inv, *config);
    const Environment& env = scenario->environment;
    const MixingDiagnostics mix = mixing_diagnostics(scenario->weights, inv.mixing_horizon);
    const RunResult run = run_single(*scenario, *config, PolicyKind::a2c_ucb, 0, {inv.weighting, std::nullopt});
    const ConservationAudit audit = conservation_audit(run.trajectory, env);
    const TrackingErrorReport tracking =
        tracking_error_report(run.trajectory, mix.perron_vector, mix.consensus_error_bound);
    const GenerationMassConvergence gmass = generation_mass_convergence(run.trajectory, env);
    const TheoreticalBound bound =
        theorem_bound(env, mix.consensus_error_bound, config->alpha, config->horizon);

    double max_tracking = 0.0;
    for (const auto& row : tracking.max_error) {
      for (double e : row) max_tracking = std::max(max_tracking, e);
    }

    std::vector<DiagnosticEntry> diag{
        {"contraction_rate", mix.contraction_rate},
        {"contraction_coefficient", mix.contraction_coefficient},
        {"consensus_error_bound", mix.consensus_error_bound},
        {"perron_residual", mix.perron_residual},
        {"snapshots", static_cast<double>(audit.snapshots_checked)},
        {"conservation_max_reward_deviation", audit.max_reward_deviation},
        {"conservation_max_pull_deviation", audit.max_pull_deviation},
        {"conservation_max_normalizer_deviation", audit.max_normalizer_deviation},
        {"conservation_max_access_deviation", audit.max_access_deviation},
        {"conservation_max_relative_deviation", audit.max_relative_deviation},
        {"conservation_order_violations", static_cast<double>(audit.order_violations)},
        {"conservation_passed", audit.passed ? 1.0 : 0.0},
        {"tracking_max_error", max_tracking},
        {"tracking_checked", static_cast<double>(tracking.checked)},
        {"tracking_violations", static_cast<double>(tracking.violations)},
        {"tracking_min_margin", tracking.checked ? tracking.min_margin : 0.0},
        {"generation_mass_settle_round",
         gmass.settle_round ? static_cast<double>(*gmass.settle_round) : -1.0},
        {"generation_mass_fitted_rate", gmass.fitted_rate},
        {"generation_mass_final_error", gmass.max_error.empty() ? 0.0 : gmass.max_error.back()},
    };
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      const double regret = run.regret.per_agent_regret[i].back();
      diag.push_back({"theorem_bound_agent_" + std::to_string(i + 1), bound.per_agent_bound[i]});
      diag.push_back({"regret_agent_" + std::to_string(i + 1), regret});
      diag.push_back({"theorem_margin_agent_" + std::to_string(i + 1), bound.per_agent_bound[i] - regret});
    }
    export_diagnostics(inv.output_dir / "diagnostics.csv", diag);

    out << "mixing: rho = " << fmt(mix.contraction_rate) << ", sigma = " << fmt(mix.contraction_coefficient)
        << ", c_P = " << fmt(mix.consensus_error_bound) << '\n';
    out << "conservation audit: " << (audit.passed ? "PASS" : "FAIL")
        << " (max reward dev " << audit.max_reward_deviation << ", pull dev " << audit.max_pull_deviation
        << ", y dev " << audit.max_normalizer_deviation << ", u dev " << audit.max_access_deviation << ")\n";
    out << "tracking-error audit: " << (tracking.violations == 0 ? "PASS" : "FAIL") << " ("
        << tracking.violations << " violations over " << tracking.checked << " checks)\n";
    out << "generation mass: ";
    if (gmass.settle_round) {
      out << "within 1e-6 from round " << *gmass.settle_round;
    } else {
      out << "not within 1e-6 by the horizon";
    }
    out << ", fitted decay rate " << fmt(gmass.fitted_rate) << '\n';
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      out << "agent " << i + 1 << ": regret " << fmt(run.regret.per_agent_regret[i].back(), 3) << ", bound "
          << fmt(bound.per_agent_bound[i], 3) << '\n';
    }
    audits_ok = audit.passed && tracking.violations == 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  if (!audits_ok) {
    err << "audit failure\n";
    return kExitAuditFailure;
  }
  return kExitOk;
}

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  switch (inv.command) {
    case Command::validate: return cmd_validate(inv, out, err);
    case Command::run: return cmd_run(inv, out, err);
    case Command::diagnose: return cmd_diagnose(inv, out, err);
  }
  return kExitUsage;
}

}  // namespace a2c::cli
