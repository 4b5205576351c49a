// a2c_bandit: validate configs, run Monte Carlo regret experiments and audit
// the consensus invariants of a single traced run.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "a2c/cli.hpp"
#include "a2c/error.hpp"

namespace {

using a2c::cli::CliInvocation;
using a2c::cli::Command;

struct RawFlags {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::uint64_t horizon = 0;
  std::string policy;
  double alpha = 0.0;
  std::uint64_t trace_every = 0;
  unsigned threads = 0;
  std::string weighting = "column";
  bool quiet = false;
};

void add_common(CLI::App* cmd, RawFlags& f, bool with_output) {
  cmd->add_option("--config", f.config, "Path to the JSON config")->required()->check(CLI::ExistingFile);
  if (with_output) cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Override the base seed");
  cmd->add_option("--runs", f.runs, "Override the Monte Carlo run count")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", f.horizon, "Override the horizon T")->check(CLI::PositiveNumber);
  cmd->add_option("--policy", f.policy, "a2c_ucb, ucb1_nocomm, both, or a comma-separated list");
  cmd->add_option("--alpha", f.alpha, "Override the exploration constant (> 1)");
  cmd->add_option("--trace-every", f.trace_every, "Snapshot period, 0 = off");
  cmd->add_option("--threads", f.threads, "Worker threads for Monte Carlo runs (0 = all cores)");
  cmd->add_flag("--quiet", f.quiet, "Suppress progress output");
  // Negative-control hook for tests: mix with a row-stochastic matrix instead.
  cmd->add_option("--weighting", f.weighting)->check(CLI::IsMember({"column", "row"}))->group("");
}

std::vector<a2c::PolicyKind> parse_policies(const std::string& text) {
  if (text == "both") return {a2c::PolicyKind::a2c_ucb, a2c::PolicyKind::ucb1_nocomm};
  std::vector<a2c::PolicyKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto p = a2c::parse_policy(item);
    if (!p) throw CLI::ValidationError("--policy", "unknown policy '" + item + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw CLI::ValidationError("--policy", "no policy given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative multi-agent bandits with arm-access constraints over directed graphs"};
  app.require_subcommand(1);

  RawFlags flags;
  CLI::App* validate = app.add_subcommand("validate", "Check graph connectivity and the access matrix");
  CLI::App* run = app.add_subcommand("run", "Run Monte Carlo regret experiments and export CSVs");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Trace one run and audit conservation and tracking");
  add_common(validate, flags, false);
  add_common(run, flags, true);
  add_common(diagnose, flags, true);

  CliInvocation inv;
  try {
    app.parse(argc, argv);
    CLI::App* chosen = app.get_subcommands().front();
    inv.command = chosen == run ? Command::run : chosen == diagnose ? Command::diagnose : Command::validate;
    inv.config_path = flags.config;
    inv.output_dir = flags.out;
    inv.quiet = flags.quiet;
    inv.threads = flags.threads;
    inv.weighting = flags.weighting == "row" ? a2c::WeightScheme::row_stochastic
                                             : a2c::WeightScheme::column_stochastic;
    if (chosen->count("--seed")) inv.overrides.seed = flags.seed;
    if (chosen->count("--runs")) inv.overrides.runs = flags.runs;
    if (chosen->count("--horizon")) inv.overrides.horizon = flags.horizon;
    if (chosen->count("--alpha")) inv.overrides.alpha = flags.alpha;
    if (chosen->count("--trace-every")) inv.overrides.trace_every = flags.trace_every;
    if (chosen->count("--policy")) inv.overrides.policies = parse_policies(flags.policy);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : a2c::cli::kExitUsage;
  }
  return a2c::cli::dispatch(inv, std::cout, std::cerr);
}
