#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "a2c/analysis.hpp"
#include "a2c/config.hpp"
#include "a2c/trajectory.hpp"

namespace a2c {

enum class WeightScheme {
  column_stochastic,
  row_stochastic,  // negative control only: breaks mass conservation
};

struct RunOptions {
  WeightScheme weighting = WeightScheme::column_stochastic;
  // Overrides config.trace_every when set.
  std::optional<std::uint64_t> trace_every;
};

struct RunResult {
  Trajectory trajectory;
  RegretReport regret;
};

// One seeded trajectory. Each round: every agent selects from its state at the
// start of the round, pulls, records locally; then all agents emit messages
// from their current states and only afterwards apply their inboxes plus the
// innovation. Errors are rethrown with round and agent context.
RunResult run_single(const Scenario& scenario, const SimConfig& config, PolicyKind policy,
                     std::size_t run_index, const RunOptions& options = {});

struct MonteCarloResult {
  PolicyKind policy = PolicyKind::a2c_ucb;
  std::vector<RegretReport> runs;            // indexed by run_index
  std::vector<double> mean_network_regret;   // per round
  std::vector<double> std_network_regret;    // population std per round
  std::vector<double> mean_final_agent_regret;
};

// Mean and population standard deviation over runs, computed in run order.
MonteCarloResult aggregate_runs(PolicyKind policy, std::vector<RegretReport> runs);

// config.runs independent runs with run seeds config.seed ^ run_index, spread
// over `threads` workers (0 = hardware concurrency). Snapshots are not taken.
MonteCarloResult run_monte_carlo(const Scenario& scenario, const SimConfig& config, PolicyKind policy,
                                 unsigned threads = 0, const RunOptions& options = {});

}  // namespace a2c
