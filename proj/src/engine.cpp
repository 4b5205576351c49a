#include "a2c/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "a2c/error.hpp"

namespace a2c {

namespace {

[[noreturn]] void rethrow_with_context(const Error& e, std::uint64_t t, std::size_t agent) {
  throw Error(e.code(), "round " + std::to_string(t) + ", agent " + std::to_string(agent + 1) + ": " +
                            e.what());
}

}  // namespace

RunResult run_single(const Scenario& scenario, const SimConfig& config, PolicyKind policy,
                     std::size_t run_index, const RunOptions& options) {
  const Environment& env = scenario.environment;
  const std::size_t n = env.num_agents();
  const std::size_t k_arms = env.num_arms();
  const std::uint64_t horizon = config.horizon;
  const std::uint64_t trace = options.trace_every.value_or(config.trace_every);

  const WeightMatrix row_weights = options.weighting == WeightScheme::row_stochastic
                                       ? WeightMatrix::row_stochastic(scenario.graph)
                                       : WeightMatrix::identity(1);
  const WeightMatrix& weights =
      options.weighting == WeightScheme::row_stochastic ? row_weights : scenario.weights;

  std::vector<RandomStream> reward_rng;
  std::vector<RandomStream> tie_rng;
  reward_rng.reserve(n);
  tie_rng.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    reward_rng.emplace_back(substream_key(config.seed, run_index, i, StreamPurpose::reward));
    tie_rng.emplace_back(substream_key(config.seed, run_index, i, StreamPurpose::tie_break));
  }

  ConsensusNetwork network(scenario.graph, weights, env.access());
  std::vector<LocalCounters> counters(n, LocalCounters(k_arms));
  std::vector<std::optional<Pull>> pulls(n);

  RunResult result;
  Trajectory& traj = result.trajectory;
  traj.policy = policy;
  traj.run_index = run_index;
  traj.num_agents = n;
  traj.num_arms = k_arms;
  traj.rounds.reserve(horizon);

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    RoundLog log;
    log.t = t;
    log.actions.resize(n);
    log.rewards.resize(n);
    std::size_t agent = 0;
    try {
      for (agent = 0; agent < n; ++agent) {
        const auto& arms = env.access().accessible_arms(agent);
        std::size_t arm = 0;
        if (policy == PolicyKind::a2c_ucb) {
          arm = select_arm_a2c(arms, estimates(network.state(agent), n), t, config.alpha, tie_rng[agent]);
        } else {
          arm = select_arm_ucb1(counters[agent], arms, t, config.alpha, tie_rng[agent]);
        }
        const double reward = env.pull(agent, arm, reward_rng[agent]);
        record_pull(counters[agent], arm, reward);
        log.actions[agent] = arm;
        log.rewards[agent] = reward;
        pulls[agent] = Pull{arm, reward};
      }
      if (policy == PolicyKind::a2c_ucb) network.step(pulls);
    } catch (const Error& e) {
      rethrow_with_context(e, t, agent < n ? agent : 0);
    }
    if (policy == PolicyKind::a2c_ucb && trace > 0 && t % trace == 0) {
      log.snapshot = network.states();
    }
    traj.rounds.push_back(std::move(log));
  }

  result.regret = compute_regret(traj, env);
  return result;
}

MonteCarloResult aggregate_runs(PolicyKind policy, std::vector<RegretReport> runs) {
  MonteCarloResult out;
  out.policy = policy;
  out.runs = std::move(runs);
  if (out.runs.empty()) return out;
  const std::size_t horizon = out.runs.front().network_regret.size();
  const std::size_t n = out.runs.front().num_agents;
  const double count = static_cast<double>(out.runs.size());
  out.mean_network_regret.assign(horizon, 0.0);
  out.std_network_regret.assign(horizon, 0.0);
  out.mean_final_agent_regret.assign(n, 0.0);
  for (const RegretReport& r : out.runs) {
    if (r.network_regret.size() != horizon || r.num_agents != n) {
      throw Error(Errc::dimension_mismatch, "runs disagree on horizon or agent count");
    }
    for (std::size_t t = 0; t < horizon; ++t) out.mean_network_regret[t] += r.network_regret[t];
    for (std::size_t i = 0; i < n; ++i) {
      if (horizon > 0) out.mean_final_agent_regret[i] += r.per_agent_regret[i].back();
    }
  }
  for (double& v : out.mean_network_regret) v /= count;
  for (double& v : out.mean_final_agent_regret) v /= count;
  for (const RegretReport& r : out.runs) {
    for (std::size_t t = 0; t < horizon; ++t) {
      const double d = r.network_regret[t] - out.mean_network_regret[t];
      out.std_network_regret[t] += d * d;
    }
  }
  for (double& v : out.std_network_regret) v = std::sqrt(v / count);
  return out;
}

MonteCarloResult run_monte_carlo(const Scenario& scenario, const SimConfig& config, PolicyKind policy,
                                 unsigned threads, const RunOptions& options) {
  const std::size_t runs = config.runs;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));

  RunOptions untraced = options;
  untraced.trace_every = 0;

  std::vector<RegretReport> reports(runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= runs) return;
      try {
        reports[r] = run_single(scenario, config, policy, r, untraced).regret;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(runs);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate_runs(policy, std::move(reports));
}

}  // namespace a2c
