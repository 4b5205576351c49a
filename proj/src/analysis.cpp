#include "a2c/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "a2c/error.hpp"

namespace a2c {

RegretReport compute_regret(const Trajectory& trajectory, const Environment& env) {
  const std::size_t n = env.num_agents();
  const auto& means = env.arms().means;
  const GroundTruth& truth = env.truth();
  const std::size_t horizon = trajectory.rounds.size();

  RegretReport r;
  r.num_agents = n;
  r.horizon = horizon;
  r.per_agent_regret.assign(n, std::vector<double>(horizon, 0.0));
  r.network_regret.assign(horizon, 0.0);
  r.global_regret.assign(horizon, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    r.constraint_loss_per_round += truth.global_opt_mean - truth.local_opt_mean[i];
  }
  r.constraint_loss = static_cast<double>(horizon) * r.constraint_loss_per_round;

  std::vector<double> running(n, 0.0);
  double global = 0.0;
  for (std::size_t idx = 0; idx < horizon; ++idx) {
    const RoundLog& round = trajectory.rounds[idx];
    if (round.actions.size() != n) throw Error(Errc::dimension_mismatch, "round log has wrong agent count");
    double network = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t arm = round.actions[i];
      if (arm >= means.size() || !env.access()(i, arm)) {
        throw Error(Errc::inaccessible_arm, "trajectory contains an infeasible action");
      }
      running[i] += truth.local_opt_mean[i] - means[arm];
      global += truth.global_opt_mean - means[arm];
      r.per_agent_regret[i][idx] = running[i];
      network += running[i];
    }
    r.network_regret[idx] = network;
    r.global_regret[idx] = global;
  }
  return r;
}

double max_decomposition_error(const RegretReport& report) {
  double worst = 0.0;
  const double horizon = static_cast<double>(report.horizon);
  for (std::size_t idx = 0; idx < report.network_regret.size(); ++idx) {
    const double t = static_cast<double>(idx + 1);
    const double rhs = report.constraint_loss * (t / horizon) + report.network_regret[idx];
    worst = std::max(worst, std::abs(report.global_regret[idx] - rhs));
  }
  return worst;
}

ConservationAudit conservation_audit(const Trajectory& trajectory, const Environment& env,
                                     double relative_tolerance) {
  const std::size_t n = env.num_agents();
  const std::size_t k_arms = env.num_arms();
  const auto& g = env.truth().generation_mass;

  ConservationAudit a;
  std::vector<double> true_reward(k_arms, 0.0);
  std::vector<double> true_pulls(k_arms, 0.0);
  auto note = [&](double deviation, double truth, double& slot) {
    slot = std::max(slot, deviation);
    a.max_relative_deviation = std::max(a.max_relative_deviation, deviation / (1.0 + std::abs(truth)));
  };

  for (const RoundLog& round : trajectory.rounds) {
    for (std::size_t i = 0; i < n; ++i) {
      true_reward[round.actions[i]] += round.rewards[i];
      true_pulls[round.actions[i]] += 1.0;
    }
    if (!round.snapshot) continue;
    const auto& states = *round.snapshot;
    ++a.snapshots_checked;
    double y_sum = 0.0;
    for (const AgentConsensusState& s : states) {
      y_sum += s.y_hat;
      if (!(s.y_hat > 0.0)) ++a.order_violations;
    }
    note(std::abs(y_sum - static_cast<double>(n)), static_cast<double>(n), a.max_normalizer_deviation);
    for (std::size_t k = 0; k < k_arms; ++k) {
      double s_sum = 0.0, n_sum = 0.0, u_sum = 0.0;
      for (const AgentConsensusState& s : states) {
        s_sum += s.s_hat[k];
        n_sum += s.n_hat[k];
        u_sum += s.u_hat[k];
        if (s.s_hat[k] < 0.0 || s.u_hat[k] < 0.0 || s.s_hat[k] > s.n_hat[k]) ++a.order_violations;
      }
      note(std::abs(s_sum - true_reward[k]), true_reward[k], a.max_reward_deviation);
      note(std::abs(n_sum - true_pulls[k]), true_pulls[k], a.max_pull_deviation);
      note(std::abs(u_sum - static_cast<double>(g[k])), static_cast<double>(g[k]), a.max_access_deviation);
    }
  }
  a.passed = a.snapshots_checked > 0 && a.order_violations == 0 &&
             a.max_relative_deviation <= relative_tolerance;
  return a;
}

TrackingErrorReport tracking_error_report(const Trajectory& trajectory, std::span<const double> phi,
                                          double c_p) {
  const std::size_t n = trajectory.num_agents;
  const std::size_t k_arms = trajectory.num_arms;
  if (phi.size() != n) throw Error(Errc::dimension_mismatch, "Perron vector length must equal N");

  TrackingErrorReport rep;
  rep.max_error.assign(n, std::vector<double>(k_arms, 0.0));
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> s(n, std::vector<double>(k_arms, 0.0));
  std::vector<std::vector<double>> cnt(n, std::vector<double>(k_arms, 0.0));

  for (const RoundLog& round : trajectory.rounds) {
    for (std::size_t i = 0; i < n; ++i) {
      s[i][round.actions[i]] += round.rewards[i];
      cnt[i][round.actions[i]] += 1.0;
    }
    if (!round.snapshot) continue;
    const auto& states = *round.snapshot;
    for (std::size_t k = 0; k < k_arms; ++k) {
      double s_bar = 0.0, n_bar = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s_bar += phi[i] * s[i][k];
        n_bar += phi[i] * cnt[i][k];
      }
      if (!(n_bar > 0.0)) continue;
      const double mu_bar = s_bar / n_bar;
      const bool check = n_bar > c_p;
      const double bound = check ? 2.0 * c_p / (n_bar - c_p) : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double mu_hat = states[i].s_hat[k] / std::max(states[i].n_hat[k], 1.0);
        const double err = std::abs(mu_hat - mu_bar);
        rep.max_error[i][k] = std::max(rep.max_error[i][k], err);
        if (check) {
          ++rep.checked;
          rep.min_margin = std::min(rep.min_margin, bound - err);
          if (err > bound) ++rep.violations;
        }
      }
    }
  }
  return rep;
}

GenerationMassConvergence generation_mass_convergence(const Trajectory& trajectory,
                                                      const Environment& env, double tolerance,
                                                      double fit_floor, double fit_ceiling) {
  const std::size_t n = env.num_agents();
  const auto& g = env.truth().generation_mass;
  GenerationMassConvergence out;
  for (const RoundLog& round : trajectory.rounds) {
    if (!round.snapshot) continue;
    double worst = 0.0;
    for (const AgentConsensusState& s : *round.snapshot) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double g_hat = static_cast<double>(n) * s.u_hat[k] / s.y_hat;
        worst = std::max(worst, std::abs(g_hat - static_cast<double>(g[k])));
      }
    }
    out.rounds.push_back(round.t);
    out.max_error.push_back(worst);
  }

  for (std::size_t idx = out.max_error.size(); idx-- > 0;) {
    if (out.max_error[idx] > tolerance) break;
    out.settle_round = out.rounds[idx];
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t idx = 0; idx < out.max_error.size(); ++idx) {
    const double e = out.max_error[idx];
    if (e < fit_floor || e > fit_ceiling) continue;
    const double x = static_cast<double>(out.rounds[idx]);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  out.fit_points = m;
  if (m >= 2) {
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom > 0.0) out.fitted_rate = std::exp((static_cast<double>(m) * sxy - sx * sy) / denom);
  }
  return out;
}

TheoreticalBound theorem_bound(const Environment& env, double c_p, double alpha, std::uint64_t horizon) {
  const GroundTruth& truth = env.truth();
  const double T = static_cast<double>(horizon);
  TheoreticalBound b;
  b.per_agent_bound.assign(env.num_agents(), 0.0);
  const double tail = 2.0 * std::pow(T, 1.0 - alpha);
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    double sum = 0.0;
    for (std::size_t k : env.access().accessible_arms(i)) {
      if (k == truth.local_opt_arm[i]) continue;
      const double gap = truth.gaps[i][k];
      if (!(gap > 0.0)) {
        b.zero_gap_arms.emplace_back(i, k);
        continue;
      }
      const double mass = static_cast<double>(truth.generation_mass[k]);
      sum += 16.0 * alpha * std::log(T * mass) / gap + 4.0 * c_p + gap;
    }
    b.per_agent_bound[i] = sum + tail;
  }
  return b;
}

}  // namespace a2c
