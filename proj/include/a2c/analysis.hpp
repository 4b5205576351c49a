#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "a2c/environment.hpp"
#include "a2c/trajectory.hpp"

namespace a2c {

// Pseudo-regret curves, index t - 1 holds the value after round t.
struct RegretReport {
  std::size_t num_agents = 0;
  std::uint64_t horizon = 0;
  std::vector<std::vector<double>> per_agent_regret;  // R_i(t) w.r.t. mu_i*
  std::vector<double> network_regret;                 // R(t) = sum_i R_i(t)
  double constraint_loss_per_round = 0.0;             // sum_i (mu* - mu_i*)
  double constraint_loss = 0.0;                       // horizon * per-round loss
  std::vector<double> global_regret;                  // sum_i sum_tau (mu* - mu^{a_i})
};

RegretReport compute_regret(const Trajectory& trajectory, const Environment& env);

// max_t |global(t) - (constraint_loss * t / T + R(t))|
double max_decomposition_error(const RegretReport& report);

struct ConservationAudit {
  double max_reward_deviation = 0.0;      // |sum_i s_hat_i^k - true cumulative reward|
  double max_pull_deviation = 0.0;        // |sum_i n_hat_i^k - true pull count|
  double max_normalizer_deviation = 0.0;  // |sum_i y_hat_i - N|
  double max_access_deviation = 0.0;      // |sum_i u_hat_i^k - g^k|
  double max_relative_deviation = 0.0;    // each deviation over (1 + |truth|)
  std::size_t order_violations = 0;       // entries with s_hat > n_hat, a negative mass or y_hat <= 0
  std::size_t snapshots_checked = 0;
  bool passed = false;
};

// Requires snapshots (trace_every > 0). Passes iff every deviation is within
// relative_tolerance * (1 + |truth|), no order violation occurs and at least
// one snapshot was checked.
ConservationAudit conservation_audit(const Trajectory& trajectory, const Environment& env,
                                     double relative_tolerance = 1e-9);

// Compares mu_hat_i^k(t) against the phi-weighted mean
//   mu_bar^k(t) = sum_i phi_i s_i^k(t) / sum_i phi_i n_i^k(t)
// built from true local counters, and checks
//   |mu_hat - mu_bar| <= 2 c_P / (n_bar - c_P)   whenever n_bar > c_P.
struct TrackingErrorReport {
  std::vector<std::vector<double>> max_error;  // [agent][arm] over rounds with n_bar > 0
  std::size_t checked = 0;                     // (i, k, t) triples with n_bar > c_P
  std::size_t violations = 0;
  double min_margin = 0.0;                     // min of bound - error over checked triples
  double violation_rate() const noexcept {
    return checked == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(checked);
  }
};

TrackingErrorReport tracking_error_report(const Trajectory& trajectory, std::span<const double> phi,
                                          double c_p);

struct GenerationMassConvergence {
  std::vector<std::uint64_t> rounds;
  std::vector<double> max_error;  // max_{i,k} |g_hat_i^k(t) - g^k|
  // First snapshot round from which the error stays within tolerance.
  std::optional<std::uint64_t> settle_round;
  // exp(slope) of a least-squares fit of log(error) against t, over the
  // snapshots whose error lies in [fit_floor, fit_ceiling]; 0 if fewer than
  // two such points exist.
  double fitted_rate = 0.0;
  std::size_t fit_points = 0;
};

GenerationMassConvergence generation_mass_convergence(const Trajectory& trajectory,
                                                      const Environment& env,
                                                      double tolerance = 1e-6,
                                                      double fit_floor = 1e-12,
                                                      double fit_ceiling = 1e-2);

struct TheoreticalBound {
  // sum over suboptimal accessible k of
  //   16 alpha log(T g^k) / gap + 4 c_P + gap,  plus 2 T^(1 - alpha)
  std::vector<double> per_agent_bound;
  // (agent, arm) pairs other than k_i* with zero gap; skipped in the sum.
  std::vector<std::pair<std::size_t, std::size_t>> zero_gap_arms;
};

TheoreticalBound theorem_bound(const Environment& env, double c_p, double alpha, std::uint64_t horizon);

}  // namespace a2c
