#include "a2c/policy.hpp"

#include <cmath>
#include <limits>

#include "a2c/error.hpp"

namespace a2c {

std::string_view to_string(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::a2c_ucb: return "a2c_ucb";
    case PolicyKind::ucb1_nocomm: return "ucb1_nocomm";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "a2c_ucb") return PolicyKind::a2c_ucb;
  if (name == "ucb1_nocomm") return PolicyKind::ucb1_nocomm;
  return std::nullopt;
}

std::uint64_t LocalCounters::total_pulls() const noexcept {
  std::uint64_t total = 0;
  for (auto n : pulls) total += n;
  return total;
}

void record_pull(LocalCounters& counters, std::size_t arm, double reward) {
  if (arm >= counters.pulls.size()) throw Error(Errc::invalid_argument, "arm index out of range");
  if (!(reward >= 0.0 && reward <= 1.0)) throw Error(Errc::invalid_argument, "reward must lie in [0, 1]");
  counters.pulls[arm] += 1;
  counters.reward_sum[arm] += reward;
}

IndexBreakdown a2c_ucb_index(double mu_hat, double nu_hat, double g_hat, std::uint64_t t,
                             double alpha) {
  IndexBreakdown b;
  b.mean_part = mu_hat;
  b.effective_pulls = nu_hat;
  b.effective_mass = g_hat;
  if (nu_hat <= kMinEffectivePulls) {
    b.bonus_part = std::numeric_limits<double>::infinity();
    b.q = std::numeric_limits<double>::infinity();
    return b;
  }
  const double log_term = std::log(std::max(static_cast<double>(t) * g_hat, 1.0));
  b.bonus_part = std::sqrt(alpha * log_term / nu_hat);
  b.q = mu_hat + b.bonus_part;
  return b;
}

double ucb1_index(double reward_sum, std::uint64_t pulls, std::uint64_t t, double alpha) {
  if (pulls == 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(pulls);
  return reward_sum / n + std::sqrt(alpha * std::log(static_cast<double>(t)) / n);
}

std::size_t argmax_random_tie(std::span<const std::size_t> accessible, std::span<const double> index,
                              RandomStream& tie_break) {
  if (accessible.empty()) throw Error(Errc::invalid_argument, "accessible arm set is empty");
  double best = -std::numeric_limits<double>::infinity();
  std::size_t ties = 0;
  for (std::size_t k : accessible) {
    const double q = index[k];
    if (q > best) {
      best = q;
      ties = 1;
    } else if (q == best) {
      ++ties;
    }
  }
  if (ties == 0) return accessible.front();  // every index is NaN or -inf
  std::size_t pick = ties > 1 ? tie_break.uniform_index(ties) : 0;
  for (std::size_t k : accessible) {
    if (index[k] == best) {
      if (pick == 0) return k;
      --pick;
    }
  }
  return accessible.front();
}

std::size_t select_arm_a2c(std::span<const std::size_t> accessible, const ConsensusEstimates& est,
                           std::uint64_t t, double alpha, RandomStream& tie_break,
                           std::vector<IndexBreakdown>* breakdown) {
  const std::size_t k_arms = est.mu_hat.size();
  std::vector<double> q(k_arms, -std::numeric_limits<double>::infinity());
  if (breakdown) breakdown->assign(k_arms, IndexBreakdown{});
  for (std::size_t k : accessible) {
    const IndexBreakdown b = a2c_ucb_index(est.mu_hat[k], est.nu_hat[k], est.g_hat[k], t, alpha);
    q[k] = b.q;
    if (breakdown) (*breakdown)[k] = b;
  }
  return argmax_random_tie(accessible, q, tie_break);
}

std::size_t select_arm_ucb1(const LocalCounters& counters, std::span<const std::size_t> accessible,
                            std::uint64_t t, double alpha, RandomStream& tie_break) {
  std::vector<double> q(counters.pulls.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t k : accessible) {
    q[k] = ucb1_index(counters.reward_sum[k], counters.pulls[k], t, alpha);
  }
  return argmax_random_tie(accessible, q, tie_break);
}

}  // namespace a2c
