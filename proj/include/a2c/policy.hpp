#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "a2c/consensus.hpp"
#include "a2c/rng.hpp"

namespace a2c {

enum class PolicyKind { a2c_ucb, ucb1_nocomm };

std::string_view to_string(PolicyKind policy);
std::optional<PolicyKind> parse_policy(std::string_view name);

// Per-agent pull counts n_i^k and reward sums s_i^k.
struct LocalCounters {
  std::vector<std::uint64_t> pulls;
  std::vector<double> reward_sum;

  LocalCounters() = default;
  explicit LocalCounters(std::size_t num_arms) : pulls(num_arms, 0), reward_sum(num_arms, 0.0) {}

  std::uint64_t total_pulls() const noexcept;
};

void record_pull(LocalCounters& counters, std::size_t arm, double reward);

// Estimates at or below this count as no information and force exploration.
inline constexpr double kMinEffectivePulls = 1e-9;

struct IndexBreakdown {
  double q = 0.0;
  double mean_part = 0.0;
  double bonus_part = 0.0;
  double effective_pulls = 0.0;
  double effective_mass = 0.0;
};

// Q = mu_hat + sqrt(alpha * log(max(t * g_hat, 1)) / nu_hat); +inf when
// nu_hat <= kMinEffectivePulls.
IndexBreakdown a2c_ucb_index(double mu_hat, double nu_hat, double g_hat, std::uint64_t t,
                             double alpha);

// s/n + sqrt(alpha * log t / n); +inf when n == 0.
double ucb1_index(double reward_sum, std::uint64_t pulls, std::uint64_t t, double alpha);

// Arm in `accessible` with the largest index, ties drawn uniformly from
// `tie_break`. The stream is only advanced when more than one arm ties.
// `index` is indexed by arm id.
std::size_t argmax_random_tie(std::span<const std::size_t> accessible, std::span<const double> index,
                              RandomStream& tie_break);

std::size_t select_arm_a2c(std::span<const std::size_t> accessible, const ConsensusEstimates& est,
                           std::uint64_t t, double alpha, RandomStream& tie_break,
                           std::vector<IndexBreakdown>* breakdown = nullptr);

std::size_t select_arm_ucb1(const LocalCounters& counters, std::span<const std::size_t> accessible,
                            std::uint64_t t, double alpha, RandomStream& tie_break);

}  // namespace a2c
