#include "a2c/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "a2c/error.hpp"

namespace a2c {

std::string_view to_string(RewardModel model) {
  switch (model) {
    case RewardModel::bernoulli: return "bernoulli";
    case RewardModel::truncated_uniform: return "truncated_uniform";
  }
  return "unknown";
}

std::optional<RewardModel> parse_reward_model(std::string_view name) {
  if (name == "bernoulli") return RewardModel::bernoulli;
  if (name == "truncated_uniform") return RewardModel::truncated_uniform;
  return std::nullopt;
}

AccessMatrix::AccessMatrix(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw Error(Errc::dimension_mismatch, "access matrix has no rows");
  num_arms_ = rows.front().size();
  if (num_arms_ == 0) throw Error(Errc::dimension_mismatch, "access matrix has no columns");
  entries_.reserve(rows.size() * num_arms_);
  accessible_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != num_arms_) {
      throw Error(Errc::dimension_mismatch, "access matrix row " + std::to_string(i + 1) + " has " +
                                                std::to_string(rows[i].size()) + " entries, expected " +
                                                std::to_string(num_arms_));
    }
    for (std::size_t k = 0; k < num_arms_; ++k) {
      const int v = rows[i][k];
      if (v != 0 && v != 1) {
        throw Error(Errc::invalid_argument, "access matrix entries must be 0 or 1");
      }
      entries_.push_back(static_cast<std::uint8_t>(v));
      if (v == 1) accessible_[i].push_back(k);
    }
  }
}

std::size_t AccessMatrix::column_sum(std::size_t arm) const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < num_agents(); ++i) sum += (*this)(i, arm) ? 1 : 0;
  return sum;
}

std::vector<std::vector<int>> AccessMatrix::rows() const {
  std::vector<std::vector<int>> out(num_agents(), std::vector<int>(num_arms_, 0));
  for (std::size_t i = 0; i < num_agents(); ++i) {
    for (std::size_t k : accessible_[i]) out[i][k] = 1;
  }
  return out;
}

Environment build_environment(ArmSet arms, AccessMatrix access) {
  const std::size_t k_arms = arms.num_arms();
  if (k_arms == 0) throw Error(Errc::invalid_argument, "at least one arm is required");
  if (access.num_arms() != k_arms) {
    throw Error(Errc::dimension_mismatch, "access matrix has " + std::to_string(access.num_arms()) +
                                              " columns but there are " + std::to_string(k_arms) +
                                              " arms");
  }
  for (std::size_t k = 0; k < k_arms; ++k) {
    const double mu = arms.means[k];
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw Error(Errc::invalid_argument,
                  "arm " + std::to_string(k + 1) + " mean must lie in [0, 1]");
    }
  }

  GroundTruth truth;
  truth.generation_mass.resize(k_arms);
  for (std::size_t k = 0; k < k_arms; ++k) {
    truth.generation_mass[k] = access.column_sum(k);
    if (truth.generation_mass[k] == 0) {
      throw Error(Errc::orphan_arm, "Assumption 1 violated: arm " + std::to_string(k + 1) +
                                        " orphaned (no agent can pull it)");
    }
  }
  const std::size_t n = access.num_agents();
  for (std::size_t i = 0; i < n; ++i) {
    if (access.accessible_arms(i).empty()) {
      throw Error(Errc::isolated_agent,
                  "agent " + std::to_string(i + 1) + " has an empty accessible arm set");
    }
  }

  // First strict maximum wins, so ties go to the lowest index.
  truth.global_opt_arm = 0;
  for (std::size_t k = 1; k < k_arms; ++k) {
    if (arms.means[k] > arms.means[truth.global_opt_arm]) truth.global_opt_arm = k;
  }
  truth.global_opt_mean = arms.means[truth.global_opt_arm];

  truth.local_opt_arm.resize(n);
  truth.local_opt_mean.resize(n);
  truth.gaps.assign(n, std::vector<double>(k_arms, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& arms_i = access.accessible_arms(i);
    std::size_t best = arms_i.front();
    for (std::size_t k : arms_i) {
      if (arms.means[k] > arms.means[best]) best = k;
    }
    truth.local_opt_arm[i] = best;
    truth.local_opt_mean[i] = arms.means[best];
    for (std::size_t k : arms_i) truth.gaps[i][k] = arms.means[best] - arms.means[k];
  }

  return Environment(std::move(arms), std::move(access), std::move(truth));
}

double sample_reward(RewardModel model, double mean, RandomStream& rng) {
  const double u = rng.uniform01();
  switch (model) {
    case RewardModel::bernoulli:
      return u < mean ? 1.0 : 0.0;
    case RewardModel::truncated_uniform: {
      const double half_width = std::min(mean, 1.0 - mean);
      return std::clamp(mean + half_width * (2.0 * u - 1.0), 0.0, 1.0);
    }
  }
  return 0.0;
}

double Environment::pull(std::size_t agent, std::size_t arm, RandomStream& rng) const {
  if (agent >= num_agents() || arm >= num_arms() || !access_(agent, arm)) {
    throw Error(Errc::inaccessible_arm, "agent " + std::to_string(agent + 1) +
                                            " attempted to pull inaccessible arm " +
                                            std::to_string(arm + 1));
  }
  return sample_reward(arms_.reward_model, arms_.means[arm], rng);
}

}  // namespace a2c
