#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "a2c/rng.hpp"

namespace a2c {

enum class RewardModel {
  bernoulli,          // reward 1 with probability mu, else 0
  truncated_uniform,  // uniform on [mu - w, mu + w], w = min(mu, 1 - mu)
};

std::string_view to_string(RewardModel model);
std::optional<RewardModel> parse_reward_model(std::string_view name);

struct ArmSet {
  std::vector<double> means;
  RewardModel reward_model = RewardModel::bernoulli;

  std::size_t num_arms() const noexcept { return means.size(); }
};

// N x K binary arm-access matrix; row i lists the arms agent i may pull.
class AccessMatrix {
 public:
  // Rows must be rectangular with 0/1 entries; Error(dimension_mismatch) or
  // Error(invalid_argument) otherwise. Column and row coverage are checked by
  // build_environment, not here.
  explicit AccessMatrix(const std::vector<std::vector<int>>& rows);

  std::size_t num_agents() const noexcept { return accessible_.size(); }
  std::size_t num_arms() const noexcept { return num_arms_; }
  bool operator()(std::size_t agent, std::size_t arm) const {
    return entries_.at(agent * num_arms_ + arm) != 0;
  }
  // Accessible arm indices for `agent`, ascending.
  const std::vector<std::size_t>& accessible_arms(std::size_t agent) const {
    return accessible_.at(agent);
  }
  std::size_t column_sum(std::size_t arm) const;
  std::vector<std::vector<int>> rows() const;

 private:
  std::size_t num_arms_ = 0;
  std::vector<std::uint8_t> entries_;
  std::vector<std::vector<std::size_t>> accessible_;
};

struct GroundTruth {
  double global_opt_mean = 0.0;           // mu*
  std::size_t global_opt_arm = 0;         // k*
  std::vector<double> local_opt_mean;     // mu_i*
  std::vector<std::size_t> local_opt_arm; // k_i*
  // gaps[i][k] = mu_i* - mu^k for accessible k; NaN where C_ik = 0.
  std::vector<std::vector<double>> gaps;
  std::vector<std::size_t> generation_mass;  // g^k = column sum of C
};

class Environment {
 public:
  const ArmSet& arms() const noexcept { return arms_; }
  const AccessMatrix& access() const noexcept { return access_; }
  const GroundTruth& truth() const noexcept { return truth_; }
  std::size_t num_agents() const noexcept { return access_.num_agents(); }
  std::size_t num_arms() const noexcept { return arms_.num_arms(); }

  // One reward draw in [0, 1]. Throws Error(inaccessible_arm) if the agent
  // may not pull the arm.
  double pull(std::size_t agent, std::size_t arm, RandomStream& rng) const;

 private:
  Environment(ArmSet arms, AccessMatrix access, GroundTruth truth)
      : arms_(std::move(arms)), access_(std::move(access)), truth_(std::move(truth)) {}
  friend Environment build_environment(ArmSet arms, AccessMatrix access);

  ArmSet arms_;
  AccessMatrix access_;
  GroundTruth truth_;
};

// Validates means in [0,1], C dimensions, every arm accessible by some agent
// (Error(orphan_arm)) and every agent owning some arm (Error(isolated_agent)).
// Argmax ties resolve to the lowest arm index.
Environment build_environment(ArmSet arms, AccessMatrix access);

double sample_reward(RewardModel model, double mean, RandomStream& rng);

}  // namespace a2c
