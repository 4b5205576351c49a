#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "a2c/environment.hpp"
#include "a2c/graph.hpp"
#include "a2c/policy.hpp"

namespace a2c {

// Simulation settings as read from a config document. Agent and arm ids in
// the document are 1-based; `edges` and `access` here are stored as given.
struct SimConfig {
  std::size_t num_agents = 0;
  std::size_t num_arms = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // [from, to], 1-based
  std::vector<std::vector<int>> access;
  std::vector<double> arm_means;
  RewardModel reward_model = RewardModel::bernoulli;
  std::uint64_t horizon = 1;
  double alpha = 2.0;
  std::vector<PolicyKind> policies{PolicyKind::a2c_ucb};
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::uint64_t trace_every = 0;
};

// Parses JSON (// and /* */ comments allowed). Every key listed in SimConfig
// is required except reward_model, alpha, policy, runs, seed and trace_every;
// unknown keys are rejected. `policy` may be a string or an array of strings.
// Throws Error(invalid_config) on syntax, type or range errors.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

// Field-level checks: T >= 1, runs >= 1, alpha > 1, consistent dimensions.
void check_config(const SimConfig& config);

// Canonical JSON rendering with a fixed key order.
std::string to_json(const SimConfig& config);

// Everything derived from a config that does not change across runs.
struct Scenario {
  CertifiedGraph graph;
  WeightMatrix weights;
  Environment environment;
};

// Runs check_config, then validate_graph, build_weight_matrix and
// build_environment. Propagates their errors unchanged.
Scenario build_scenario(const SimConfig& config);

std::vector<Edge> zero_based_edges(const SimConfig& config);

}  // namespace a2c
