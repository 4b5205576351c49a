#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "a2c/consensus.hpp"
#include "a2c/policy.hpp"

namespace a2c {

struct RoundLog {
  std::uint64_t t = 0;                // 1-based round
  std::vector<std::size_t> actions;   // a_i(t), 0-based arm ids
  std::vector<double> rewards;        // r_i(t)
  // Every agent's consensus state after round t's mixing and innovation.
  std::optional<std::vector<AgentConsensusState>> snapshot;
};

struct Trajectory {
  PolicyKind policy = PolicyKind::a2c_ucb;
  std::size_t run_index = 0;
  std::size_t num_agents = 0;
  std::size_t num_arms = 0;
  std::vector<RoundLog> rounds;
};

}  // namespace a2c
