#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "a2c/environment.hpp"
#include "a2c/graph.hpp"

namespace a2c {

// Running ratio-consensus state held by one agent, one entry per arm.
struct AgentConsensusState {
  std::vector<double> s_hat;  // network cumulative reward mass
  std::vector<double> n_hat;  // network pull mass
  std::vector<double> u_hat;  // access mass, starts at row i of C
  double y_hat = 1.0;         // normalizer mass

  friend bool operator==(const AgentConsensusState&, const AgentConsensusState&) = default;
};

// Pre-scaled share of a sender's state addressed to one receiver.
struct ConsensusMessage {
  std::size_t sender = 0;
  std::size_t receiver = 0;
  std::vector<double> s_part;
  std::vector<double> n_part;
  std::vector<double> u_part;
  double y_part = 0.0;
};

// Local innovation for one round: the arm pulled and the reward observed.
struct Pull {
  std::size_t arm = 0;
  double reward = 0.0;
};

struct ConsensusEstimates {
  std::vector<double> mu_hat;  // s_hat / max(n_hat, 1)
  std::vector<double> nu_hat;  // N n_hat / y_hat
  std::vector<double> g_hat;   // N u_hat / y_hat
};

AgentConsensusState init_state(std::size_t agent, const AccessMatrix& access);

// One message per out-neighbor plus the self-term (receiver == agent), in
// ascending receiver order. Entries are p(receiver, agent) times the state.
std::vector<ConsensusMessage> outgoing_messages(const AgentConsensusState& state,
                                                const WeightMatrix& p, const CertifiedGraph& g,
                                                std::size_t agent);

// Sums the inbox and adds the pull innovation after mixing. The inbox must
// hold exactly one message from each in-neighbor and one self-term, all
// addressed to `agent`; otherwise Error(malformed_inbox).
AgentConsensusState apply_round(const AgentConsensusState& state, std::size_t agent,
                                const CertifiedGraph& g, std::span<const ConsensusMessage> inbox,
                                const std::optional<Pull>& pull);

ConsensusEstimates estimates(const AgentConsensusState& state, std::size_t num_agents);

// All agents' states advanced together in synchronous rounds: every message of
// a round is produced from the pre-round states before any state changes.
class ConsensusNetwork {
 public:
  ConsensusNetwork(const CertifiedGraph& g, const WeightMatrix& p, const AccessMatrix& access);

  // pulls[i] is agent i's innovation this round (nullopt for none).
  void step(std::span<const std::optional<Pull>> pulls);

  const std::vector<AgentConsensusState>& states() const noexcept { return states_; }
  const AgentConsensusState& state(std::size_t agent) const { return states_.at(agent); }
  std::size_t num_agents() const noexcept { return states_.size(); }

 private:
  const CertifiedGraph* graph_;
  const WeightMatrix* weights_;
  std::vector<AgentConsensusState> states_;
  std::vector<std::vector<ConsensusMessage>> inboxes_;
};

}  // namespace a2c
