#include "a2c/consensus.hpp"

#include <algorithm>
#include <string>

#include "a2c/error.hpp"

namespace a2c {

AgentConsensusState init_state(std::size_t agent, const AccessMatrix& access) {
  const std::size_t k_arms = access.num_arms();
  AgentConsensusState s;
  s.s_hat.assign(k_arms, 0.0);
  s.n_hat.assign(k_arms, 0.0);
  s.u_hat.assign(k_arms, 0.0);
  for (std::size_t k : access.accessible_arms(agent)) s.u_hat[k] = 1.0;
  s.y_hat = 1.0;
  return s;
}

namespace {

ConsensusMessage scaled(const AgentConsensusState& state, std::size_t sender, std::size_t receiver,
                        double w) {
  ConsensusMessage m;
  m.sender = sender;
  m.receiver = receiver;
  const std::size_t k_arms = state.s_hat.size();
  m.s_part.resize(k_arms);
  m.n_part.resize(k_arms);
  m.u_part.resize(k_arms);
  for (std::size_t k = 0; k < k_arms; ++k) {
    m.s_part[k] = w * state.s_hat[k];
    m.n_part[k] = w * state.n_hat[k];
    m.u_part[k] = w * state.u_hat[k];
  }
  m.y_part = w * state.y_hat;
  return m;
}

[[noreturn]] void malformed(std::size_t agent, const std::string& why) {
  throw Error(Errc::malformed_inbox, "inbox of agent " + std::to_string(agent + 1) + ": " + why);
}

}  // namespace

std::vector<ConsensusMessage> outgoing_messages(const AgentConsensusState& state,
                                                const WeightMatrix& p, const CertifiedGraph& g,
                                                std::size_t agent) {
  const auto& out = g.out_neighbors(agent);
  std::vector<std::size_t> receivers(out.begin(), out.end());
  receivers.push_back(agent);
  std::sort(receivers.begin(), receivers.end());
  std::vector<ConsensusMessage> messages;
  messages.reserve(receivers.size());
  for (std::size_t l : receivers) messages.push_back(scaled(state, agent, l, p(l, agent)));
  return messages;
}

AgentConsensusState apply_round(const AgentConsensusState& state, std::size_t agent,
                                const CertifiedGraph& g, std::span<const ConsensusMessage> inbox,
                                const std::optional<Pull>& pull) {
  const std::size_t k_arms = state.s_hat.size();
  std::vector<std::size_t> expected(g.in_neighbors(agent).begin(), g.in_neighbors(agent).end());
  expected.push_back(agent);
  std::sort(expected.begin(), expected.end());
  if (inbox.size() != expected.size()) {
    malformed(agent, "expected " + std::to_string(expected.size()) + " messages, got " +
                         std::to_string(inbox.size()));
  }

  // Sum in ascending sender order regardless of arrival order.
  std::vector<const ConsensusMessage*> ordered;
  ordered.reserve(inbox.size());
  for (const ConsensusMessage& m : inbox) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](const ConsensusMessage* a, const ConsensusMessage* b) { return a->sender < b->sender; });

  AgentConsensusState next;
  next.s_hat.assign(k_arms, 0.0);
  next.n_hat.assign(k_arms, 0.0);
  next.u_hat.assign(k_arms, 0.0);
  next.y_hat = 0.0;
  for (std::size_t idx = 0; idx < ordered.size(); ++idx) {
    const ConsensusMessage& m = *ordered[idx];
    if (m.sender != expected[idx]) {
      malformed(agent, "unexpected sender set (message from agent " + std::to_string(m.sender + 1) + ")");
    }
    if (m.receiver != agent) malformed(agent, "message addressed to another agent");
    if (m.s_part.size() != k_arms || m.n_part.size() != k_arms || m.u_part.size() != k_arms) {
      malformed(agent, "message arm dimension mismatch");
    }
    for (std::size_t k = 0; k < k_arms; ++k) {
      next.s_hat[k] += m.s_part[k];
      next.n_hat[k] += m.n_part[k];
      next.u_hat[k] += m.u_part[k];
    }
    next.y_hat += m.y_part;
  }
  if (pull) {
    if (pull->arm >= k_arms) throw Error(Errc::invalid_argument, "pulled arm index out of range");
    if (!(pull->reward >= 0.0 && pull->reward <= 1.0)) {
      throw Error(Errc::invalid_argument, "reward must lie in [0, 1]");
    }
    next.s_hat[pull->arm] += pull->reward;
    next.n_hat[pull->arm] += 1.0;
  }
  return next;
}

ConsensusEstimates estimates(const AgentConsensusState& state, std::size_t num_agents) {
  const std::size_t k_arms = state.s_hat.size();
  const double n = static_cast<double>(num_agents);
  ConsensusEstimates e;
  e.mu_hat.resize(k_arms);
  e.nu_hat.resize(k_arms);
  e.g_hat.resize(k_arms);
  for (std::size_t k = 0; k < k_arms; ++k) {
    e.mu_hat[k] = state.s_hat[k] / std::max(state.n_hat[k], 1.0);
    e.nu_hat[k] = n * state.n_hat[k] / state.y_hat;
    e.g_hat[k] = n * state.u_hat[k] / state.y_hat;
  }
  return e;
}

ConsensusNetwork::ConsensusNetwork(const CertifiedGraph& g, const WeightMatrix& p,
                                   const AccessMatrix& access)
    : graph_(&g), weights_(&p), inboxes_(g.num_agents()) {
  if (p.size() != g.num_agents() || access.num_agents() != g.num_agents()) {
    throw Error(Errc::dimension_mismatch, "graph, weight matrix and access matrix sizes differ");
  }
  states_.reserve(g.num_agents());
  for (std::size_t i = 0; i < g.num_agents(); ++i) states_.push_back(init_state(i, access));
}

void ConsensusNetwork::step(std::span<const std::optional<Pull>> pulls) {
  const std::size_t n = states_.size();
  if (pulls.size() != n) throw Error(Errc::dimension_mismatch, "one pull slot per agent required");
  for (auto& inbox : inboxes_) inbox.clear();
  for (std::size_t i = 0; i < n; ++i) {
    for (ConsensusMessage& m : outgoing_messages(states_[i], *weights_, *graph_, i)) {
      inboxes_[m.receiver].push_back(std::move(m));
    }
  }
  // Barrier: every message above was built from pre-round states.
  for (std::size_t i = 0; i < n; ++i) {
    states_[i] = apply_round(states_[i], i, *graph_, inboxes_[i], pulls[i]);
  }
}

}  // namespace a2c
