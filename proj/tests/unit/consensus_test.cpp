#include "a2c/consensus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "a2c/error.hpp"
#include "support/oracles.hpp"

namespace a2c {
namespace {

using testing::EdgeList;

CertifiedGraph certify(std::size_t n, const EdgeList& list) {
  std::vector<Edge> edges;
  for (const auto& [a, b] : list) edges.push_back({a, b});
  return validate_graph(DirectedGraph(n, edges));
}

const EdgeList kPair = {{0, 1}, {1, 0}};

TEST(InitState, CopiesAccessRow) {
  const AccessMatrix access({{1, 0}, {0, 1}});
  const auto s = init_state(0, access);
  EXPECT_EQ(s.s_hat, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(s.n_hat, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(s.u_hat, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(s.y_hat, 1.0);
}

TEST(InitState, FullAccessRow) {
  const AccessMatrix access({{1, 1, 1}});
  EXPECT_EQ(init_state(0, access).u_hat, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(OutgoingMessages, SplitsEvenlyOverOutNeighborsAndSelf) {
  const auto g = certify(2, kPair);
  const auto p = build_weight_matrix(g);
  AgentConsensusState st{{2.0}, {4.0}, {1.0}, 1.0};
  const auto msgs = outgoing_messages(st, p, g, 0);
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].receiver, 0u);
  EXPECT_EQ(msgs[1].receiver, 1u);
  for (const auto& m : msgs) {
    EXPECT_EQ(m.sender, 0u);
    EXPECT_DOUBLE_EQ(m.s_part[0], 1.0);
    EXPECT_DOUBLE_EQ(m.n_part[0], 2.0);
    EXPECT_DOUBLE_EQ(m.u_part[0], 0.5);
    EXPECT_DOUBLE_EQ(m.y_part, 0.5);
  }
}

TEST(OutgoingMessages, SingleAgentKeepsEverything) {
  const auto g = certify(1, {});
  const auto p = build_weight_matrix(g);
  AgentConsensusState st{{0.7}, {1.0}, {1.0}, 1.0};
  const auto msgs = outgoing_messages(st, p, g, 0);
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].s_part[0], 0.7);
  EXPECT_EQ(msgs[0].y_part, 1.0);
}

TEST(OutgoingMessages, PartsSumToSenderState) {
  const auto g = certify(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {3, 1}});
  const auto p = build_weight_matrix(g);
  AgentConsensusState st{{2.0, 0.3}, {3.0, 1.0}, {1.0, 0.0}, 0.9};
  const auto msgs = outgoing_messages(st, p, g, 3);
  ASSERT_EQ(msgs.size(), 3u);
  double s = 0.0, y = 0.0;
  for (const auto& m : msgs) {
    s += m.s_part[0];
    y += m.y_part;
  }
  EXPECT_NEAR(s, 2.0, 1e-15);
  EXPECT_NEAR(y, 0.9, 1e-15);
}

TEST(ApplyRound, SingleAgentAddsInnovation) {
  const auto g = certify(1, {});
  const auto p = build_weight_matrix(g);
  const AccessMatrix access(std::vector<std::vector<int>>{{1}});
  auto st = init_state(0, access);
  const auto inbox = outgoing_messages(st, p, g, 0);
  st = apply_round(st, 0, g, inbox, Pull{0, 0.7});
  EXPECT_DOUBLE_EQ(st.s_hat[0], 0.7);
  EXPECT_DOUBLE_EQ(st.n_hat[0], 1.0);
  EXPECT_DOUBLE_EQ(st.u_hat[0], 1.0);
  EXPECT_DOUBLE_EQ(st.y_hat, 1.0);
  const auto est = estimates(st, 1);
  EXPECT_DOUBLE_EQ(est.mu_hat[0], 0.7);
  EXPECT_DOUBLE_EQ(est.nu_hat[0], 1.0);
}

TEST(ConsensusNetwork, TwoAgentRewardMassSpreads) {
  const auto g = certify(2, kPair);
  const auto p = build_weight_matrix(g);
  const AccessMatrix access({{1}, {1}});
  ConsensusNetwork net(g, p, access);
  std::vector<std::optional<Pull>> pulls{Pull{0, 1.0}, std::nullopt};
  net.step(pulls);
  EXPECT_DOUBLE_EQ(net.state(0).s_hat[0], 1.0);
  EXPECT_DOUBLE_EQ(net.state(1).s_hat[0], 0.0);
  pulls = {std::nullopt, std::nullopt};
  net.step(pulls);
  EXPECT_DOUBLE_EQ(net.state(0).s_hat[0], 0.5);
  EXPECT_DOUBLE_EQ(net.state(1).s_hat[0], 0.5);
  EXPECT_DOUBLE_EQ(net.state(0).n_hat[0], 0.5);
}

TEST(ConsensusNetwork, AccessMassEqualizes) {
  const auto g = certify(2, kPair);
  const auto p = build_weight_matrix(g);
  const AccessMatrix access({{1, 0}, {0, 1}});
  ConsensusNetwork net(g, p, access);
  std::vector<std::optional<Pull>> none(2);
  net.step(none);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(net.state(i).u_hat[0], 0.5);
    EXPECT_DOUBLE_EQ(net.state(i).u_hat[1], 0.5);
    EXPECT_DOUBLE_EQ(estimates(net.state(i), 2).g_hat[0], 1.0);
  }
}

TEST(Estimates, ColdStartAndNormalization) {
  AgentConsensusState cold{{0.0}, {0.0}, {1.0}, 1.0};
  auto est = estimates(cold, 3);
  EXPECT_EQ(est.mu_hat[0], 0.0);
  EXPECT_EQ(est.nu_hat[0], 0.0);
  EXPECT_EQ(est.g_hat[0], 3.0);

  AgentConsensusState warm{{1.5}, {3.0}, {0.25}, 0.5};
  est = estimates(warm, 4);
  EXPECT_DOUBLE_EQ(est.mu_hat[0], 0.5);
  EXPECT_DOUBLE_EQ(est.nu_hat[0], 24.0);
  EXPECT_DOUBLE_EQ(est.g_hat[0], 2.0);

  // n_hat below one: the mean uses max(n_hat, 1)
  AgentConsensusState thin{{0.3}, {0.5}, {1.0}, 1.0};
  EXPECT_DOUBLE_EQ(estimates(thin, 1).mu_hat[0], 0.3);
}

Errc inbox_error(const CertifiedGraph& g, std::span<const ConsensusMessage> inbox, std::size_t agent) {
  AgentConsensusState st{{0.0}, {0.0}, {1.0}, 1.0};
  try {
    apply_round(st, agent, g, inbox, std::nullopt);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;
}

TEST(ApplyRound, RejectsMalformedInbox) {
  const auto g = certify(2, kPair);
  const auto p = build_weight_matrix(g);
  AgentConsensusState st{{0.0}, {0.0}, {1.0}, 1.0};
  const auto from0 = outgoing_messages(st, p, g, 0);
  const auto from1 = outgoing_messages(st, p, g, 1);
  // agent 0 expects from0[0] (self) and from1[0] (addressed to 0)
  std::vector<ConsensusMessage> missing{from0[0]};
  EXPECT_EQ(inbox_error(g, missing, 0), Errc::malformed_inbox);
  std::vector<ConsensusMessage> duplicate{from0[0], from0[0], from1[0]};
  EXPECT_EQ(inbox_error(g, duplicate, 0), Errc::malformed_inbox);
  std::vector<ConsensusMessage> misaddressed{from0[0], from1[1]};
  EXPECT_EQ(inbox_error(g, misaddressed, 0), Errc::malformed_inbox);
  std::vector<ConsensusMessage> good{from1[0], from0[0]};
  EXPECT_NO_THROW(apply_round(st, 0, g, good, std::nullopt));
}

struct RandomCase {
  std::size_t n = 0, k = 0;
  EdgeList edges;
  std::vector<std::vector<int>> access;
  std::vector<std::vector<testing::ScriptedPull>> script;
};

RandomCase random_case(std::mt19937_64& gen, std::size_t max_n, std::size_t max_k, std::size_t rounds) {
  RandomCase c;
  c.n = 1 + gen() % max_n;
  c.k = 1 + gen() % max_k;
  c.edges = testing::random_strongly_connected(c.n, 0.3, gen);
  c.access = testing::random_access(c.n, c.k, gen);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < rounds; ++t) {
    std::vector<testing::ScriptedPull> round(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
      if (gen() % 4 == 0) continue;
      std::vector<std::size_t> arms;
      for (std::size_t a = 0; a < c.k; ++a)
        if (c.access[i][a]) arms.push_back(a);
      round[i].arm = arms[gen() % arms.size()];
      round[i].reward = unit(gen);
    }
    c.script.push_back(round);
  }
  return c;
}

std::vector<std::optional<Pull>> to_pulls(const std::vector<testing::ScriptedPull>& round) {
  std::vector<std::optional<Pull>> out(round.size());
  for (std::size_t i = 0; i < round.size(); ++i)
    if (round[i].arm) out[i] = Pull{*round[i].arm, round[i].reward};
  return out;
}

TEST(ConsensusNetworkProperty, MatchesDenseMatrixRecursion) {
  std::mt19937_64 gen(314);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = random_case(gen, 4, 3, 1 + gen() % 20);
    const auto g = certify(c.n, c.edges);
    const auto p = build_weight_matrix(g);
    const AccessMatrix access(c.access);
    ConsensusNetwork net(g, p, access);
    const auto dense = testing::dense_running_consensus(testing::column_weights_oracle(c.n, c.edges),
                                                        c.access, c.script);
    for (std::size_t t = 0; t < c.script.size(); ++t) {
      net.step(to_pulls(c.script[t]));
      for (std::size_t i = 0; i < c.n; ++i) {
        const auto& st = net.state(i);
        EXPECT_NEAR(st.y_hat, dense[t].y[i], 1e-12);
        for (std::size_t a = 0; a < c.k; ++a) {
          EXPECT_NEAR(st.s_hat[a], dense[t].s[a][i], 1e-12);
          EXPECT_NEAR(st.n_hat[a], dense[t].n[a][i], 1e-12);
          EXPECT_NEAR(st.u_hat[a], dense[t].u[a][i], 1e-12);
        }
      }
    }
  }
}

TEST(ConsensusNetworkProperty, ConservesNetworkMass) {
  std::mt19937_64 gen(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_case(gen, 8, 5, 100);
    const auto g = certify(c.n, c.edges);
    const auto p = build_weight_matrix(g);
    const AccessMatrix access(c.access);
    ConsensusNetwork net(g, p, access);
    std::vector<double> total_reward(c.k, 0.0), total_pulls(c.k, 0.0);
    for (const auto& round : c.script) {
      for (const auto& pull : round) {
        if (!pull.arm) continue;
        total_reward[*pull.arm] += pull.reward;
        total_pulls[*pull.arm] += 1.0;
      }
      net.step(to_pulls(round));
      double y = 0.0;
      std::vector<double> s(c.k, 0.0), n(c.k, 0.0), u(c.k, 0.0);
      for (const auto& st : net.states()) {
        y += st.y_hat;
        EXPECT_GT(st.y_hat, 0.0);
        for (std::size_t a = 0; a < c.k; ++a) {
          s[a] += st.s_hat[a];
          n[a] += st.n_hat[a];
          u[a] += st.u_hat[a];
          EXPECT_LE(st.s_hat[a], st.n_hat[a] + 1e-12);
          EXPECT_GE(st.s_hat[a], 0.0);
        }
      }
      EXPECT_NEAR(y, static_cast<double>(c.n), 1e-9);
      for (std::size_t a = 0; a < c.k; ++a) {
        EXPECT_NEAR(s[a], total_reward[a], 1e-9 * (1.0 + total_reward[a]));
        EXPECT_NEAR(n[a], total_pulls[a], 1e-9 * (1.0 + total_pulls[a]));
        EXPECT_NEAR(u[a], static_cast<double>(access.column_sum(a)), 1e-9);
      }
    }
  }
}

TEST(ConsensusNetworkProperty, GenerationMassEstimateConverges) {
  std::mt19937_64 gen(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(gen, 8, 4, 0);
    const auto g = certify(c.n, c.edges);
    const auto p = build_weight_matrix(g);
    const AccessMatrix access(c.access);
    ConsensusNetwork net(g, p, access);
    std::vector<std::optional<Pull>> none(c.n);
    for (int t = 0; t < 2000; ++t) net.step(none);
    for (std::size_t i = 0; i < c.n; ++i) {
      const auto est = estimates(net.state(i), c.n);
      for (std::size_t a = 0; a < c.k; ++a)
        EXPECT_NEAR(est.g_hat[a], static_cast<double>(access.column_sum(a)), 1e-6);
    }
  }
}

}  // namespace
}  // namespace a2c
