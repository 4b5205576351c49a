#include "a2c/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "a2c/error.hpp"
#include "support/cli_runner.hpp"

namespace a2c {
namespace {

namespace fs = std::filesystem;
using testing::config_path;
using testing::read_file;
using testing::run_cli;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    scratch_ = fs::temp_directory_path() / (std::string("a2c_cli_") + info->name());
    fs::remove_all(scratch_);
    fs::create_directories(scratch_);
  }
  void TearDown() override { fs::remove_all(scratch_); }

  fs::path write_config(const std::string& name, const std::string& body) {
    const auto p = scratch_ / name;
    std::ofstream(p) << body;
    return p;
  }

  std::string quoted(const fs::path& p) const { return "'" + p.string() + "'"; }

  fs::path scratch_;
};

const char* kOrphanConfig = R"({
  "num_agents": 2, "num_arms": 3, "edges": [[1, 2], [2, 1]],
  "access": [[1, 1, 0], [1, 0, 0]], "arm_means": [0.5, 0.6, 0.7], "horizon": 10
})";

const char* kDisconnectedConfig = R"({
  "num_agents": 3, "num_arms": 1, "edges": [[1, 2], [2, 3]],
  "access": [[1], [1], [1]], "arm_means": [0.5], "horizon": 10
})";

TEST_F(CliTest, ValidateAcceptsServerConfig) {
  const auto r = run_cli("validate --config " + quoted(config_path("edge_servers.json")), scratch_ / "io");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("g = [2,1,1,2,1,2,1]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("constraint-induced loss per round: 2"), std::string::npos) << r.out;
}

TEST_F(CliTest, ValidateRejectsOrphanArm) {
  const auto cfg = write_config("orphan.json", kOrphanConfig);
  const auto r = run_cli("validate --config " + quoted(cfg), scratch_ / "io");
  EXPECT_EQ(r.exit_code, cli::kExitConfigInvalid);
  EXPECT_NE(r.err.find("Assumption 1 violated: arm 3 orphaned"), std::string::npos) << r.err;
}

TEST_F(CliTest, ValidateRejectsDisconnectedGraph) {
  const auto cfg = write_config("path.json", kDisconnectedConfig);
  const auto r = run_cli("validate --config " + quoted(cfg), scratch_ / "io");
  EXPECT_EQ(r.exit_code, cli::kExitConfigInvalid);
  EXPECT_NE(r.err.find("unreachable"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
  const auto cfg = write_config("typo.json", R"({"num_agents": 1, "num_arms": 1, "edges": [],
    "access": [[1]], "arm_means": [0.5], "horizon": 10, "horizn": 5})");
  const auto r = run_cli("validate --config " + quoted(cfg), scratch_ / "io");
  EXPECT_EQ(r.exit_code, cli::kExitConfigInvalid);
  EXPECT_NE(r.err.find("horizn"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli("", scratch_ / "io").exit_code, cli::kExitUsage);
  EXPECT_EQ(run_cli("run --config /does/not/exist.json", scratch_ / "io").exit_code, cli::kExitUsage);
  EXPECT_EQ(run_cli("run --config " + quoted(config_path("edge_servers.json")) + " --policy greedy", scratch_ / "io")
                .exit_code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli("--help", scratch_ / "io").exit_code, 0);
}

TEST_F(CliTest, RunIsDeterministicAndWritesOutputs) {
  const std::string base = "run --config " + quoted(config_path("edge_servers.json")) +
                           " --runs 2 --horizon 10 --quiet --out ";
  const auto a = run_cli(base + quoted(scratch_ / "a"), scratch_ / "io");
  const auto b = run_cli(base + quoted(scratch_ / "b") + " --threads 2", scratch_ / "io");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  ASSERT_EQ(b.exit_code, 0) << b.err;
  for (const char* name : {"runs_a2c_ucb.csv", "aggregate_a2c_ucb.csv", "runs_ucb1_nocomm.csv",
                           "aggregate_ucb1_nocomm.csv", "effective_config.json", "run_diagnostics.csv"}) {
    ASSERT_TRUE(fs::exists(scratch_ / "a" / name)) << name;
    EXPECT_EQ(read_file(scratch_ / "a" / name), read_file(scratch_ / "b" / name)) << name;
  }
  const auto runs = read_file(scratch_ / "a" / "runs_a2c_ucb.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 1 + 2 * 10 * 6);
  const auto effective = parse_config(read_file(scratch_ / "a" / "effective_config.json"));
  EXPECT_EQ(effective.runs, 2u);
  EXPECT_EQ(effective.horizon, 10u);
}

TEST_F(CliTest, SeedOverrideChangesOutput) {
  const std::string base = "run --config " + quoted(config_path("edge_servers.json")) +
                           " --runs 1 --horizon 200 --policy a2c_ucb --quiet --out ";
  ASSERT_EQ(run_cli(base + quoted(scratch_ / "a") + " --seed 1", scratch_ / "io").exit_code, 0);
  ASSERT_EQ(run_cli(base + quoted(scratch_ / "b") + " --seed 2", scratch_ / "io").exit_code, 0);
  EXPECT_NE(read_file(scratch_ / "a" / "runs_a2c_ucb.csv"), read_file(scratch_ / "b" / "runs_a2c_ucb.csv"));
  EXPECT_FALSE(fs::exists(scratch_ / "a" / "runs_ucb1_nocomm.csv"));
}

TEST_F(CliTest, DiagnosePassesOnServerConfig) {
  const auto r = run_cli("diagnose --config " + quoted(config_path("edge_servers.json")) + " --horizon 2000 --out " +
                             quoted(scratch_ / "d"),
                         scratch_ / "io");
  EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("conservation audit: PASS"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("tracking-error audit: PASS"), std::string::npos) << r.out;
  const auto diag = read_file(scratch_ / "d" / "diagnostics.csv");
  EXPECT_NE(diag.find("conservation_passed,1.000000000"), std::string::npos);
  EXPECT_NE(diag.find("tracking_violations,0.000000000"), std::string::npos);
}

TEST_F(CliTest, DiagnoseSingleAgentHasZeroConsensusError) {
  const auto r = run_cli("diagnose --config " + quoted(config_path("single_agent.json")) + " --out " +
                             quoted(scratch_ / "d"),
                         scratch_ / "io");
  EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
  const auto diag = read_file(scratch_ / "d" / "diagnostics.csv");
  EXPECT_NE(diag.find("consensus_error_bound,0.000000000"), std::string::npos) << diag;
}

TEST_F(CliTest, DiagnoseFlagsRowStochasticMixing) {
  const auto r = run_cli("diagnose --config " + quoted(config_path("edge_servers.json")) +
                             " --horizon 300 --weighting row --out " + quoted(scratch_ / "d"),
                         scratch_ / "io");
  EXPECT_EQ(r.exit_code, cli::kExitAuditFailure) << r.out << r.err;
  EXPECT_NE(r.out.find("conservation audit: FAIL"), std::string::npos) << r.out;
}

TEST(ApplyOverrides, OverridesWinAndAreChecked) {
  auto base = load_config(config_path("edge_servers.json"));
  cli::ConfigOverrides o;
  o.seed = 5;
  o.runs = 3;
  o.horizon = 77;
  o.policies = std::vector<PolicyKind>{PolicyKind::ucb1_nocomm};
  const auto merged = cli::apply_overrides(base, o);
  EXPECT_EQ(merged.seed, 5u);
  EXPECT_EQ(merged.runs, 3u);
  EXPECT_EQ(merged.horizon, 77u);
  EXPECT_EQ(merged.policies, o.policies);
  EXPECT_EQ(merged.arm_means, base.arm_means);
  cli::ConfigOverrides bad;
  bad.alpha = 0.5;
  EXPECT_THROW(cli::apply_overrides(base, bad), Error);
}

}  // namespace
}  // namespace a2c
