#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "a2c/config.hpp"
#include "a2c/engine.hpp"

namespace a2c::cli {

enum class Command { run, validate, diagnose };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfigInvalid = 2,
  kExitRuntimeFailure = 3,
  kExitAuditFailure = 4,
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> horizon;
  std::optional<std::vector<PolicyKind>> policies;
  std::optional<double> alpha;
  std::optional<std::uint64_t> trace_every;
};

struct CliInvocation {
  Command command = Command::validate;
  std::filesystem::path config_path;
  std::filesystem::path output_dir = "out";
  ConfigOverrides overrides;
  bool quiet = false;
  unsigned threads = 0;  // 0 = available parallelism
  WeightScheme weighting = WeightScheme::column_stochastic;
  std::size_t mixing_horizon = 1000;
};

// Override values win over file values; the result is re-checked.
SimConfig apply_overrides(SimConfig config, const ConfigOverrides& overrides);

// Summary goes to `out`, problems to `err`.
int cmd_validate(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_diagnose(const CliInvocation& inv, std::ostream& out, std::ostream& err);

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

}  // namespace a2c::cli
