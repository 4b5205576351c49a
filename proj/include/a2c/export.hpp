#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "a2c/engine.hpp"

namespace a2c {

// Fixed-point with 9 decimals ("inf", "-inf", "nan" for non-finite values).
std::string format_fixed(double value);

// policy,run,t,agent,regret,network_regret  (run, t, agent are 1-based)
void export_run_curves(const std::filesystem::path& path, const MonteCarloResult& result);

// policy,t,mean_network_regret,std_network_regret
void export_aggregate(const std::filesystem::path& path, const MonteCarloResult& result);

struct DiagnosticEntry {
  std::string metric;
  double value = 0.0;
};

// metric,value
void export_diagnostics(const std::filesystem::path& path, std::span<const DiagnosticEntry> entries);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace a2c
