#include "a2c/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "a2c/error.hpp"

namespace a2c {

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
  }
  std::ofstream& stream() { return out_; }
  void close() {
    out_.close();
    if (!out_) throw Error(Errc::io_failure, "failed writing '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

std::string format_fixed(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", value);
  return buf;
}

void export_run_curves(const std::filesystem::path& path, const MonteCarloResult& result) {
  CsvFile file(path);
  auto& out = file.stream();
  const std::string policy(to_string(result.policy));
  out << "policy,run,t,agent,regret,network_regret\n";
  std::string network;
  for (std::size_t run = 0; run < result.runs.size(); ++run) {
    const RegretReport& r = result.runs[run];
    for (std::size_t t = 0; t < r.network_regret.size(); ++t) {
      network = format_fixed(r.network_regret[t]);
      for (std::size_t i = 0; i < r.num_agents; ++i) {
        out << policy << ',' << run + 1 << ',' << t + 1 << ',' << i + 1 << ','
            << format_fixed(r.per_agent_regret[i][t]) << ',' << network << '\n';
      }
    }
  }
  file.close();
}

void export_aggregate(const std::filesystem::path& path, const MonteCarloResult& result) {
  CsvFile file(path);
  auto& out = file.stream();
  const std::string policy(to_string(result.policy));
  out << "policy,t,mean_network_regret,std_network_regret\n";
  for (std::size_t t = 0; t < result.mean_network_regret.size(); ++t) {
    out << policy << ',' << t + 1 << ',' << format_fixed(result.mean_network_regret[t]) << ','
        << format_fixed(result.std_network_regret[t]) << '\n';
  }
  file.close();
}

void export_diagnostics(const std::filesystem::path& path, std::span<const DiagnosticEntry> entries) {
  CsvFile file(path);
  auto& out = file.stream();
  out << "metric,value\n";
  for (const DiagnosticEntry& e : entries) out << e.metric << ',' << format_fixed(e.value) << '\n';
  file.close();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  CsvFile file(path);
  file.stream() << contents;
  file.close();
}

}  // namespace a2c
