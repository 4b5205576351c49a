#include "a2c/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "a2c/error.hpp"

namespace a2c {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_config, what); }

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"num_agents", "num_arms",     "edges",  "access",
                                          "arm_means",  "reward_model", "horizon", "alpha",
                                          "policy",     "runs",         "seed",   "trace_every"};
  return keys;
}

std::uint64_t get_unsigned(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    bad(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_real(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

std::vector<PolicyKind> get_policies(const json& v) {
  std::vector<std::string> names;
  if (v.is_string()) {
    names.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const json& item : v) {
      if (!item.is_string()) bad("'policy' entries must be strings");
      names.push_back(item.get<std::string>());
    }
  } else {
    bad("'policy' must be a string or an array of strings");
  }
  if (names.empty()) bad("'policy' must name at least one policy");
  std::vector<PolicyKind> out;
  for (const auto& name : names) {
    const auto p = parse_policy(name);
    if (!p) bad("unknown policy '" + name + "' (expected a2c_ucb or ucb1_nocomm)");
    for (PolicyKind seen : out) {
      if (seen == *p) bad("policy '" + name + "' listed twice");
    }
    out.push_back(*p);
  }
  return out;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/true,
                      /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) bad("unknown config key '" + key + "'");
  }
  for (const char* key : {"num_agents", "num_arms", "edges", "access", "arm_means", "horizon"}) {
    if (!doc.contains(key)) bad(std::string("missing required config key '") + key + "'");
  }

  SimConfig c;
  c.num_agents = get_unsigned(doc, "num_agents");
  c.num_arms = get_unsigned(doc, "num_arms");
  c.horizon = get_unsigned(doc, "horizon");

  const json& edges = doc.at("edges");
  if (!edges.is_array()) bad("'edges' must be an array of [from, to] pairs");
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      bad("each edge must be a [from, to] pair of positive integers");
    }
    c.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }

  const json& access = doc.at("access");
  if (!access.is_array()) bad("'access' must be an array of rows");
  for (const json& row : access) {
    if (!row.is_array()) bad("each 'access' row must be an array of 0/1 entries");
    std::vector<int> r;
    for (const json& v : row) {
      if (!v.is_number_integer()) bad("'access' entries must be 0 or 1");
      r.push_back(v.get<int>());
    }
    c.access.push_back(std::move(r));
  }

  const json& means = doc.at("arm_means");
  if (!means.is_array()) bad("'arm_means' must be an array of numbers");
  for (const json& v : means) c.arm_means.push_back(get_real(v, "'arm_means' entries"));

  if (doc.contains("reward_model")) {
    const json& v = doc.at("reward_model");
    if (!v.is_string()) bad("'reward_model' must be a string");
    const auto model = parse_reward_model(v.get<std::string>());
    if (!model) bad("unknown reward_model '" + v.get<std::string>() + "'");
    c.reward_model = *model;
  }
  if (doc.contains("alpha")) c.alpha = get_real(doc.at("alpha"), "'alpha'");
  if (doc.contains("policy")) c.policies = get_policies(doc.at("policy"));
  if (doc.contains("runs")) c.runs = get_unsigned(doc, "runs");
  if (doc.contains("seed")) c.seed = get_unsigned(doc, "seed");
  if (doc.contains("trace_every")) c.trace_every = get_unsigned(doc, "trace_every");

  check_config(c);
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void check_config(const SimConfig& c) {
  if (c.num_agents == 0) bad("'num_agents' must be at least 1");
  if (c.num_arms == 0) bad("'num_arms' must be at least 1");
  if (c.horizon == 0) bad("'horizon' must be at least 1");
  if (c.runs == 0) bad("'runs' must be at least 1");
  if (!(c.alpha > 1.0) || !std::isfinite(c.alpha)) bad("'alpha' must be a finite number > 1");
  if (c.policies.empty()) bad("at least one policy is required");
  if (c.arm_means.size() != c.num_arms) {
    bad("'arm_means' has " + std::to_string(c.arm_means.size()) + " entries but num_arms is " +
        std::to_string(c.num_arms));
  }
  if (c.access.size() != c.num_agents) {
    bad("'access' has " + std::to_string(c.access.size()) + " rows but num_agents is " +
        std::to_string(c.num_agents));
  }
  for (std::size_t i = 0; i < c.access.size(); ++i) {
    if (c.access[i].size() != c.num_arms) {
      bad("'access' row " + std::to_string(i + 1) + " has " + std::to_string(c.access[i].size()) +
          " entries but num_arms is " + std::to_string(c.num_arms));
    }
  }
}

std::string to_json(const SimConfig& c) {
  json doc = json::object();
  // nlohmann::json keeps keys sorted, which fixes the output order.
  doc["num_agents"] = c.num_agents;
  doc["num_arms"] = c.num_arms;
  json edges = json::array();
  for (const auto& [from, to] : c.edges) edges.push_back({from, to});
  doc["edges"] = edges;
  doc["access"] = c.access;
  doc["arm_means"] = c.arm_means;
  doc["reward_model"] = std::string(to_string(c.reward_model));
  doc["horizon"] = c.horizon;
  doc["alpha"] = c.alpha;
  if (c.policies.size() == 1) {
    doc["policy"] = std::string(to_string(c.policies.front()));
  } else {
    json names = json::array();
    for (PolicyKind p : c.policies) names.push_back(std::string(to_string(p)));
    doc["policy"] = names;
  }
  doc["runs"] = c.runs;
  doc["seed"] = c.seed;
  doc["trace_every"] = c.trace_every;
  return doc.dump(2) + "\n";
}

std::vector<Edge> zero_based_edges(const SimConfig& c) {
  std::vector<Edge> out;
  out.reserve(c.edges.size());
  for (const auto& [from, to] : c.edges) {
    // Id 0 wraps to SIZE_MAX, which DirectedGraph rejects as out of range.
    const std::size_t f = from - 1;
    const std::size_t t = to - 1;
    out.push_back({f, t});
  }
  return out;
}

Scenario build_scenario(const SimConfig& config) {
  check_config(config);
  const std::vector<Edge> edges = zero_based_edges(config);
  CertifiedGraph graph = validate_graph(DirectedGraph(config.num_agents, edges));
  WeightMatrix weights = build_weight_matrix(graph);
  Environment env = build_environment(ArmSet{config.arm_means, config.reward_model},
                                      AccessMatrix(config.access));
  return Scenario{std::move(graph), std::move(weights), std::move(env)};
}

}  // namespace a2c
