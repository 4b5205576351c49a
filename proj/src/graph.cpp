#include "a2c/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "a2c/error.hpp"

namespace a2c {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_edge: return "invalid edge";
    case Errc::not_strongly_connected: return "not strongly connected";
    case Errc::orphan_arm: return "orphan arm";
    case Errc::isolated_agent: return "isolated agent";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::inaccessible_arm: return "inaccessible arm";
    case Errc::malformed_inbox: return "malformed inbox";
    case Errc::no_convergence: return "no convergence";
    case Errc::invalid_config: return "invalid config";
    case Errc::io_failure: return "i/o failure";
  }
  return "unknown";
}

NotStronglyConnected::NotStronglyConnected(std::size_t from, std::size_t to)
    : Error(Errc::not_strongly_connected,
            "communication graph is not strongly connected: agent " + std::to_string(to + 1) +
                " is unreachable from agent " + std::to_string(from + 1)),
      from_(from),
      to_(to) {}

DirectedGraph::DirectedGraph(std::size_t num_agents, std::span<const Edge> edges)
    : in_(num_agents), out_(num_agents) {
  if (num_agents == 0) throw Error(Errc::invalid_argument, "graph needs at least one agent");
  for (const Edge& e : edges) {
    if (e.from >= num_agents || e.to >= num_agents) {
      throw Error(Errc::invalid_edge, "edge (" + std::to_string(e.from + 1) + ", " +
                                          std::to_string(e.to + 1) + ") has an endpoint outside 1.." +
                                          std::to_string(num_agents));
    }
    if (e.from != e.to) edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    out_[e.from].push_back(e.to);
    in_[e.to].push_back(e.from);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

bool DirectedGraph::has_edge(std::size_t from, std::size_t to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

namespace {

// Returns the first agent not reached from `source`, or n if all are reached.
template <typename Neighbors>
std::size_t first_unreached(std::size_t n, std::size_t source, Neighbors&& next) {
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : next(v)) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) return v;
  }
  return n;
}

}  // namespace

CertifiedGraph validate_graph(DirectedGraph g) {
  const std::size_t n = g.num_agents();
  const std::size_t forward =
      first_unreached(n, 0, [&](std::size_t v) -> const auto& { return g.out_neighbors(v); });
  if (forward != n) throw NotStronglyConnected(0, forward);
  const std::size_t backward =
      first_unreached(n, 0, [&](std::size_t v) -> const auto& { return g.in_neighbors(v); });
  if (backward != n) throw NotStronglyConnected(backward, 0);
  return CertifiedGraph(std::move(g));
}

WeightMatrix WeightMatrix::column_stochastic(const CertifiedGraph& g) {
  const std::size_t n = g.num_agents();
  WeightMatrix p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 1.0 / (1.0 + static_cast<double>(g.out_degree(j)));
    p(j, j) = w;
    for (std::size_t l : g.out_neighbors(j)) p(l, j) = w;
  }
  return p;
}

WeightMatrix WeightMatrix::row_stochastic(const CertifiedGraph& g) {
  const std::size_t n = g.num_agents();
  WeightMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / (1.0 + static_cast<double>(g.in_degree(i)));
    p(i, i) = w;
    for (std::size_t j : g.in_neighbors(i)) p(i, j) = w;
  }
  return p;
}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw Error(Errc::invalid_argument, "weight matrix must be nonempty");
  WeightMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(Errc::dimension_mismatch, "weight matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(rows[i][j] >= 0.0) || !std::isfinite(rows[i][j])) {
        throw Error(Errc::invalid_argument, "weight matrix entries must be finite and nonnegative");
      }
      p(i, j) = rows[i][j];
    }
  }
  return p;
}

WeightMatrix WeightMatrix::identity(std::size_t n) {
  WeightMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) p(i, i) = 1.0;
  return p;
}

double WeightMatrix::max_column_sum_error() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) sum += (*this)(i, j);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::vector<double> WeightMatrix::apply(std::span<const double> x) const {
  if (x.size() != n_) throw Error(Errc::dimension_mismatch, "vector length must match matrix size");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

WeightMatrix WeightMatrix::multiply(const WeightMatrix& rhs) const {
  if (rhs.n_ != n_) throw Error(Errc::dimension_mismatch, "matrix sizes differ");
  WeightMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

double zero_sum_induced_norm(const WeightMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t half = n / 2;
  double worst = 0.0;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    std::copy(row.begin(), row.end(), r.begin());
    std::sort(r.begin(), r.end());
    double spread = 0.0;
    for (std::size_t k = 0; k < half; ++k) spread += r[n - 1 - k] - r[k];
    worst = std::max(worst, spread);
  }
  return worst;
}

MixingDiagnostics mixing_diagnostics(const WeightMatrix& p, std::size_t horizon,
                                     const MixingOptions& options) {
  const std::size_t n = p.size();
  MixingDiagnostics d;

  std::vector<double> phi(n, 1.0 / static_cast<double>(n));
  double residual = 0.0;
  std::size_t it = 0;
  for (;;) {
    std::vector<double> next = p.apply(phi);
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(next[i] - phi[i]));
    phi = std::move(next);
    ++it;
    if (residual <= options.power_tolerance) break;
    if (it >= options.power_max_iterations) {
      throw Error(Errc::no_convergence, "power iteration residual " + std::to_string(residual) +
                                            " after " + std::to_string(it) + " iterations");
    }
  }
  double total = 0.0;
  for (double v : phi) total += v;
  for (double& v : phi) v /= total;
  d.perron_vector = std::move(phi);
  d.power_iterations = it;
  {
    const std::vector<double> check = p.apply(d.perron_vector);
    for (std::size_t i = 0; i < n; ++i) {
      d.perron_residual = std::max(d.perron_residual, std::abs(check[i] - d.perron_vector[i]));
    }
  }

  // m(t) for t = 0, 1, ... while above the floor.
  WeightMatrix power = WeightMatrix::identity(n);
  d.disagreement_norms.push_back(zero_sum_induced_norm(power));
  for (std::size_t t = 1; t <= horizon && d.disagreement_norms.back() > options.norm_floor; ++t) {
    power = p.multiply(power);
    d.disagreement_norms.push_back(zero_sum_induced_norm(power));
  }
  const auto& m = d.disagreement_norms;
  // Last index whose norm is still informative.
  std::size_t end = m.size() - 1;
  while (end > 0 && m[end] <= options.norm_floor) --end;

  double rho = 0.0;
  if (end >= 1) {
    const std::size_t start = end / 2;
    for (std::size_t t = start + 1; t <= end; ++t) {
      const double rate = std::pow(m[t] / m[start], 1.0 / static_cast<double>(t - start));
      rho = std::max(rho, rate);
    }
    rho = std::min(rho, 1.0 - 1e-12);
  }
  double sigma = 1.0;
  for (std::size_t t = 0; t <= end; ++t) {
    const double scale = std::pow(rho, static_cast<double>(t));
    if (scale > 0.0) sigma = std::max(sigma, m[t] / scale);
  }
  double deviation_norm = 0.0;  // ||I - phi 1'||_inf
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += std::abs((i == j ? 1.0 : 0.0) - d.perron_vector[i]);
    }
    deviation_norm = std::max(deviation_norm, row);
  }
  d.contraction_rate = rho;
  d.contraction_coefficient = sigma;
  d.consensus_error_bound = sigma * deviation_norm / (1.0 - rho);
  return d;
}

}  // namespace a2c
