#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace a2c {

// Directed communication link: agent `to` receives from agent `from`.
// Agent indices are 0-based inside the library.
struct Edge {
  std::size_t from;
  std::size_t to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Communication digraph. Self-loops are implicit: they are dropped from the
// edge list and never appear in neighbor sets. Duplicate edges collapse.
class DirectedGraph {
 public:
  // Throws Error(invalid_edge) for endpoints outside [0, num_agents) and
  // Error(invalid_argument) for num_agents == 0.
  DirectedGraph(std::size_t num_agents, std::span<const Edge> edges);

  std::size_t num_agents() const noexcept { return in_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Sorted ascending.
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const { return in_.at(i); }
  const std::vector<std::size_t>& out_neighbors(std::size_t i) const { return out_.at(i); }
  std::size_t in_degree(std::size_t i) const { return in_.at(i).size(); }
  std::size_t out_degree(std::size_t i) const { return out_.at(i).size(); }
  bool has_edge(std::size_t from, std::size_t to) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
};

// A DirectedGraph known to be strongly connected. Only validate_graph creates one.
class CertifiedGraph {
 public:
  const DirectedGraph& graph() const noexcept { return graph_; }
  std::size_t num_agents() const noexcept { return graph_.num_agents(); }
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const { return graph_.in_neighbors(i); }
  const std::vector<std::size_t>& out_neighbors(std::size_t i) const { return graph_.out_neighbors(i); }
  std::size_t out_degree(std::size_t i) const { return graph_.out_degree(i); }
  std::size_t in_degree(std::size_t i) const { return graph_.in_degree(i); }

 private:
  explicit CertifiedGraph(DirectedGraph g) : graph_(std::move(g)) {}
  friend CertifiedGraph validate_graph(DirectedGraph g);

  DirectedGraph graph_;
};

// Strong connectivity via forward and reverse BFS from agent 0. Throws
// NotStronglyConnected naming one ordered pair with no directed path.
CertifiedGraph validate_graph(DirectedGraph g);

// Dense N x N mixing matrix, entry (receiver, sender).
class WeightMatrix {
 public:
  // p_ij = 1 / (1 + out_degree(j)) for j in in(i) ∪ {i}; column-stochastic.
  static WeightMatrix column_stochastic(const CertifiedGraph& g);
  // p_ij = 1 / (1 + in_degree(i)) on the same support; row-stochastic.
  // Does not preserve network sums; used as a negative control.
  static WeightMatrix row_stochastic(const CertifiedGraph& g);
  // Arbitrary square nonnegative entries, no stochasticity check.
  static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static WeightMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t receiver, std::size_t sender) const noexcept {
    return entries_[receiver * n_ + sender];
  }
  double& operator()(std::size_t receiver, std::size_t sender) noexcept {
    return entries_[receiver * n_ + sender];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }

  // max_j |sum_i p_ij - 1|
  double max_column_sum_error() const;

  std::vector<double> apply(std::span<const double> x) const;
  WeightMatrix multiply(const WeightMatrix& rhs) const;

 private:
  explicit WeightMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t n_;
  std::vector<double> entries_;
};

inline WeightMatrix build_weight_matrix(const CertifiedGraph& g) {
  return WeightMatrix::column_stochastic(g);
}

// Exact induced infinity-norm of M restricted to {x : 1'x = 0}:
//   max_i ( sum of the floor(N/2) largest entries of row i
//         - sum of the floor(N/2) smallest entries of row i ).
// The maximizer over the box [-1,1]^N intersected with the hyperplane puts +1
// on the largest entries and -1 on the smallest.
double zero_sum_induced_norm(const WeightMatrix& m);

struct MixingOptions {
  double power_tolerance = 1e-12;
  std::size_t power_max_iterations = 1'000'000;
  // m(t) below this is treated as converged; past it the computed P^t is
  // dominated by rounding and carries no decay information.
  double norm_floor = 1e-12;
};

struct MixingDiagnostics {
  std::vector<double> perron_vector;   // phi, P phi = phi, sum 1
  double contraction_rate = 0.0;       // rho in [0, 1)
  double contraction_coefficient = 0;  // sigma
  double consensus_error_bound = 0;    // c_P
  double perron_residual = 0.0;
  std::size_t power_iterations = 0;
  // m(t) = zero_sum_induced_norm(P^t) for t = 0 .. until floor or horizon.
  std::vector<double> disagreement_norms;
};

// Perron vector by power iteration, then (rho, sigma) such that
// ||P^t x||_inf <= sigma rho^t ||x||_inf for every zero-sum x and 0 <= t <= horizon
// where m(t) stays above the floor. rho is the worst local decay rate over the
// second half of that window; sigma = max_t m(t)/rho^t.
// c_P = sigma ||I - phi 1'||_inf / (1 - rho).
// Throws Error(no_convergence) if power iteration hits the iteration cap.
MixingDiagnostics mixing_diagnostics(const WeightMatrix& p, std::size_t horizon,
                                     const MixingOptions& options = {});

}  // namespace a2c
