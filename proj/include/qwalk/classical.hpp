#pragma once

// Classical baselines: random walk with restart, discrete-time random walk
// and continuous-time diffusion dp/dt = -Lp.

#include <cstddef>

#include <Eigen/SparseCore>

#include "qwalk/expm.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

enum class StochasticAxis { Column, Row };

/// Nonnegative matrix whose columns (Column) or rows (Row) sum to one.
struct TransitionMatrix {
  Eigen::SparseMatrix<double> matrix;
  StochasticAxis axis = StochasticAxis::Column;
};

/// M_kj = A_jk / deg(j), i.e. A D^{-1} for undirected graphs. Columns of
/// dangling nodes are replaced by p0 (full teleport).
TransitionMatrix normalize_column_stochastic(const LabeledGraph& g, const ProbabilityVector& p0);

enum class RwrMethod { Auto, Direct, Power };

struct RwrOptions {
  RwrMethod method = RwrMethod::Auto;
  /// Auto uses the direct solve up to this many nodes.
  std::size_t direct_limit = 2000;
  double power_tol = 1e-12;
  std::size_t max_iterations = 100000;
};

/// p_s = (1 - alpha)(I - alpha M)^{-1} p0. Throws ValidationError for
/// alpha outside [0, 1) and NumericalError if power iteration stalls.
ProbabilityVector rwr_steady_state(const LabeledGraph& g, const ProbabilityVector& p0, double alpha,
                                   const RwrOptions& options = {});
ProbabilityVector rwr_steady_state(const TransitionMatrix& m, const ProbabilityVector& p0, double alpha,
                                   const RwrOptions& options = {});

/// Truncated restart iteration p_{i+1} = alpha M p_i + (1 - alpha) p0,
/// starting from p0. `iterations` = 0 returns p0.
ProbabilityVector rwr_iterate(const TransitionMatrix& m, const ProbabilityVector& p0, double alpha,
                              std::size_t iterations);

/// Row-stochastic P = D^{-1} A. Dangling nodes keep their mass (P_jj = 1).
TransitionMatrix dtrw_transition(const LabeledGraph& g);

/// p_{s+1} = P^T p_s.
ProbabilityVector dtrw_evolve(const LabeledGraph& g, const ProbabilityVector& p0, std::size_t steps);
ProbabilityVector dtrw_evolve(const TransitionMatrix& p, const ProbabilityVector& p0, std::size_t steps);
ProbabilityVector dtrw_transition_profile(const LabeledGraph& g, NodeId source, std::size_t steps);

/// e^{-Lt} p0 on an undirected graph.
ProbabilityVector ctrw_evolve(const LabeledGraph& g, const ProbabilityVector& p0, double t,
                              const ExpmOptions& options = {});

}  // namespace qwalk
