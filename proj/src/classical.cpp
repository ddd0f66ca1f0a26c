#include "qwalk/classical.hpp"

#include <cmath>
#include <vector>

#include <Eigen/SparseLU>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

void check_dimension(const Eigen::VectorXd& p, std::size_t n) {
  if (static_cast<std::size_t>(p.size()) != n)
    throw ValidationError("probability vector has " + std::to_string(p.size()) + " entries, graph has " +
                          std::to_string(n) + " nodes");
}

void clip_roundoff(ProbabilityVector& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) {
      if (p[i] < -1e-12) throw NumericalError("random walk produced a negative probability");
      p[i] = 0.0;
    }
  }
}

}  // namespace

TransitionMatrix normalize_column_stochastic(const LabeledGraph& g, const ProbabilityVector& p0) {
  const std::size_t n = g.num_nodes();
  check_dimension(p0, n);
  validate_probability_vector(p0);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.num_edges());
  for (NodeId j = 0; j < n; ++j) {
    const double strength = g.out_strength(j);
    if (strength > 0.0) {
      for (const Neighbor& nb : g.out_neighbors(j)) triplets.emplace_back(nb.node, j, nb.weight / strength);
    } else {
      for (Eigen::Index k = 0; k < p0.size(); ++k)
        if (p0[k] != 0.0) triplets.emplace_back(k, j, p0[k]);
    }
  }
  TransitionMatrix m;
  m.axis = StochasticAxis::Column;
  m.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.matrix.setFromTriplets(triplets.begin(), triplets.end());
  m.matrix.makeCompressed();
  return m;
}

ProbabilityVector rwr_steady_state(const LabeledGraph& g, const ProbabilityVector& p0, double alpha,
                                   const RwrOptions& options) {
  return rwr_steady_state(normalize_column_stochastic(g, p0), p0, alpha, options);
}

ProbabilityVector rwr_steady_state(const TransitionMatrix& m, const ProbabilityVector& p0, double alpha,
                                   const RwrOptions& options) {
  if (m.axis != StochasticAxis::Column) throw ValidationError("RWR needs a column-stochastic transition matrix");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("RWR restart parameter alpha must lie in [0, 1)");
  const auto n = static_cast<std::size_t>(m.matrix.rows());
  check_dimension(p0, n);
  validate_probability_vector(p0);
  if (alpha == 0.0) return p0;

  RwrMethod method = options.method;
  if (method == RwrMethod::Auto) method = n <= options.direct_limit ? RwrMethod::Direct : RwrMethod::Power;

  ProbabilityVector p;
  if (method == RwrMethod::Direct) {
    Eigen::SparseMatrix<double> system(m.matrix.rows(), m.matrix.cols());
    system.setIdentity();
    system -= alpha * m.matrix;
    system.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) throw NumericalError("RWR direct solve: factorisation failed");
    p = lu.solve(((1.0 - alpha) * p0).eval());
    if (lu.info() != Eigen::Success) throw NumericalError("RWR direct solve failed");
  } else {
    p = p0;
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      ProbabilityVector next = alpha * (m.matrix * p) + (1.0 - alpha) * p0;
      const double delta = (next - p).lpNorm<1>();
      p = std::move(next);
      if (delta <= options.power_tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalError("RWR power iteration did not converge within " + std::to_string(options.max_iterations) +
                           " iterations");
  }
  clip_roundoff(p);
  return p;
}

ProbabilityVector rwr_iterate(const TransitionMatrix& m, const ProbabilityVector& p0, double alpha,
                              std::size_t iterations) {
  if (m.axis != StochasticAxis::Column) throw ValidationError("RWR needs a column-stochastic transition matrix");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("RWR restart parameter alpha must lie in [0, 1)");
  check_dimension(p0, static_cast<std::size_t>(m.matrix.rows()));
  ProbabilityVector p = p0;
  for (std::size_t it = 0; it < iterations; ++it) p = alpha * (m.matrix * p) + (1.0 - alpha) * p0;
  return p;
}

TransitionMatrix dtrw_transition(const LabeledGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.num_edges() + n);
  for (NodeId j = 0; j < n; ++j) {
    const double strength = g.out_strength(j);
    if (strength > 0.0) {
      for (const Neighbor& nb : g.out_neighbors(j)) triplets.emplace_back(j, nb.node, nb.weight / strength);
    } else {
      triplets.emplace_back(j, j, 1.0);
    }
  }
  TransitionMatrix p;
  p.axis = StochasticAxis::Row;
  p.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  p.matrix.setFromTriplets(triplets.begin(), triplets.end());
  p.matrix.makeCompressed();
  return p;
}

ProbabilityVector dtrw_evolve(const TransitionMatrix& p, const ProbabilityVector& p0, std::size_t steps) {
  if (p.axis != StochasticAxis::Row) throw ValidationError("DTRW needs a row-stochastic transition matrix");
  check_dimension(p0, static_cast<std::size_t>(p.matrix.rows()));
  validate_probability_vector(p0);
  Eigen::SparseMatrix<double> forward = p.matrix.transpose();
  ProbabilityVector state = p0;
  for (std::size_t s = 0; s < steps; ++s) state = forward * state;
  return state;
}

ProbabilityVector dtrw_evolve(const LabeledGraph& g, const ProbabilityVector& p0, std::size_t steps) {
  return dtrw_evolve(dtrw_transition(g), p0, steps);
}

ProbabilityVector dtrw_transition_profile(const LabeledGraph& g, NodeId source, std::size_t steps) {
  if (source >= g.num_nodes()) throw ValidationError("DTRW source node out of range");
  ProbabilityVector delta = ProbabilityVector::Zero(static_cast<Eigen::Index>(g.num_nodes()));
  delta[source] = 1.0;
  return dtrw_evolve(g, delta, steps);
}

ProbabilityVector ctrw_evolve(const LabeledGraph& g, const ProbabilityVector& p0, double t,
                              const ExpmOptions& options) {
  check_dimension(p0, g.num_nodes());
  return real_expm_action(laplacian(g), p0, t, options);
}

}  // namespace qwalk
