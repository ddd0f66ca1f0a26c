#pragma once

// Discrete-time coined quantum walk on arc space.
//
// The Hilbert space has one basis state |j->k> per orientation of every
// undirected edge: the walker sits on j and is about to hop to k. One step is
// U = S C: the coin C mixes the amplitudes of each node's outgoing arcs with a
// degree-dependent unitary, then the shift S maps |j->k> to |k->j>.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/expm.hpp"
#include "qwalk/graph.hpp"

namespace qwalk::dtqrw {

using ArcState = Eigen::VectorXcd;

/// Arcs sorted by (tail, head). Outgoing arcs of node j occupy the
/// contiguous range [first_arc(j), first_arc(j) + degree(j)).
class ArcIndex {
 public:
  ArcIndex() = default;

  std::size_t num_arcs() const { return heads_.size(); }
  std::size_t num_nodes() const { return offsets_.size() - 1; }
  NodeId tail(std::size_t arc) const { return tails_[arc]; }
  NodeId head(std::size_t arc) const { return heads_[arc]; }
  std::size_t reverse(std::size_t arc) const { return reverse_[arc]; }
  std::size_t first_arc(NodeId v) const { return offsets_[v]; }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::optional<std::size_t> find(NodeId tail, NodeId head) const;

 private:
  friend ArcIndex arc_basis(const LabeledGraph& g);
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> tails_;
  std::vector<NodeId> heads_;
  std::vector<std::size_t> reverse_;
};

/// Throws ValidationError for directed graphs (symmetrize first).
ArcIndex arc_basis(const LabeledGraph& g);

/// 2/d J - I. Throws ValidationError for d = 0.
Eigen::MatrixXd grover_coin(std::size_t d);

class CoinSpec {
 public:
  /// Grover diffusion coin on every node.
  static CoinSpec grover() { return CoinSpec(); }
  /// One unitary block per degree; throws ValidationError unless each block
  /// is square of its degree and unitary within 1e-12.
  static CoinSpec custom(std::map<std::size_t, Eigen::MatrixXcd> blocks);

  bool is_grover() const { return blocks_.empty(); }
  /// Block for degree d; throws ValidationError if a custom coin lacks it.
  const Eigen::MatrixXcd& block(std::size_t d) const;

 private:
  std::map<std::size_t, Eigen::MatrixXcd> blocks_;
};

/// psi <- S C psi. Throws ValidationError on a size mismatch.
ArcState step(const ArcIndex& arcs, const ArcState& psi, const CoinSpec& coin = CoinSpec::grover());
/// psi <- C^dagger S psi, the exact inverse of step().
ArcState inverse_step(const ArcIndex& arcs, const ArcState& psi, const CoinSpec& coin = CoinSpec::grover());
/// U^n psi0. Requires a unit-norm state (within 1e-10).
ArcState evolve(const ArcIndex& arcs, const ArcState& psi0, std::size_t n_steps,
                const CoinSpec& coin = CoinSpec::grover());

/// p_j = sum over outgoing arcs of j of |psi_{j,k}|^2.
ProbabilityVector node_probabilities(const ArcIndex& arcs, const ArcState& psi);

/// Uniform superposition over all outgoing arcs of `sources`. Throws
/// ValidationError if no source has an outgoing arc.
ArcState uniform_source_state(const ArcIndex& arcs, std::span<const NodeId> sources);

/// Node j's arcs each get amplitude S_j / sqrt(d_j), then the state is
/// normalised, so node j starts with probability proportional to S_j^2.
ArcState state_from_scores(const ArcIndex& arcs, const Eigen::VectorXd& scores);

/// node_probabilities(evolve(uniform_source_state({source}), n_steps)).
/// Throws ValidationError for an isolated source.
ProbabilityVector transition_profile(const ArcIndex& arcs, NodeId source, std::size_t n_steps,
                                     const CoinSpec& coin = CoinSpec::grover());

}  // namespace qwalk::dtqrw
