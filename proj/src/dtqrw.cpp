#include "qwalk/dtqrw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::dtqrw {

namespace {

void check_size(const ArcIndex& arcs, const ArcState& psi) {
  if (static_cast<std::size_t>(psi.size()) != arcs.num_arcs())
    throw ValidationError("arc state has " + std::to_string(psi.size()) + " amplitudes, basis has " +
                          std::to_string(arcs.num_arcs()) + " arcs");
}

// Applies the coin (or its adjoint) in place, node by node.
void apply_coin(const ArcIndex& arcs, ArcState& psi, const CoinSpec& coin, bool adjoint) {
  for (NodeId v = 0; v < arcs.num_nodes(); ++v) {
    const std::size_t d = arcs.degree(v);
    if (d == 0) continue;
    auto seg = psi.segment(static_cast<Eigen::Index>(arcs.first_arc(v)), static_cast<Eigen::Index>(d));
    if (coin.is_grover()) {
      // Real symmetric and an involution: its own adjoint.
      const cplx mean2 = 2.0 * seg.sum() / static_cast<double>(d);
      for (Eigen::Index i = 0; i < seg.size(); ++i) seg[i] = mean2 - seg[i];
    } else {
      const Eigen::MatrixXcd& block = coin.block(d);
      Eigen::VectorXcd mixed = adjoint ? Eigen::VectorXcd(block.adjoint() * seg) : Eigen::VectorXcd(block * seg);
      seg = mixed;
    }
  }
}

ArcState shift(const ArcIndex& arcs, const ArcState& psi) {
  ArcState out(psi.size());
  for (std::size_t a = 0; a < arcs.num_arcs(); ++a) out[static_cast<Eigen::Index>(arcs.reverse(a))] = psi[a];
  return out;
}

}  // namespace

std::optional<std::size_t> ArcIndex::find(NodeId tail, NodeId head) const {
  if (tail >= num_nodes()) return std::nullopt;
  auto begin = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail]);
  auto end = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail + 1]);
  auto it = std::lower_bound(begin, end, head);
  if (it == end || *it != head) return std::nullopt;
  return static_cast<std::size_t>(it - heads_.begin());
}

ArcIndex arc_basis(const LabeledGraph& g) {
  if (g.directed())
    throw ValidationError("the coined quantum walk needs an undirected graph; symmetrize the graph first");
  ArcIndex idx;
  const std::size_t n = g.num_nodes();
  idx.offsets_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    idx.offsets_[v + 1] = idx.offsets_[v] + g.out_degree(v);
    for (const Neighbor& nb : g.out_neighbors(v)) {
      idx.tails_.push_back(v);
      idx.heads_.push_back(nb.node);
    }
  }
  idx.reverse_.resize(idx.heads_.size());
  for (std::size_t a = 0; a < idx.heads_.size(); ++a) {
    auto r = idx.find(idx.heads_[a], idx.tails_[a]);
    if (!r) throw ValidationError("arc basis: missing reverse arc");
    idx.reverse_[a] = *r;
  }
  return idx;
}

Eigen::MatrixXd grover_coin(std::size_t d) {
  if (d == 0) throw ValidationError("Grover coin needs degree >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  return Eigen::MatrixXd::Constant(n, n, 2.0 / static_cast<double>(d)) - Eigen::MatrixXd::Identity(n, n);
}

CoinSpec CoinSpec::custom(std::map<std::size_t, Eigen::MatrixXcd> blocks) {
  for (const auto& [d, block] : blocks) {
    const auto n = static_cast<Eigen::Index>(d);
    if (d == 0 || block.rows() != n || block.cols() != n)
      throw ValidationError("coin block for degree " + std::to_string(d) + " must be " + std::to_string(d) + "x" +
                            std::to_string(d));
    const double err = (block.adjoint() * block - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > 1e-12) throw ValidationError("coin block for degree " + std::to_string(d) + " is not unitary");
  }
  CoinSpec spec;
  spec.blocks_ = std::move(blocks);
  return spec;
}

const Eigen::MatrixXcd& CoinSpec::block(std::size_t d) const {
  auto it = blocks_.find(d);
  if (it == blocks_.end()) throw ValidationError("custom coin has no block for degree " + std::to_string(d));
  return it->second;
}

ArcState step(const ArcIndex& arcs, const ArcState& psi, const CoinSpec& coin) {
  check_size(arcs, psi);
  ArcState mixed = psi;
  apply_coin(arcs, mixed, coin, false);
  return shift(arcs, mixed);
}

ArcState inverse_step(const ArcIndex& arcs, const ArcState& psi, const CoinSpec& coin) {
  check_size(arcs, psi);
  ArcState out = shift(arcs, psi);
  apply_coin(arcs, out, coin, true);
  return out;
}

ArcState evolve(const ArcIndex& arcs, const ArcState& psi0, std::size_t n_steps, const CoinSpec& coin) {
  check_size(arcs, psi0);
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ValidationError("arc state must have unit norm");
  ArcState psi = psi0;
  for (std::size_t s = 0; s < n_steps; ++s) psi = step(arcs, psi, coin);
  return psi;
}

ProbabilityVector node_probabilities(const ArcIndex& arcs, const ArcState& psi) {
  check_size(arcs, psi);
  ProbabilityVector p = ProbabilityVector::Zero(static_cast<Eigen::Index>(arcs.num_nodes()));
  for (std::size_t a = 0; a < arcs.num_arcs(); ++a) p[arcs.tail(a)] += std::norm(psi[static_cast<Eigen::Index>(a)]);
  return p;
}

ArcState uniform_source_state(const ArcIndex& arcs, std::span<const NodeId> sources) {
  ArcState psi = ArcState::Zero(static_cast<Eigen::Index>(arcs.num_arcs()));
  for (NodeId s : sources) {
    if (s >= arcs.num_nodes()) throw ValidationError("source node out of range");
    for (std::size_t a = arcs.first_arc(s); a < arcs.first_arc(s) + arcs.degree(s); ++a)
      psi[static_cast<Eigen::Index>(a)] = 1.0;
  }
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("source nodes have no outgoing arcs");
  return psi / norm;
}

ArcState state_from_scores(const ArcIndex& arcs, const Eigen::VectorXd& scores) {
  if (static_cast<std::size_t>(scores.size()) != arcs.num_nodes())
    throw ValidationError("score vector does not match the arc basis");
  if (!scores.allFinite() || (scores.size() > 0 && scores.minCoeff() < 0.0))
    throw ValidationError("scores must be finite and nonnegative");
  ArcState psi = ArcState::Zero(static_cast<Eigen::Index>(arcs.num_arcs()));
  for (NodeId v = 0; v < arcs.num_nodes(); ++v) {
    const std::size_t d = arcs.degree(v);
    if (d == 0 || scores[v] == 0.0) continue;
    const double amp = scores[v] / std::sqrt(static_cast<double>(d));
    for (std::size_t a = arcs.first_arc(v); a < arcs.first_arc(v) + d; ++a) psi[static_cast<Eigen::Index>(a)] = amp;
  }
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("no scored node has an outgoing arc");
  return psi / norm;
}

ProbabilityVector transition_profile(const ArcIndex& arcs, NodeId source, std::size_t n_steps, const CoinSpec& coin) {
  if (source >= arcs.num_nodes()) throw ValidationError("source node out of range");
  if (arcs.degree(source) == 0) throw ValidationError("transition profile source is isolated");
  const NodeId sources[] = {source};
  return node_probabilities(arcs, evolve(arcs, uniform_source_state(arcs, sources), n_steps, coin));
}

}  // namespace qwalk::dtqrw
