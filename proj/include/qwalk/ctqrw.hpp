#pragma once

// Continuous-time quantum random walk.
//
// The walker evolves under psi(t) = e^{-iHt} psi(0) with H built from the
// graph: the adjacency matrix, the Laplacian, or a chiral Hamiltonian that
// carries a unit-modulus phase e^{i phi_jk} on every edge. Scores seed the
// initial state as psi(0) = S / ||S||, and a collapse replaces the state by
// its normalised squared-amplitude profile at scheduled times.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/expm.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/metrics.hpp"

namespace qwalk::ctqrw {

enum class HamiltonianKind { Adjacency, Laplacian, Chiral };

/// Phase per oriented edge (j, k): H_jk = w_jk e^{i phi}, H_kj = conj(H_jk).
/// Exactly one orientation of every edge must be present.
using ChiralPhases = std::map<std::pair<NodeId, NodeId>, double>;

struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::Adjacency;
  ChiralPhases phases;

  static HamiltonianSpec adjacency() { return {HamiltonianKind::Adjacency, {}}; }
  static HamiltonianSpec laplacian() { return {HamiltonianKind::Laplacian, {}}; }
  static HamiltonianSpec chiral(ChiralPhases phases) { return {HamiltonianKind::Chiral, std::move(phases)}; }
};

/// The same phase on every edge, oriented along the stored edge direction
/// (source -> target).
ChiralPhases uniform_chiral_phases(const LabeledGraph& g, double phi);
/// Phases drawn uniformly from [0, 2pi) with a fixed-seed generator.
ChiralPhases random_chiral_phases(const LabeledGraph& g, std::uint64_t seed);

/// Adjacency and Laplacian variants need an undirected graph. The chiral
/// variant accepts directed graphs and orients phases along the arcs.
/// Throws ValidationError for phases on non-edges, missing phases or a
/// phase given for both orientations of one edge.
SparseHermitian build_hamiltonian(const LabeledGraph& g, const HamiltonianSpec& spec);

/// Strictly increasing collapse times, all > 0.
class CollapseSchedule {
 public:
  CollapseSchedule() = default;
  explicit CollapseSchedule(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  bool empty() const { return times_.empty(); }

 private:
  std::vector<double> times_;
};

enum class CollapseNorm {
  L2,  // |psi|^2 / || |psi|^2 ||_2, stays a unit vector
  L1,  // |psi|^2 / || |psi|^2 ||_1, sensitivity option
};

/// psi(0) = S / ||S||_2. Throws ValidationError for negative, non-finite or
/// all-zero scores.
AmplitudeVector initial_state_from_scores(const Eigen::VectorXd& scores);

/// e^{-iHt} psi0. Norm drift above 1e-12 is renormalised away; drift above
/// 1e-8 raises NumericalError.
AmplitudeVector evolve(const UnitaryPropagator& propagator, const AmplitudeVector& psi0, double t);
AmplitudeVector evolve(const SparseHermitian& h, const AmplitudeVector& psi0, double t,
                       const ExpmOptions& options = {});

/// p_{j->k}(t) = |<k| e^{-iHt} |j>|^2: start on j, measure on k.
double transition_probability(const UnitaryPropagator& propagator, NodeId j, NodeId k, double t);
double transition_probability(const SparseHermitian& h, NodeId j, NodeId k, double t,
                              const ExpmOptions& options = {});

/// d/dt p_{j->k}(t) = 2 Im( conj(a) (H psi)_k ), a = psi_k, psi = e^{-iHt}|j>.
double transition_rate(const UnitaryPropagator& propagator, NodeId j, NodeId k, double t);
double transition_rate(const SparseHermitian& h, NodeId j, NodeId k, double t, const ExpmOptions& options = {});

AmplitudeVector collapse(const AmplitudeVector& psi, CollapseNorm norm = CollapseNorm::L2);

/// Piecewise evolution with a collapse at every scheduled time. All times
/// must be < t_final.
AmplitudeVector evolve_with_collapses(const UnitaryPropagator& propagator, const AmplitudeVector& psi0, double t_final,
                                      const CollapseSchedule& schedule, CollapseNorm norm = CollapseNorm::L2);
AmplitudeVector evolve_with_collapses(const SparseHermitian& h, const AmplitudeVector& psi0, double t_final,
                                      const CollapseSchedule& schedule, CollapseNorm norm = CollapseNorm::L2,
                                      const ExpmOptions& options = {});

/// |psi_i|^2, normalised to unit sum.
ProbabilityVector measure(const AmplitudeVector& psi);

/// Descending by probability over nodes not in `exclude`; ties go to the
/// lower node index.
RankedList rank_by_probability(const LabeledGraph& g, const ProbabilityVector& p, std::span<const NodeId> exclude);

}  // namespace qwalk::ctqrw
