#include "qwalk/ctqrw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::ctqrw {

namespace {

using UndirectedKey = std::pair<NodeId, NodeId>;

UndirectedKey undirected_key(NodeId a, NodeId b) { return a < b ? UndirectedKey{a, b} : UndirectedKey{b, a}; }

// Unordered edge pairs with their weights; reciprocal arcs of a directed
// graph share one pair (first arc wins).
std::map<UndirectedKey, double> undirected_pairs(const LabeledGraph& g) {
  std::map<UndirectedKey, double> pairs;
  for (const Edge& e : g.edges()) pairs.emplace(undirected_key(e.source, e.target), e.weight);
  return pairs;
}

void check_node(const UnitaryPropagator& prop, NodeId v) {
  if (static_cast<Eigen::Index>(v) >= prop.hamiltonian().dim())
    throw ValidationError("node index " + std::to_string(v) + " out of range");
}

AmplitudeVector basis_state(Eigen::Index n, NodeId j) {
  AmplitudeVector e = AmplitudeVector::Zero(n);
  e[j] = 1.0;
  return e;
}

}  // namespace

ChiralPhases uniform_chiral_phases(const LabeledGraph& g, double phi) {
  ChiralPhases phases;
  std::set<UndirectedKey> seen;
  for (const Edge& e : g.edges())
    if (seen.insert(undirected_key(e.source, e.target)).second) phases[{e.source, e.target}] = phi;
  return phases;
}

ChiralPhases random_chiral_phases(const LabeledGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ChiralPhases phases;
  std::set<UndirectedKey> seen;
  for (const Edge& e : g.edges()) {
    if (!seen.insert(undirected_key(e.source, e.target)).second) continue;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    phases[{e.source, e.target}] = 2.0 * std::numbers::pi * u;
  }
  return phases;
}

SparseHermitian build_hamiltonian(const LabeledGraph& g, const HamiltonianSpec& spec) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (spec.kind != HamiltonianKind::Chiral) {
    if (g.directed())
      throw ValidationError(
          "adjacency/Laplacian Hamiltonians need an undirected graph; symmetrize it or use a chiral Hamiltonian");
    if (!spec.phases.empty()) throw ValidationError("phases are only meaningful for the chiral Hamiltonian");
    return SparseHermitian::from_real(spec.kind == HamiltonianKind::Adjacency ? adjacency_matrix(g) : laplacian(g));
  }

  auto pairs = undirected_pairs(g);
  std::map<UndirectedKey, cplx> entries;  // value stored for H_{first,second}
  for (const auto& [arc, phi] : spec.phases) {
    const auto [a, b] = arc;
    if (!std::isfinite(phi)) throw ValidationError("chiral phase must be finite");
    auto key = undirected_key(a, b);
    auto it = pairs.find(key);
    if (a == b || it == pairs.end())
      throw ValidationError("chiral phase given for non-edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    const cplx value = std::polar(it->second, a < b ? phi : -phi);
    if (!entries.emplace(key, value).second)
      throw ValidationError("chiral phase given for both orientations of edge (" + std::to_string(key.first) + ", " +
                            std::to_string(key.second) + ")");
  }
  if (entries.size() != pairs.size())
    throw ValidationError("chiral Hamiltonian needs a phase on every edge (" + std::to_string(entries.size()) + " of " +
                          std::to_string(pairs.size()) + " given)");

  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(2 * entries.size());
  for (const auto& [key, value] : entries) {
    triplets.emplace_back(key.first, key.second, value);
    triplets.emplace_back(key.second, key.first, std::conj(value));
  }
  Eigen::SparseMatrix<cplx> h(n, n);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return SparseHermitian(std::move(h));
}

CollapseSchedule::CollapseSchedule(std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || times_[i] <= 0.0) throw ValidationError("collapse times must be finite and > 0");
    if (i > 0 && times_[i] <= times_[i - 1]) throw ValidationError("collapse times must be strictly increasing");
  }
}

AmplitudeVector initial_state_from_scores(const Eigen::VectorXd& scores) {
  if (!scores.allFinite()) throw ValidationError("scores must be finite");
  if (scores.size() == 0 || scores.minCoeff() < 0.0) throw ValidationError("scores must be nonnegative");
  const double norm = scores.norm();
  if (!(norm > 0.0)) throw ValidationError("scores must contain at least one positive entry");
  return (scores / norm).cast<cplx>();
}

AmplitudeVector evolve(const UnitaryPropagator& propagator, const AmplitudeVector& psi0, double t) {
  const double norm0 = psi0.norm();
  AmplitudeVector psi = propagator.apply(psi0, t);
  const double drift = std::abs(psi.norm() - norm0) / norm0;
  if (drift > 1e-8) throw NumericalError("norm drift " + std::to_string(drift) + " exceeds 1e-8");
  if (drift > 1e-12) psi *= norm0 / psi.norm();
  return psi;
}

AmplitudeVector evolve(const SparseHermitian& h, const AmplitudeVector& psi0, double t, const ExpmOptions& options) {
  if (t == 0.0) return expm_action(h, psi0, 0.0, options);
  return evolve(UnitaryPropagator(h, options), psi0, t);
}

double transition_probability(const UnitaryPropagator& propagator, NodeId j, NodeId k, double t) {
  check_node(propagator, j);
  check_node(propagator, k);
  AmplitudeVector psi = evolve(propagator, basis_state(propagator.hamiltonian().dim(), j), t);
  return std::clamp(std::norm(psi[k]), 0.0, 1.0);
}

double transition_probability(const SparseHermitian& h, NodeId j, NodeId k, double t, const ExpmOptions& options) {
  return transition_probability(UnitaryPropagator(h, options), j, k, t);
}

double transition_rate(const UnitaryPropagator& propagator, NodeId j, NodeId k, double t) {
  check_node(propagator, j);
  check_node(propagator, k);
  AmplitudeVector psi = evolve(propagator, basis_state(propagator.hamiltonian().dim(), j), t);
  const cplx a = psi[k];
  const AmplitudeVector h_psi = propagator.hamiltonian().matrix() * psi;
  const cplx b = h_psi[k];
  return 2.0 * std::imag(std::conj(a) * b);
}

double transition_rate(const SparseHermitian& h, NodeId j, NodeId k, double t, const ExpmOptions& options) {
  return transition_rate(UnitaryPropagator(h, options), j, k, t);
}

AmplitudeVector collapse(const AmplitudeVector& psi, CollapseNorm norm) {
  Eigen::VectorXd squared = psi.cwiseAbs2();
  const double denom = norm == CollapseNorm::L2 ? squared.norm() : squared.sum();
  if (!(denom > 0.0)) throw ValidationError("cannot collapse the zero state");
  return (squared / denom).cast<cplx>();
}

AmplitudeVector evolve_with_collapses(const UnitaryPropagator& propagator, const AmplitudeVector& psi0, double t_final,
                                      const CollapseSchedule& schedule, CollapseNorm norm) {
  if (!std::isfinite(t_final) || t_final < 0.0) throw ValidationError("final time must be finite and nonnegative");
  if (!schedule.empty() && schedule.times().back() >= t_final)
    throw ValidationError("collapse times must all precede the final time");
  AmplitudeVector psi = psi0;
  double now = 0.0;
  for (double theta : schedule.times()) {
    psi = collapse(evolve(propagator, psi, theta - now), norm);
    now = theta;
  }
  return evolve(propagator, psi, t_final - now);
}

AmplitudeVector evolve_with_collapses(const SparseHermitian& h, const AmplitudeVector& psi0, double t_final,
                                      const CollapseSchedule& schedule, CollapseNorm norm,
                                      const ExpmOptions& options) {
  return evolve_with_collapses(UnitaryPropagator(h, options), psi0, t_final, schedule, norm);
}

ProbabilityVector measure(const AmplitudeVector& psi) {
  ProbabilityVector p = psi.cwiseAbs2();
  const double total = p.sum();
  if (!(total > 0.0)) throw ValidationError("cannot measure the zero state");
  return p / total;
}

RankedList rank_by_probability(const LabeledGraph& g, const ProbabilityVector& p, std::span<const NodeId> exclude) {
  if (static_cast<std::size_t>(p.size()) != g.num_nodes())
    throw ValidationError("probability vector does not match the graph");
  std::vector<bool> skip(g.num_nodes(), false);
  for (NodeId v : exclude)
    if (v < skip.size()) skip[v] = true;
  std::vector<NodeId> order;
  order.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (!skip[v]) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return p[a] > p[b]; });
  RankedList out;
  out.nodes = order;
  out.labels.reserve(order.size());
  out.scores.reserve(order.size());
  for (NodeId v : order) {
    out.labels.push_back(g.label(v));
    out.scores.push_back(p[v]);
  }
  return out;
}

}  // namespace qwalk::ctqrw
