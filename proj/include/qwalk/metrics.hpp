#pragma once

// Ranking metrics (P@K, AP@K), l2 distances between transition profiles and
// the walk-induced subgraph of a cell-cell interaction graph.

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/cci.hpp"
#include "qwalk/expm.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

/// Predictions, best first. `nodes` is optional bookkeeping (may be empty).
struct RankedList {
  std::vector<std::string> labels;
  std::vector<double> scores;
  std::vector<NodeId> nodes;

  std::size_t size() const { return labels.size(); }
  /// Throws ValidationError on duplicate labels, size mismatch or
  /// increasing scores.
  void validate() const;
};

class RelevanceSet {
 public:
  RelevanceSet() = default;
  explicit RelevanceSet(std::vector<std::string> labels);

  bool contains(const std::string& label) const { return labels_.count(label) > 0; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

 private:
  std::unordered_set<std::string> labels_;
};

/// Relevant items among the first K, divided by K even when fewer than K
/// items are ranked. Throws ValidationError for K = 0.
double precision_at_k(const RankedList& ranked, const RelevanceSet& relevant, std::size_t k);

/// (1 / min(K, M)) * sum_{N <= K} P@N * rel(N), summing over existing ranks
/// only. Throws ValidationError for K = 0 or an empty relevance set.
double average_precision_at_k(const RankedList& ranked, const RelevanceSet& relevant, std::size_t k);

/// Symmetric, zero diagonal.
using DistanceMatrix = Eigen::MatrixXd;

/// D_jk = ||profile_j - profile_k||_2. Throws ValidationError if the
/// profiles differ in length.
DistanceMatrix pairwise_distance_matrix(std::span<const ProbabilityVector> profiles);

/// Union of three-hop paths s -> l -> r -> t of `g` with t in `targets`
/// (and s in `sources`, when given) whose three arcs u -> v all satisfy
/// profiles[u][v] >= epsilon. The result is directed and keeps only the
/// nodes touched by a surviving path, with their original labels.
LabeledGraph walk_support_subgraph(const PartitionedCciGraph& g, std::span<const ProbabilityVector> profiles,
                                   std::span<const NodeId> targets, double epsilon,
                                   std::span<const NodeId> sources = {});

}  // namespace qwalk
