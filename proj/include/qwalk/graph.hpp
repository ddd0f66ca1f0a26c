#pragma once

// Node-labelled graphs and their matrix views.
//
// A LabeledGraph is immutable once built. Undirected graphs store every edge
// once with source < target; the neighbour lists contain both orientations.
// Self-loops are dropped at construction and counted in ingest_stats().

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace qwalk {

using NodeId = std::uint32_t;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 1.0;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 1.0;
};

enum class DuplicatePolicy {
  SumWeights,  // repeated (j,k) pairs add their weights
  KeepFirst,   // repeated pairs are ignored after the first
};

struct IngestStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Validates and canonicalises an edge set over `labels`.
  /// Throws ValidationError on duplicate/empty labels, out-of-range endpoints
  /// or negative/non-finite weights. `weighted` marks the graph as carrying
  /// meaningful edge weights (an unweighted graph has every weight == 1).
  static LabeledGraph build(std::vector<std::string> labels, std::vector<Edge> edges, bool directed,
                            DuplicatePolicy policy = DuplicatePolicy::SumWeights, bool weighted = false);

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool directed() const { return directed_; }
  bool weighted() const { return weighted_; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId v) const { return labels_.at(v); }
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const Edge> edges() const { return edges_; }

  /// Outgoing neighbours sorted by node id. For undirected graphs this is
  /// the full neighbourhood.
  std::span<const Neighbor> out_neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  /// Weighted out-degree (row sum of A).
  double out_strength(NodeId v) const;

  bool has_edge(NodeId source, NodeId target) const;

  const IngestStats& ingest_stats() const { return stats_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  bool directed_ = false;
  bool weighted_ = false;
  IngestStats stats_;
};

/// Parses tab-separated "u<TAB>v[<TAB>w]" rows. Lines starting with '#' and
/// blank lines are skipped; labels are whitespace-trimmed and get indices in
/// order of first appearance. Duplicate rows have their weights summed when
/// the file carries a weight column, otherwise they collapse to weight 1.
LabeledGraph load_edge_list(std::string_view text, bool directed);
LabeledGraph read_edge_list_file(const std::filesystem::path& path, bool directed);

/// A_jk = w_jk for (j,k) in E. Symmetric for undirected graphs.
Eigen::SparseMatrix<double> adjacency_matrix(const LabeledGraph& g);

/// D_ii = sum_k A_ik.
Eigen::VectorXd degree_vector(const LabeledGraph& g);

/// L = D - A. Throws ValidationError for directed graphs.
Eigen::SparseMatrix<double> laplacian(const LabeledGraph& g);

struct ComponentDecomposition {
  /// Component id per node. Id 0 is the greatest component; ids are ordered
  /// by size (descending), ties broken by the smallest member label.
  std::vector<std::uint32_t> component;
  std::vector<std::size_t> sizes;

  std::size_t count() const { return sizes.size(); }
};

/// Weakly connected components.
ComponentDecomposition connected_components(const LabeledGraph& g);

/// Subgraph on `nodes` (any order, duplicates ignored). Node order follows
/// the original indices, labels are preserved.
LabeledGraph induced_subgraph(const LabeledGraph& g, std::span<const NodeId> nodes);

LabeledGraph greatest_component(const LabeledGraph& g);

/// Undirected graph on the same nodes; each arc becomes an undirected edge.
LabeledGraph symmetrize(const LabeledGraph& g);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t fragments = 0;
  std::size_t gc_nodes = 0;
  std::size_t gc_edges = 0;
};

GraphStats graph_stats(const LabeledGraph& g);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace qwalk
