#pragma once

// Four-partite cell-cell interaction graphs:
//   sender cell -> ligand -> receptor -> receiver cell.
// Every arc must go from one layer to the next; a valid communication is a
// three-hop path through all four layers.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/graph.hpp"

namespace qwalk {

enum class CciLayer : std::uint8_t { SenderCell = 0, Ligand = 1, Receptor = 2, ReceiverCell = 3 };

std::string_view to_string(CciLayer layer);
/// Accepts "sender", "ligand", "receptor", "receiver" (case-insensitive).
std::optional<CciLayer> parse_cci_layer(std::string_view name);

class PartitionedCciGraph {
 public:
  const LabeledGraph& graph() const { return graph_; }
  CciLayer layer(NodeId v) const { return layers_.at(v); }
  const std::vector<CciLayer>& layers() const { return layers_; }
  /// Node counts per layer, indexed by CciLayer.
  std::array<std::size_t, 4> layer_counts() const;

 private:
  friend PartitionedCciGraph build_cci_graph(const std::vector<std::pair<std::string, CciLayer>>&,
                                             const std::vector<std::pair<std::string, std::string>>&);
  LabeledGraph graph_;
  std::vector<CciLayer> layers_;
};

/// Throws ValidationError naming the offending edge for intra-layer,
/// layer-skipping or reverse arcs, and for unknown endpoints. Repeated arcs
/// collapse to one.
PartitionedCciGraph build_cci_graph(const std::vector<std::pair<std::string, CciLayer>>& nodes,
                                    const std::vector<std::pair<std::string, std::string>>& edges);

/// "label<TAB>layer" rows.
std::vector<std::pair<std::string, CciLayer>> parse_cci_nodes(std::string_view text);
/// "u<TAB>v[<TAB>w]" rows; weights are ignored.
std::vector<std::pair<std::string, std::string>> parse_cci_edges(std::string_view text);

LabeledGraph symmetrized_view(const PartitionedCciGraph& g);

}  // namespace qwalk
