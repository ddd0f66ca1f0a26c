#include "qwalk/cci.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "qwalk/errors.hpp"
#include "text_util.hpp"

namespace qwalk {

std::string_view to_string(CciLayer layer) {
  switch (layer) {
    case CciLayer::SenderCell: return "sender";
    case CciLayer::Ligand: return "ligand";
    case CciLayer::Receptor: return "receptor";
    case CciLayer::ReceiverCell: return "receiver";
  }
  return "unknown";
}

std::optional<CciLayer> parse_cci_layer(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "sender") return CciLayer::SenderCell;
  if (lower == "ligand") return CciLayer::Ligand;
  if (lower == "receptor") return CciLayer::Receptor;
  if (lower == "receiver") return CciLayer::ReceiverCell;
  return std::nullopt;
}

std::array<std::size_t, 4> PartitionedCciGraph::layer_counts() const {
  std::array<std::size_t, 4> counts{};
  for (CciLayer l : layers_) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

PartitionedCciGraph build_cci_graph(const std::vector<std::pair<std::string, CciLayer>>& nodes,
                                    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> labels;
  std::vector<CciLayer> layers;
  std::unordered_map<std::string, NodeId> index;
  for (const auto& [label, layer] : nodes) {
    if (!index.emplace(label, static_cast<NodeId>(labels.size())).second)
      throw ValidationError("CCI node '" + label + "' is assigned to more than one layer");
    labels.push_back(label);
    layers.push_back(layer);
  }

  std::vector<Edge> arcs;
  arcs.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    auto iu = index.find(u);
    auto iv = index.find(v);
    if (iu == index.end() || iv == index.end())
      throw ValidationError("CCI edge " + u + " -> " + v + " references an unknown node");
    CciLayer lu = layers[iu->second];
    CciLayer lv = layers[iv->second];
    if (static_cast<int>(lv) != static_cast<int>(lu) + 1) {
      std::string why = lu == lv                                          ? "intra-layer edge"
                        : static_cast<int>(lv) < static_cast<int>(lu) ? "reverse-direction edge"
                                                                          : "layer-skipping edge";
      throw ValidationError("invalid CCI edge " + u + " (" + std::string(to_string(lu)) + ") -> " + v + " (" +
                            std::string(to_string(lv)) + "): " + why);
    }
    arcs.push_back({iu->second, iv->second, 1.0});
  }

  PartitionedCciGraph out;
  out.graph_ = LabeledGraph::build(std::move(labels), std::move(arcs), true, DuplicatePolicy::KeepFirst);
  out.layers_ = std::move(layers);
  return out;
}

std::vector<std::pair<std::string, CciLayer>> parse_cci_nodes(std::string_view text) {
  std::vector<std::pair<std::string, CciLayer>> out;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_tabs(line);
    if (fields.size() != 2)
      throw ValidationError("CCI node line " + std::to_string(line_no) + ": expected 'label<TAB>layer'");
    std::string label = detail::trim(fields[0]);
    auto layer = parse_cci_layer(detail::trim(fields[1]));
    if (label.empty()) throw ValidationError("CCI node line " + std::to_string(line_no) + ": empty label");
    if (!layer)
      throw ValidationError("CCI node line " + std::to_string(line_no) + ": unknown layer '" + detail::trim(fields[1]) +
                            "' (expected sender, ligand, receptor or receiver)");
    out.emplace_back(std::move(label), *layer);
  });
  if (out.empty()) throw ValidationError("CCI node table is empty");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_cci_edges(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ValidationError("CCI edge line " + std::to_string(line_no) + ": expected 2 or 3 tab-separated fields");
    std::string u = detail::trim(fields[0]);
    std::string v = detail::trim(fields[1]);
    if (u.empty() || v.empty()) throw ValidationError("CCI edge line " + std::to_string(line_no) + ": empty label");
    out.emplace_back(std::move(u), std::move(v));
  });
  return out;
}

LabeledGraph symmetrized_view(const PartitionedCciGraph& g) { return symmetrize(g.graph()); }

}  // namespace qwalk
