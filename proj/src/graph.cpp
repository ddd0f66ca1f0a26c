#include "qwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qwalk/errors.hpp"
#include "text_util.hpp"

namespace qwalk {

LabeledGraph LabeledGraph::build(std::vector<std::string> labels, std::vector<Edge> edges, bool directed,
                                 DuplicatePolicy policy, bool weighted) {
  LabeledGraph g;
  g.directed_ = directed;
  g.weighted_ = weighted;
  g.index_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw ValidationError("empty node label at index " + std::to_string(i));
    if (!g.index_.emplace(labels[i], static_cast<NodeId>(i)).second)
      throw ValidationError("duplicate node label '" + labels[i] + "'");
  }
  g.labels_ = std::move(labels);
  const std::size_t n = g.labels_.size();

  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (Edge e : edges) {
    if (e.source >= n || e.target >= n)
      throw ValidationError("edge endpoint out of range (" + std::to_string(e.source) + ", " +
                            std::to_string(e.target) + ") for " + std::to_string(n) + " nodes");
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw ValidationError("edge weight must be finite and nonnegative");
    if (e.source == e.target) {
      ++g.stats_.self_loops_dropped;
      continue;
    }
    if (!directed && e.source > e.target) std::swap(e.source, e.target);
    kept.push_back(e);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (const Edge& e : kept) {
    if (!g.edges_.empty() && g.edges_.back().source == e.source && g.edges_.back().target == e.target) {
      ++g.stats_.duplicates_merged;
      if (policy == DuplicatePolicy::SumWeights) g.edges_.back().weight += e.weight;
      continue;
    }
    g.edges_.push_back(e);
  }

  std::vector<std::size_t> counts(n, 0);
  for (const Edge& e : g.edges_) {
    ++counts[e.source];
    if (!directed) ++counts[e.target];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + counts[v];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[cursor[e.source]++] = {e.target, e.weight};
    if (!directed) g.adjacency_[cursor[e.target]++] = {e.source, e.weight};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return g;
}

std::optional<NodeId> LabeledGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double LabeledGraph::out_strength(NodeId v) const {
  double s = 0.0;
  for (const Neighbor& nb : out_neighbors(v)) s += nb.weight;
  return s;
}

bool LabeledGraph::has_edge(NodeId source, NodeId target) const {
  auto nbrs = out_neighbors(source);
  return std::binary_search(nbrs.begin(), nbrs.end(), Neighbor{target, 0.0},
                            [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

LabeledGraph load_edge_list(std::string_view text, bool directed) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  bool weighted = false;

  auto intern = [&](std::string label) {
    auto [it, inserted] = index.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(std::move(label));
    return it->second;
  };

  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ValidationError("edge list line " + std::to_string(line_no) + ": expected 2 or 3 tab-separated fields, got " +
                            std::to_string(fields.size()));
    std::string u = detail::trim(fields[0]);
    std::string v = detail::trim(fields[1]);
    if (u.empty() || v.empty())
      throw ValidationError("edge list line " + std::to_string(line_no) + ": empty node label");
    double w = 1.0;
    if (fields.size() == 3) {
      auto parsed = detail::parse_double(detail::trim(fields[2]));
      if (!parsed || !std::isfinite(*parsed) || *parsed < 0.0)
        throw ValidationError("edge list line " + std::to_string(line_no) + ": weight must be a finite nonnegative real");
      w = *parsed;
      weighted = true;
    }
    NodeId a = intern(std::move(u));
    NodeId b = intern(std::move(v));
    edges.push_back({a, b, w});
  });

  if (edges.empty()) throw ValidationError("edge list is empty");
  return LabeledGraph::build(std::move(labels), std::move(edges), directed,
                             weighted ? DuplicatePolicy::SumWeights : DuplicatePolicy::KeepFirst, weighted);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LabeledGraph read_edge_list_file(const std::filesystem::path& path, bool directed) {
  return load_edge_list(read_text_file(path), directed);
}

Eigen::SparseMatrix<double> adjacency_matrix(const LabeledGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.num_edges() * (g.directed() ? 1 : 2));
  for (const Edge& e : g.edges()) {
    triplets.emplace_back(e.source, e.target, e.weight);
    if (!g.directed()) triplets.emplace_back(e.target, e.source, e.weight);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::VectorXd degree_vector(const LabeledGraph& g) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v) d[v] = g.out_strength(v);
  return d;
}

Eigen::SparseMatrix<double> laplacian(const LabeledGraph& g) {
  if (g.directed()) throw ValidationError("laplacian requires an undirected graph; symmetrize the graph first");
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.num_edges() + g.num_nodes());
  for (const Edge& e : g.edges()) {
    triplets.emplace_back(e.source, e.target, -e.weight);
    triplets.emplace_back(e.target, e.source, -e.weight);
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double d = g.out_strength(v);
    if (d != 0.0) triplets.emplace_back(v, v, d);
  }
  Eigen::SparseMatrix<double> l(n, n);
  l.setFromTriplets(triplets.begin(), triplets.end());
  return l;
}

ComponentDecomposition connected_components(const LabeledGraph& g) {
  const std::size_t n = g.num_nodes();
  // Union-find over arcs gives weak connectivity for directed graphs too.
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& e : g.edges()) {
    NodeId a = find(e.source), b = find(e.target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  struct Group {
    std::size_t size = 0;
    NodeId smallest_label = 0;
  };
  std::unordered_map<NodeId, Group> groups;
  for (NodeId v = 0; v < n; ++v) {
    auto [it, inserted] = groups.try_emplace(find(v), Group{0, v});
    Group& grp = it->second;
    ++grp.size;
    if (g.label(v) < g.label(grp.smallest_label)) grp.smallest_label = v;
  }
  std::vector<std::pair<NodeId, Group>> ordered(groups.begin(), groups.end());
  std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
    if (a.second.size != b.second.size) return a.second.size > b.second.size;
    return g.label(a.second.smallest_label) < g.label(b.second.smallest_label);
  });

  std::unordered_map<NodeId, std::uint32_t> root_to_id;
  ComponentDecomposition out;
  out.sizes.reserve(ordered.size());
  for (std::uint32_t i = 0; i < ordered.size(); ++i) {
    root_to_id[ordered[i].first] = i;
    out.sizes.push_back(ordered[i].second.size);
  }
  out.component.resize(n);
  for (NodeId v = 0; v < n; ++v) out.component[v] = root_to_id[find(v)];
  return out;
}

LabeledGraph induced_subgraph(const LabeledGraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  constexpr NodeId absent = ~NodeId{0};
  std::vector<NodeId> remap(g.num_nodes(), absent);
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (NodeId v : keep) {
    if (v >= g.num_nodes()) throw ValidationError("induced_subgraph: node index out of range");
    remap[v] = static_cast<NodeId>(labels.size());
    labels.push_back(g.label(v));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (remap[e.source] != absent && remap[e.target] != absent)
      edges.push_back({remap[e.source], remap[e.target], e.weight});
  }
  return LabeledGraph::build(std::move(labels), std::move(edges), g.directed(), DuplicatePolicy::KeepFirst,
                             g.weighted());
}

LabeledGraph greatest_component(const LabeledGraph& g) {
  if (g.num_nodes() == 0) return g;
  auto comps = connected_components(g);
  std::vector<NodeId> members;
  members.reserve(comps.sizes.front());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (comps.component[v] == 0) members.push_back(v);
  return induced_subgraph(g, members);
}

LabeledGraph symmetrize(const LabeledGraph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  return LabeledGraph::build(g.labels(), std::move(edges), false, DuplicatePolicy::KeepFirst, g.weighted());
}

GraphStats graph_stats(const LabeledGraph& g) {
  GraphStats s;
  s.nodes = g.num_nodes();
  s.edges = g.num_edges();
  if (s.nodes == 0) return s;
  auto comps = connected_components(g);
  s.fragments = comps.count();
  s.gc_nodes = comps.sizes.front();
  for (const Edge& e : g.edges())
    if (comps.component[e.source] == 0) ++s.gc_edges;
  return s;
}

}  // namespace qwalk
