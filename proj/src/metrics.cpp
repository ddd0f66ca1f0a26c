#include "qwalk/metrics.hpp"

#include <algorithm>
#include <set>

#include "qwalk/errors.hpp"

namespace qwalk {

void RankedList::validate() const {
  if (scores.size() != labels.size()) throw ValidationError("ranked list: labels and scores differ in length");
  if (!nodes.empty() && nodes.size() != labels.size())
    throw ValidationError("ranked list: node ids and labels differ in length");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen.insert(labels[i]).second) throw ValidationError("ranked list: duplicate label '" + labels[i] + "'");
    if (i > 0 && scores[i] > scores[i - 1]) throw ValidationError("ranked list: scores must be non-increasing");
  }
}

RelevanceSet::RelevanceSet(std::vector<std::string> labels) : labels_(labels.begin(), labels.end()) {}

double precision_at_k(const RankedList& ranked, const RelevanceSet& relevant, std::size_t k) {
  if (k == 0) throw ValidationError("precision@K requires K >= 1");
  const std::size_t limit = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i)
    if (relevant.contains(ranked.labels[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision_at_k(const RankedList& ranked, const RelevanceSet& relevant, std::size_t k) {
  if (k == 0) throw ValidationError("AP@K requires K >= 1");
  if (relevant.empty()) throw ValidationError("AP@K requires a nonempty relevance set");
  const std::size_t limit = std::min(k, ranked.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t n = 1; n <= limit; ++n) {
    if (relevant.contains(ranked.labels[n - 1])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(n);
    }
  }
  return sum / static_cast<double>(std::min(k, relevant.size()));
}

DistanceMatrix pairwise_distance_matrix(std::span<const ProbabilityVector> profiles) {
  const auto n = static_cast<Eigen::Index>(profiles.size());
  DistanceMatrix d = DistanceMatrix::Zero(n, n);
  if (n == 0) return d;
  const Eigen::Index dim = profiles.front().size();
  for (const auto& p : profiles)
    if (p.size() != dim) throw ValidationError("profiles must all have the same dimension");
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double dist = (profiles[static_cast<std::size_t>(j)] - profiles[static_cast<std::size_t>(k)]).norm();
      d(j, k) = dist;
      d(k, j) = dist;
    }
  }
  return d;
}

LabeledGraph walk_support_subgraph(const PartitionedCciGraph& g, std::span<const ProbabilityVector> profiles,
                                   std::span<const NodeId> targets, double epsilon, std::span<const NodeId> sources) {
  const LabeledGraph& graph = g.graph();
  const std::size_t n = graph.num_nodes();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (targets.empty()) throw ValidationError("walk_support_subgraph needs at least one target");
  if (profiles.size() != n) throw ValidationError("need one transition profile per CCI node");
  for (const auto& p : profiles)
    if (static_cast<std::size_t>(p.size()) != n) throw ValidationError("transition profile has the wrong dimension");
  for (NodeId t : targets)
    if (t >= n) throw ValidationError("target node out of range");

  std::vector<bool> source_ok(n, sources.empty());
  for (NodeId s : sources) {
    if (s >= n) throw ValidationError("source node out of range");
    source_ok[s] = true;
  }

  std::vector<std::vector<NodeId>> incoming(n);
  for (const Edge& e : graph.edges()) incoming[e.target].push_back(e.source);
  auto carries = [&](NodeId u, NodeId v) { return profiles[u][v] >= epsilon; };

  std::set<std::pair<NodeId, NodeId>> arcs;
  std::set<NodeId> unique_targets(targets.begin(), targets.end());
  for (NodeId t : unique_targets) {
    if (g.layer(t) != CciLayer::ReceiverCell) continue;
    for (NodeId r : incoming[t]) {
      if (!carries(r, t)) continue;
      for (NodeId l : incoming[r]) {
        if (!carries(l, r)) continue;
        for (NodeId s : incoming[l]) {
          if (!source_ok[s] || !carries(s, l)) continue;
          arcs.insert({s, l});
          arcs.insert({l, r});
          arcs.insert({r, t});
        }
      }
    }
  }

  std::vector<NodeId> touched;
  for (const auto& [u, v] : arcs) {
    touched.push_back(u);
    touched.push_back(v);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::vector<NodeId> remap(n, 0);
  std::vector<std::string> labels;
  for (NodeId v : touched) {
    remap[v] = static_cast<NodeId>(labels.size());
    labels.push_back(graph.label(v));
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : arcs) edges.push_back({remap[u], remap[v], 1.0});
  return LabeledGraph::build(std::move(labels), std::move(edges), true, DuplicatePolicy::KeepFirst);
}

}  // namespace qwalk
