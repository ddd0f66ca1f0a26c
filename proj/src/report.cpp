#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/pipeline.hpp"

namespace qwalk {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Rounded to the printed precision so JSON and CSV agree.
double rounded(double x) { return std::strtod(fmt(x).c_str(), nullptr); }

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

ordered_json network_json(const GraphStats& s, const IngestStats& ingest) {
  ordered_json j;
  j["nodes"] = s.nodes;
  j["edges"] = s.edges;
  j["fragments"] = s.fragments;
  j["gc_nodes"] = s.gc_nodes;
  j["gc_edges"] = s.gc_edges;
  j["self_loops_dropped"] = ingest.self_loops_dropped;
  j["duplicates_merged"] = ingest.duplicates_merged;
  return j;
}

std::string_view backend_name(ExpmBackend b) {
  switch (b) {
    case ExpmBackend::Auto: return "auto";
    case ExpmBackend::Dense: return "dense";
    case ExpmBackend::Krylov: return "krylov";
  }
  return "auto";
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["graph"] = c.graph_path.generic_string();
  j["scores"] = c.scores_path.generic_string();
  j["targets"] = c.targets_path.generic_string();
  j["directed"] = c.directed;
  j["walker"] = to_string(c.walker);
  if (c.walker == WalkerKind::Ctqrw) {
    j["hamiltonian"] = to_string(c.hamiltonian);
    if (c.hamiltonian == ctqrw::HamiltonianKind::Chiral) {
      if (c.chiral_phase)
        j["chiral_phase"] = *c.chiral_phase;
      else
        j["chiral_phase"] = "random";
    }
    j["collapse_times"] = c.collapse_times;
    j["collapse_norm"] = c.collapse_norm == ctqrw::CollapseNorm::L2 ? "l2" : "l1";
  }
  if (c.walker == WalkerKind::Rwr) {
    j["alpha"] = c.alpha;
    j["rwr_mode"] = c.rwr_mode == RwrMode::Steady ? "steady" : "iterations";
  }
  if (c.walker == WalkerKind::Ctqrw || c.walker == WalkerKind::Ctrw) {
    j["t_max"] = c.t_max;
    j["t_step"] = c.t_step;
    j["expm_tol"] = c.expm.tol;
    j["expm_backend"] = backend_name(c.expm.backend);
  } else if (c.walker != WalkerKind::Rwr || c.rwr_mode == RwrMode::Iterations) {
    j["step_min"] = c.step_min;
    j["step_max"] = c.step_max;
  }
  j["k"] = c.k_values;
  j["seed_threshold"] = c.seed_threshold;
  j["target_threshold"] = c.target_threshold;
  j["score_transform"] = c.score_transform == ScoreTransform::NegLog10 ? "neglog10" : "binary";
  j["seed"] = c.rng_seed;
  j["top_n"] = c.top_n;
  return j;
}

std::string matrix_csv(const LabeledGraph& g, const std::vector<ProbabilityVector>& rows) {
  std::ostringstream out;
  out << "node";
  for (const auto& label : g.labels()) out << ',' << csv_field(label);
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << csv_field(g.labels()[i]);
    for (Eigen::Index k = 0; k < rows[i].size(); ++k) out << ',' << fmt(rows[i][k]);
    out << '\n';
  }
  return out.str();
}

std::string distance_csv(const LabeledGraph& g, const DistanceMatrix& d) {
  std::vector<ProbabilityVector> rows;
  for (Eigen::Index i = 0; i < d.rows(); ++i) rows.emplace_back(d.row(i).transpose());
  return matrix_csv(g, rows);
}

std::string subgraph_tsv(const LabeledGraph& s, const PartitionedCciGraph& full,
                         const std::vector<ProbabilityVector>& profiles) {
  std::ostringstream out;
  out << "source\ttarget\tsource_layer\ttarget_layer\tweight\n";
  for (const Edge& e : s.edges()) {
    const NodeId u = *full.graph().find(s.label(e.source));
    const NodeId v = *full.graph().find(s.label(e.target));
    out << s.label(e.source) << '\t' << s.label(e.target) << '\t' << to_string(full.layer(u)) << '\t'
        << to_string(full.layer(v)) << '\t' << fmt(profiles[u][v]) << '\n';
  }
  return out.str();
}

std::vector<std::string> labels_of(const LabeledGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId v : ids) out.push_back(g.label(v));
  return out;
}

}  // namespace

void emit_reports(const SweepResult& r, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const auto& ks = r.config.k_values;
  const std::string walker(to_string(r.config.walker));

  std::ostringstream csv;
  csv << "walker,grid_kind,grid_label,grid_value";
  for (std::size_t k : ks) csv << ",ap@" << k;
  for (std::size_t k : ks) csv << ",p@" << k;
  csv << ",ranking_digest\n";
  for (const auto& rec : r.records) {
    csv << walker << ',' << r.grid_kind << ',' << rec.point.label << ','
        << (rec.point.value ? fmt(*rec.point.value) : std::string());
    for (std::size_t k : ks) csv << ',' << fmt(rec.ap_at_k.at(k));
    for (std::size_t k : ks) csv << ',' << fmt(rec.p_at_k.at(k));
    csv << ',' << hex64(rec.ranking_digest) << '\n';
  }
  write_file(out_dir / "sweep.csv", csv.str());

  ordered_json summary;
  summary["walker"] = walker;
  summary["grid_kind"] = r.grid_kind;
  summary["grid_points"] = r.records.size();
  summary["seeds"] = r.seeds.size();
  summary["targets"] = r.targets.size();
  ordered_json per_k = ordered_json::array();
  std::size_t best_first_k = 0;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const std::size_t k = ks[ki];
    std::size_t best = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const double ap = r.records[i].ap_at_k.at(k);
      sum += ap;
      if (ap > r.records[best].ap_at_k.at(k)) best = i;
    }
    if (ki == 0) best_first_k = best;
    const auto& rec = r.records[best];
    ordered_json e;
    e["k"] = k;
    e["max_ap"] = rounded(rec.ap_at_k.at(k));
    e["mean_ap"] = rounded(sum / static_cast<double>(r.records.size()));
    e["argmax"] = rec.point.label;
    e["p_at_argmax"] = rounded(rec.p_at_k.at(k));
    per_k.push_back(e);
  }
  summary["metrics"] = per_k;
  summary["top_ranking_grid_point"] = r.records[best_first_k].point.label;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  ordered_json manifest;
  manifest["command"] = "prioritize";
  manifest["config"] = config_json(r.config);
  manifest["grid_kind"] = r.grid_kind;
  manifest["grid_points"] = r.records.size();
  manifest["network"] = network_json(r.graph, r.ingest);
  ordered_json module;
  module["seeds_total"] = r.module.seeds_total;
  module["seeds_in_gc"] = r.module.seeds_in_gc;
  module["targets_total"] = r.module.targets_total;
  module["targets_in_gc"] = r.module.targets_in_gc;
  module["overlap_removed"] = r.module.overlap_removed;
  module["module_in_graph"] = r.module.module_in_graph;
  module["module_gc_size"] = r.module.module_gc_size;
  module["module_gc_relative_size"] = rounded(r.module.module_gc_relative_size);
  manifest["disease_module"] = module;
  manifest["warnings"] = r.warnings;
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  const RankedList& top = r.records[best_first_k].ranking;
  std::ostringstream tsv;
  tsv << "rank\tnode\tprobability\n";
  for (std::size_t i = 0; i < std::min(r.config.top_n, top.size()); ++i)
    tsv << (i + 1) << '\t' << top.labels[i] << '\t' << fmt(top.scores[i]) << '\n';
  write_file(out_dir / "top_ranking.tsv", tsv.str());
}

void emit_cci_reports(const CciResult& r, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const LabeledGraph& g = r.graph.graph();
  for (const CciWalkerResult* w : {&r.dtrw, &r.dtqrw}) {
    write_file(out_dir / (w->walker + "_profiles.csv"), matrix_csv(g, w->profiles));
    write_file(out_dir / (w->walker + "_distances.csv"), distance_csv(g, w->distances));
    write_file(out_dir / (w->walker + "_subgraph.tsv"), subgraph_tsv(w->subgraph, r.graph, w->profiles));
  }

  ordered_json m;
  m["command"] = "cci";
  ordered_json cfg;
  cfg["nodes"] = r.config.nodes_path.generic_string();
  cfg["edges"] = r.config.edges_path.generic_string();
  cfg["steps"] = r.config.steps;
  cfg["targets"] = r.config.targets;
  cfg["epsilon"] = r.config.epsilon;
  cfg["seed"] = r.config.rng_seed;
  cfg["num_sources"] = r.config.num_sources;
  m["config"] = cfg;
  const auto counts = r.graph.layer_counts();
  ordered_json layers;
  for (std::size_t i = 0; i < counts.size(); ++i) layers[std::string(to_string(static_cast<CciLayer>(i)))] = counts[i];
  m["layers"] = layers;
  m["nodes"] = g.num_nodes();
  m["edges"] = g.num_edges();
  m["walks_on_symmetrized_view"] = true;
  m["components"] = r.components.count();
  m["component_sizes"] = r.components.sizes;
  std::vector<NodeId> isolated;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (r.symmetrized.out_degree(v) == 0) isolated.push_back(v);
  m["isolated_nodes"] = labels_of(g, isolated);
  m["sources"] = r.sources.empty() ? ordered_json("all_senders") : ordered_json(labels_of(g, r.sources));
  for (const CciWalkerResult* w : {&r.dtrw, &r.dtqrw}) {
    ordered_json wj;
    wj["zero_rows"] = labels_of(g, w->zero_rows);
    wj["subgraph_nodes"] = w->subgraph.num_nodes();
    wj["subgraph_edges"] = w->subgraph.num_edges();
    m[w->walker] = wj;
  }
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string graph_stats_json(const LabeledGraph& g) {
  ordered_json j = network_json(graph_stats(g), g.ingest_stats());
  j["directed"] = g.directed();
  j["weighted"] = g.weighted();
  return j.dump(2) + "\n";
}

}  // namespace qwalk
