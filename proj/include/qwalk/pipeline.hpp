#pragma once

// Experiment drivers.
//
// Prioritization: extract the greatest component, select seeds and targets
// from p-value tables, run one walker over a time/step grid from the
// seed-derived initial state, rank non-seed nodes by final probability and
// score the ranking against the targets with P@K and AP@K.
//
// CCI analysis: validate a four-partite interaction graph, compute n-step
// DTRW and DTQRW transition profiles from every node of its symmetrized
// view, their pairwise l2 distances and the walk-support subgraph into the
// chosen target cells.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/cci.hpp"
#include "qwalk/classical.hpp"
#include "qwalk/ctqrw.hpp"
#include "qwalk/expm.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/tables.hpp"

namespace qwalk {

enum class WalkerKind { Rwr, Ctrw, Dtrw, Ctqrw, Dtqrw };
enum class RwrMode {
  Steady,      // closed-form steady state, one grid point
  Iterations,  // truncated restart iteration, swept over the step grid
};
enum class ScoreTransform {
  NegLog10,  // S_j = -log10(p_j)
  Binary,    // S_j = 1 for every seed
};

std::string_view to_string(WalkerKind w);
std::optional<WalkerKind> parse_walker(std::string_view s);
std::string_view to_string(ctqrw::HamiltonianKind h);
std::optional<ctqrw::HamiltonianKind> parse_hamiltonian(std::string_view s);

struct ExperimentConfig {
  std::filesystem::path graph_path;
  std::filesystem::path scores_path;
  std::filesystem::path targets_path;
  bool directed = false;

  WalkerKind walker = WalkerKind::Ctqrw;
  ctqrw::HamiltonianKind hamiltonian = ctqrw::HamiltonianKind::Adjacency;
  /// Same phase on every edge; unset draws phases from rng_seed.
  std::optional<double> chiral_phase;
  double alpha = 0.85;
  RwrMode rwr_mode = RwrMode::Steady;

  double t_max = 10.0;
  double t_step = 0.1;
  std::size_t step_min = 1;
  std::size_t step_max = 20;

  std::vector<double> collapse_times;
  ctqrw::CollapseNorm collapse_norm = ctqrw::CollapseNorm::L2;

  std::vector<std::size_t> k_values{20, 50, 100};
  double seed_threshold = 0.01;
  double target_threshold = 5e-8;
  ScoreTransform score_transform = ScoreTransform::NegLog10;
  std::uint64_t rng_seed = 0;
  std::size_t top_n = 100;
  ExpmOptions expm;
};

/// Throws ValidationError for empty grids, K = 0 and out-of-range values.
void validate_config(const ExperimentConfig& config);

struct GridPoint {
  std::string label;
  std::optional<double> value;  // time or step count; unset for the steady state
};

struct GridRecord {
  GridPoint point;
  std::map<std::size_t, double> ap_at_k;
  std::map<std::size_t, double> p_at_k;
  std::uint64_t ranking_digest = 0;
  RankedList ranking;
};

struct ModuleStats {
  std::size_t seeds_total = 0;
  std::size_t seeds_in_gc = 0;
  std::size_t targets_total = 0;
  std::size_t targets_in_gc = 0;
  std::size_t overlap_removed = 0;
  std::size_t module_in_graph = 0;
  std::size_t module_gc_size = 0;
  /// Largest component of the seed+target induced subgraph over the module
  /// nodes present in the network; 0 when none is present.
  double module_gc_relative_size = 0.0;
};

struct SweepResult {
  ExperimentConfig config;
  std::string grid_kind;  // "time", "steps", "iterations" or "steady"
  std::vector<GridRecord> records;
  GraphStats graph;
  IngestStats ingest;
  ModuleStats module;
  LabeledGraph working_graph;  // greatest component
  std::vector<NodeId> seeds;   // indices into working_graph
  std::vector<NodeId> targets;
  std::vector<std::string> warnings;
};

/// Grid of the configured walker (before any evaluation).
std::vector<GridPoint> sweep_grid(const ExperimentConfig& config);

/// In-memory driver; the path fields of `config` are only echoed.
SweepResult run_prioritization(const ExperimentConfig& config, const LabeledGraph& graph, const PValueTable& scores,
                               const PValueTable& target_table);
/// Reads graph, score and target files named in `config`.
SweepResult run_prioritization(const ExperimentConfig& config);

/// 64-bit FNV-1a over the ranked labels, '\n'-separated.
std::uint64_t ranking_digest(const RankedList& ranked);

/// Writes sweep.csv, summary.json, manifest.json and top_ranking.tsv into
/// `out_dir` (created if missing). Throws IoError if it cannot be written.
void emit_reports(const SweepResult& result, const std::filesystem::path& out_dir);

struct CciConfig {
  std::filesystem::path nodes_path;
  std::filesystem::path edges_path;
  std::size_t steps = 5;
  std::vector<std::string> targets;
  double epsilon = 0.05;
  std::uint64_t rng_seed = 0;
  /// Random sender cells used as path starts; 0 uses every sender.
  std::size_t num_sources = 0;
};

struct CciWalkerResult {
  std::string walker;
  std::vector<ProbabilityVector> profiles;  // one per node of the CCI graph
  DistanceMatrix distances;
  LabeledGraph subgraph;
  std::vector<NodeId> zero_rows;  // nodes without a profile (isolated in the symmetrized view)
};

struct CciResult {
  CciConfig config;
  PartitionedCciGraph graph;
  LabeledGraph symmetrized;
  ComponentDecomposition components;
  std::vector<NodeId> targets;
  std::vector<NodeId> sources;
  CciWalkerResult dtrw;
  CciWalkerResult dtqrw;
};

CciResult run_cci_analysis(const CciConfig& config, PartitionedCciGraph graph);
CciResult run_cci_analysis(const CciConfig& config);

/// {dtrw,dtqrw}_{profiles,distances}.csv, {dtrw,dtqrw}_subgraph.tsv and
/// manifest.json.
void emit_cci_reports(const CciResult& result, const std::filesystem::path& out_dir);

/// Network summary with node/edge/fragment/GC counts, as pretty JSON text.
std::string graph_stats_json(const LabeledGraph& g);

}  // namespace qwalk
