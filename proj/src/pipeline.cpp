#include "qwalk/pipeline.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "qwalk/dtqrw.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"

namespace qwalk {

namespace {

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

bool needs_undirected(const ExperimentConfig& c) {
  switch (c.walker) {
    case WalkerKind::Ctrw:
    case WalkerKind::Dtqrw: return true;
    case WalkerKind::Ctqrw: return c.hamiltonian != ctqrw::HamiltonianKind::Chiral;
    default: return false;
  }
}

ModuleStats module_stats(const LabeledGraph& graph, const SeedTargetSets& sets) {
  ModuleStats m;
  m.seeds_total = sets.seeds.size();
  m.targets_total = sets.targets.size();
  m.overlap_removed = sets.overlap_removed;
  std::vector<NodeId> module;
  for (const auto* table : {&sets.seeds, &sets.targets})
    for (const auto& [label, p] : *table)
      if (auto v = graph.find(label)) module.push_back(*v);
  std::sort(module.begin(), module.end());
  module.erase(std::unique(module.begin(), module.end()), module.end());
  m.module_in_graph = module.size();
  if (!module.empty()) {
    auto comps = connected_components(induced_subgraph(graph, module));
    m.module_gc_size = comps.sizes.front();
    m.module_gc_relative_size = static_cast<double>(m.module_gc_size) / static_cast<double>(m.module_in_graph);
  }
  return m;
}

Eigen::VectorXd seed_scores(const LabeledGraph& gc, const std::vector<std::pair<NodeId, double>>& seeds,
                            ScoreTransform transform) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(gc.num_nodes()));
  for (const auto& [v, p] : seeds) {
    s[v] = transform == ScoreTransform::Binary ? 1.0 : -std::log10(std::max(p, DBL_MIN));
  }
  if (!(s.sum() > 0.0)) throw ValidationError("seed scores are all zero (every seed has p = 1?)");
  return s;
}

std::vector<ProbabilityVector> run_walker(const ExperimentConfig& c, const LabeledGraph& gc, const Eigen::VectorXd& s,
                                          const std::vector<GridPoint>& grid) {
  std::vector<ProbabilityVector> probs(grid.size());
  const ProbabilityVector p0 = s / s.sum();

  switch (c.walker) {
    case WalkerKind::Rwr: {
      const TransitionMatrix m = normalize_column_stochastic(gc, p0);
      if (c.rwr_mode == RwrMode::Steady) {
        probs[0] = rwr_steady_state(m, p0, c.alpha);
        break;
      }
      ProbabilityVector p = p0;
      std::size_t done = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto target = static_cast<std::size_t>(*grid[i].value);
        for (; done < target; ++done) p = c.alpha * (m.matrix * p) + (1.0 - c.alpha) * p0;
        probs[i] = p;
      }
      break;
    }
    case WalkerKind::Ctrw: {
      const DiffusionPropagator prop(laplacian(gc), c.expm);
      for (std::size_t i = 0; i < grid.size(); ++i) probs[i] = prop.apply(p0, *grid[i].value);
      break;
    }
    case WalkerKind::Dtrw: {
      const TransitionMatrix p = dtrw_transition(gc);
      ProbabilityVector state = p0;
      std::size_t done = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto target = static_cast<std::size_t>(*grid[i].value);
        state = dtrw_evolve(p, state, target - done);
        done = target;
        probs[i] = state;
      }
      break;
    }
    case WalkerKind::Ctqrw: {
      ctqrw::HamiltonianSpec spec;
      spec.kind = c.hamiltonian;
      if (c.hamiltonian == ctqrw::HamiltonianKind::Chiral)
        spec.phases = c.chiral_phase ? ctqrw::uniform_chiral_phases(gc, *c.chiral_phase)
                                     : ctqrw::random_chiral_phases(gc, c.rng_seed);
      const UnitaryPropagator prop(ctqrw::build_hamiltonian(gc, spec), c.expm);
      const ctqrw::CollapseSchedule schedule(c.collapse_times);
      AmplitudeVector psi = ctqrw::initial_state_from_scores(s);
      double now = 0.0;
      std::size_t next_collapse = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = *grid[i].value;
        // A collapse at theta affects every grid point strictly after theta.
        while (next_collapse < schedule.times().size() && schedule.times()[next_collapse] < t) {
          const double theta = schedule.times()[next_collapse++];
          psi = ctqrw::collapse(ctqrw::evolve(prop, psi, theta - now), c.collapse_norm);
          now = theta;
        }
        psi = ctqrw::evolve(prop, psi, t - now);
        now = t;
        probs[i] = ctqrw::measure(psi);
      }
      break;
    }
    case WalkerKind::Dtqrw: {
      const dtqrw::ArcIndex arcs = dtqrw::arc_basis(gc);
      dtqrw::ArcState psi = dtqrw::state_from_scores(arcs, s);
      std::size_t done = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto target = static_cast<std::size_t>(*grid[i].value);
        psi = dtqrw::evolve(arcs, psi, target - done);
        done = target;
        probs[i] = dtqrw::node_probabilities(arcs, psi);
      }
      break;
    }
  }
  return probs;
}

}  // namespace

std::string_view to_string(WalkerKind w) {
  switch (w) {
    case WalkerKind::Rwr: return "rwr";
    case WalkerKind::Ctrw: return "ctrw";
    case WalkerKind::Dtrw: return "dtrw";
    case WalkerKind::Ctqrw: return "ctqrw";
    case WalkerKind::Dtqrw: return "dtqrw";
  }
  return "unknown";
}

std::optional<WalkerKind> parse_walker(std::string_view s) {
  for (auto w : {WalkerKind::Rwr, WalkerKind::Ctrw, WalkerKind::Dtrw, WalkerKind::Ctqrw, WalkerKind::Dtqrw})
    if (s == to_string(w)) return w;
  return std::nullopt;
}

std::string_view to_string(ctqrw::HamiltonianKind h) {
  switch (h) {
    case ctqrw::HamiltonianKind::Adjacency: return "adjacency";
    case ctqrw::HamiltonianKind::Laplacian: return "laplacian";
    case ctqrw::HamiltonianKind::Chiral: return "chiral";
  }
  return "unknown";
}

std::optional<ctqrw::HamiltonianKind> parse_hamiltonian(std::string_view s) {
  for (auto h : {ctqrw::HamiltonianKind::Adjacency, ctqrw::HamiltonianKind::Laplacian, ctqrw::HamiltonianKind::Chiral})
    if (s == to_string(h)) return h;
  return std::nullopt;
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw ValidationError("alpha must lie in [0, 1)");
  if (c.k_values.empty()) throw ValidationError("at least one K value is required");
  for (std::size_t k : c.k_values)
    if (k == 0) throw ValidationError("K values must be >= 1");
  if (!(c.seed_threshold > 0.0 && c.seed_threshold <= 1.0) || !(c.target_threshold > 0.0 && c.target_threshold <= 1.0))
    throw ValidationError("p-value thresholds must lie in (0, 1]");
  if (!std::isfinite(c.t_max) || c.t_max < 0.0) throw ValidationError("t-max must be finite and nonnegative");
  if (!std::isfinite(c.t_step) || !(c.t_step > 0.0)) throw ValidationError("t-step must be positive");
  if (c.step_min > c.step_max) throw ValidationError("step grid is empty (step-min > step-max)");
  if (c.chiral_phase && !std::isfinite(*c.chiral_phase)) throw ValidationError("chiral phase must be finite");
  ctqrw::CollapseSchedule{c.collapse_times};
}

std::vector<GridPoint> sweep_grid(const ExperimentConfig& c) {
  std::vector<GridPoint> grid;
  switch (c.walker) {
    case WalkerKind::Ctqrw:
    case WalkerKind::Ctrw: {
      const double count = std::floor(c.t_max / c.t_step + 1e-9) + 1.0;
      if (count > 1e6) throw ValidationError("time grid has more than 10^6 points");
      for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
        const double t = static_cast<double>(i) * c.t_step;
        grid.push_back({format_time(t), t});
      }
      break;
    }
    case WalkerKind::Rwr:
      if (c.rwr_mode == RwrMode::Steady) {
        grid.push_back({"steady", std::nullopt});
        break;
      }
      [[fallthrough]];
    case WalkerKind::Dtrw:
    case WalkerKind::Dtqrw:
      for (std::size_t s = c.step_min; s <= c.step_max; ++s)
        grid.push_back({std::to_string(s), static_cast<double>(s)});
      break;
  }
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  return grid;
}

std::uint64_t ranking_digest(const RankedList& ranked) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& label : ranked.labels) {
    for (unsigned char c : label) mix(c);
    mix('\n');
  }
  return h;
}

SweepResult run_prioritization(const ExperimentConfig& config, const LabeledGraph& graph, const PValueTable& scores,
                               const PValueTable& target_table) {
  validate_config(config);
  SweepResult r;
  r.config = config;
  const auto grid = sweep_grid(config);
  r.grid_kind = config.walker == WalkerKind::Ctqrw || config.walker == WalkerKind::Ctrw ? "time"
                : config.walker == WalkerKind::Rwr ? (config.rwr_mode == RwrMode::Steady ? "steady" : "iterations")
                                                   : "steps";

  r.graph = graph_stats(graph);
  r.ingest = graph.ingest_stats();
  if (graph.directed() && needs_undirected(config))
    throw ValidationError("walker '" + std::string(to_string(config.walker)) +
                          "' needs an undirected graph; load the network without --directed (which symmetrizes it)");

  const SeedTargetSets sets =
      build_seed_target_sets(scores, config.seed_threshold, target_table, config.target_threshold);
  r.module = module_stats(graph, sets);
  if (sets.overlap_removed > 0)
    r.warnings.push_back(std::to_string(sets.overlap_removed) + " genes passed both filters and were removed from the targets");

  r.working_graph = greatest_component(graph);
  const LabeledGraph& gc = r.working_graph;

  std::vector<std::pair<NodeId, double>> seeds;
  for (const auto& [label, p] : sets.seeds)
    if (auto v = gc.find(label)) seeds.emplace_back(*v, p);
  r.module.seeds_in_gc = seeds.size();
  if (seeds.size() < sets.seeds.size())
    r.warnings.push_back(std::to_string(sets.seeds.size() - seeds.size()) + " of " + std::to_string(sets.seeds.size()) +
                         " seed genes are outside the greatest component and were dropped");
  if (seeds.empty()) throw ValidationError("no seed gene lies in the greatest component");
  for (const auto& [v, p] : seeds) r.seeds.push_back(v);

  std::vector<std::string> target_labels;
  for (const auto& [label, p] : sets.targets) {
    if (auto v = gc.find(label)) {
      r.targets.push_back(*v);
      target_labels.push_back(label);
    }
  }
  r.module.targets_in_gc = r.targets.size();
  if (r.targets.size() < sets.targets.size())
    r.warnings.push_back(std::to_string(sets.targets.size() - r.targets.size()) + " of " +
                         std::to_string(sets.targets.size()) +
                         " target genes are outside the greatest component and are not scored");
  if (r.targets.empty()) throw ValidationError("no target gene lies in the greatest component");

  const Eigen::VectorXd s = seed_scores(gc, seeds, config.score_transform);
  const std::vector<ProbabilityVector> probs = run_walker(config, gc, s, grid);

  const RelevanceSet relevant(std::move(target_labels));
  r.records.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    GridRecord& rec = r.records[i];
    rec.point = grid[i];
    rec.ranking = ctqrw::rank_by_probability(gc, probs[i], r.seeds);
    for (std::size_t k : config.k_values) {
      rec.ap_at_k[k] = average_precision_at_k(rec.ranking, relevant, k);
      rec.p_at_k[k] = precision_at_k(rec.ranking, relevant, k);
    }
    rec.ranking_digest = ranking_digest(rec.ranking);
  });
  return r;
}

SweepResult run_prioritization(const ExperimentConfig& config) {
  validate_config(config);
  const LabeledGraph graph = read_edge_list_file(config.graph_path, config.directed);
  const PValueTable scores = read_pvalue_table(config.scores_path);
  const PValueTable targets = read_pvalue_table(config.targets_path);
  return run_prioritization(config, graph, scores, targets);
}

CciResult run_cci_analysis(const CciConfig& config, PartitionedCciGraph graph) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (config.targets.empty()) throw ValidationError("at least one target cell is required");

  CciResult r;
  r.config = config;
  r.graph = std::move(graph);
  r.symmetrized = symmetrized_view(r.graph);
  r.components = connected_components(r.symmetrized);
  const LabeledGraph& g = r.graph.graph();
  const std::size_t n = g.num_nodes();

  for (const auto& label : config.targets) {
    auto v = g.find(label);
    if (!v) throw ValidationError("target '" + label + "' is not a node of the CCI graph");
    r.targets.push_back(*v);
  }

  std::vector<NodeId> senders;
  for (NodeId v = 0; v < n; ++v)
    if (r.graph.layer(v) == CciLayer::SenderCell) senders.push_back(v);
  if (config.num_sources > 0 && config.num_sources < senders.size()) {
    std::mt19937_64 rng(config.rng_seed);
    for (std::size_t i = 0; i < config.num_sources; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (senders.size() - i));
      std::swap(senders[i], senders[j]);
    }
    senders.resize(config.num_sources);
    std::sort(senders.begin(), senders.end());
    r.sources = senders;
  }

  const TransitionMatrix p = dtrw_transition(r.symmetrized);
  const dtqrw::ArcIndex arcs = dtqrw::arc_basis(r.symmetrized);
  r.dtrw.walker = "dtrw";
  r.dtqrw.walker = "dtqrw";
  r.dtrw.profiles.resize(n);
  r.dtqrw.profiles.resize(n);
  parallel_for(n, [&](std::size_t j) {
    const auto v = static_cast<NodeId>(j);
    ProbabilityVector delta = ProbabilityVector::Zero(static_cast<Eigen::Index>(n));
    delta[v] = 1.0;
    r.dtrw.profiles[j] = dtrw_evolve(p, delta, config.steps);
    r.dtqrw.profiles[j] = arcs.degree(v) > 0 ? dtqrw::transition_profile(arcs, v, config.steps)
                                             : ProbabilityVector::Zero(static_cast<Eigen::Index>(n));
  });
  for (NodeId v = 0; v < n; ++v)
    if (arcs.degree(v) == 0) r.dtqrw.zero_rows.push_back(v);

  for (CciWalkerResult* w : {&r.dtrw, &r.dtqrw}) {
    w->distances = pairwise_distance_matrix(w->profiles);
    w->subgraph = walk_support_subgraph(r.graph, w->profiles, r.targets, config.epsilon, r.sources);
  }
  return r;
}

CciResult run_cci_analysis(const CciConfig& config) {
  auto nodes = parse_cci_nodes(read_text_file(config.nodes_path));
  auto edges = parse_cci_edges(read_text_file(config.edges_path));
  return run_cci_analysis(config, build_cci_graph(nodes, edges));
}

}  // namespace qwalk
