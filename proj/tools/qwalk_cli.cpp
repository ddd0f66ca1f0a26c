#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

// --t-max -> QWALK_T_MAX
std::string env_name(const std::string& flag) {
  std::string out = "QWALK_";
  for (char c : flag.substr(flag.find_first_not_of('-')))
    out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void require_one_of(const std::string& flag, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  throw qwalk::ValidationError(flag + ": unsupported value '" + value + "'");
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& flag, T& value, const std::string& help) {
  return app->add_option(flag, value, help)->envname(env_name(flag));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum random walks on biological networks"};
  app.require_subcommand(1);

  qwalk::ExperimentConfig pc;
  std::string walker = "ctqrw";
  std::string hamiltonian = "adjacency";
  std::string rwr_mode = "steady";
  std::string collapse_norm = "l2";
  std::string score_transform = "neglog10";
  std::string expm_backend = "auto";
  double chiral_phase = 0.0;
  std::string out_dir;

  auto* pr = app.add_subcommand("prioritize", "Rank genes by walker probability and score them with AP@K");
  opt(pr, "--graph", pc.graph_path, "Edge list (u<TAB>v[<TAB>w])")->required();
  opt(pr, "--scores", pc.scores_path, "Seed p-value table (label<TAB>p)")->required();
  opt(pr, "--targets", pc.targets_path, "Target p-value table (label<TAB>p)")->required();
  pr->add_flag("--directed", pc.directed, "Read the edge list as directed")->envname("QWALK_DIRECTED");
  opt(pr, "--walker", walker, "rwr|ctrw|dtrw|ctqrw|dtqrw");
  opt(pr, "--hamiltonian", hamiltonian, "adjacency|laplacian|chiral");
  auto* phase_opt = opt(pr, "--chiral-phase", chiral_phase, "Same phase on every edge (default: random phases)");
  opt(pr, "--alpha", pc.alpha, "RWR restart parameter in [0, 1)");
  opt(pr, "--rwr-mode", rwr_mode, "steady|iterations");
  opt(pr, "--t-max", pc.t_max, "Last time of the continuous grid");
  opt(pr, "--t-step", pc.t_step, "Spacing of the continuous grid");
  opt(pr, "--step-min", pc.step_min, "First step of the discrete grid");
  opt(pr, "--step-max", pc.step_max, "Last step of the discrete grid");
  opt(pr, "--collapse", pc.collapse_times, "Collapse times t1,t2,...")->delimiter(',');
  opt(pr, "--collapse-norm", collapse_norm, "l2|l1");
  opt(pr, "--k", pc.k_values, "K values for AP@K and P@K")->delimiter(',');
  opt(pr, "--seed-thresh", pc.seed_threshold, "Seed genes: p below this");
  opt(pr, "--target-thresh", pc.target_threshold, "Target genes: p below this");
  opt(pr, "--score-transform", score_transform, "neglog10|binary");
  opt(pr, "--rng-seed", pc.rng_seed, "Seed for random chiral phases");
  opt(pr, "--top-n", pc.top_n, "Rows in top_ranking.tsv");
  opt(pr, "--expm-tol", pc.expm.tol, "Matrix exponential tolerance");
  opt(pr, "--expm-backend", expm_backend, "auto|dense|krylov");
  opt(pr, "--out", out_dir, "Output directory")->required();

  qwalk::CciConfig cc;
  std::string cci_out;
  auto* cci = app.add_subcommand("cci", "Transition profiles and walk-support subgraphs of a CCI graph");
  opt(cci, "--nodes", cc.nodes_path, "Node table (label<TAB>layer)")->required();
  opt(cci, "--edges", cc.edges_path, "Edge table (source<TAB>target)")->required();
  opt(cci, "--steps", cc.steps, "Walk steps");
  opt(cci, "--targets", cc.targets, "Receiver cell labels")->delimiter(',')->required();
  opt(cci, "--epsilon", cc.epsilon, "Arc threshold for the walk-support subgraph");
  opt(cci, "--rng-seed", cc.rng_seed, "Seed for source sampling");
  opt(cci, "--num-sources", cc.num_sources, "Random sender cells used as sources (0 = all)");
  opt(cci, "--out", cci_out, "Output directory")->required();

  std::filesystem::path stats_graph;
  bool stats_directed = false;
  auto* gs = app.add_subcommand("graph-stats", "Print node, edge, fragment and GC counts as JSON");
  opt(gs, "--graph", stats_graph, "Edge list")->required();
  gs->add_flag("--directed", stats_directed, "Read the edge list as directed")->envname("QWALK_DIRECTED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*pr) {
      const auto w = qwalk::parse_walker(walker);
      if (!w) throw qwalk::ValidationError("unknown walker '" + walker + "'");
      const auto h = qwalk::parse_hamiltonian(hamiltonian);
      if (!h) throw qwalk::ValidationError("unknown Hamiltonian '" + hamiltonian + "'");
      require_one_of("--rwr-mode", rwr_mode, {"steady", "iterations"});
      require_one_of("--collapse-norm", collapse_norm, {"l1", "l2"});
      require_one_of("--score-transform", score_transform, {"neglog10", "binary"});
      require_one_of("--expm-backend", expm_backend, {"auto", "dense", "krylov"});
      pc.walker = *w;
      pc.hamiltonian = *h;
      if (*phase_opt) pc.chiral_phase = chiral_phase;
      pc.rwr_mode = rwr_mode == "steady" ? qwalk::RwrMode::Steady : qwalk::RwrMode::Iterations;
      pc.collapse_norm = collapse_norm == "l2" ? qwalk::ctqrw::CollapseNorm::L2 : qwalk::ctqrw::CollapseNorm::L1;
      pc.score_transform = score_transform == "neglog10" ? qwalk::ScoreTransform::NegLog10 : qwalk::ScoreTransform::Binary;
      pc.expm.backend = expm_backend == "dense"    ? qwalk::ExpmBackend::Dense
                        : expm_backend == "krylov" ? qwalk::ExpmBackend::Krylov
                                                   : qwalk::ExpmBackend::Auto;
      const auto result = qwalk::run_prioritization(pc);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      qwalk::emit_reports(result, out_dir);
    } else if (*cci) {
      const auto result = qwalk::run_cci_analysis(cc);
      if (!result.dtqrw.zero_rows.empty())
        std::cerr << "warning: " << result.dtqrw.zero_rows.size() << " isolated nodes have zero DTQRW profiles\n";
      qwalk::emit_cci_reports(result, cci_out);
    } else if (*gs) {
      std::cout << qwalk::graph_stats_json(qwalk::read_edge_list_file(stats_graph, stats_directed));
    }
  } catch (const qwalk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qwalk::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const qwalk::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
