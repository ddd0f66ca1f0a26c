// Acceptance suite: one PASS/FAIL line per criterion.
// usage: qwalk_acceptance <path-to-qwalk-cli> <source-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qwalk/classical.hpp"
#include "qwalk/ctqrw.hpp"
#include "qwalk/dtqrw.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/pipeline.hpp"

using namespace qwalk;
namespace fs = std::filesystem;
using oracle::cplx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the worst observed value against a bound.
struct Worst {
  double value = 0.0;
  void update(double v) {
    if (!(v <= value)) value = v;  // NaN sticks
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing " + p.string() + ">";
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Eigen::VectorXd delta(Eigen::Index n, Eigen::Index i) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[i] = 1.0;
  return p;
}

Eigen::VectorXd random_distribution(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = u(rng);
  return p / p.sum();
}

Outcome unitarity() {
  std::mt19937_64 rng(1001);
  Worst ct, dt, dense_u;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + rng() % 199, 0.03 + 0.1 * (trial % 3));
    const auto spec = trial % 3 == 0   ? ctqrw::HamiltonianSpec::adjacency()
                      : trial % 3 == 1 ? ctqrw::HamiltonianSpec::laplacian()
                                       : ctqrw::HamiltonianSpec::chiral(ctqrw::random_chiral_phases(g, trial));
    const auto h = ctqrw::build_hamiltonian(g, spec);
    ExpmOptions o;
    o.backend = trial % 2 ? ExpmBackend::Krylov : ExpmBackend::Dense;
    const UnitaryPropagator u(h, o);
    const auto psi = oracle::random_state(rng, h.dim());
    const double t = 0.05 * static_cast<double>(rng() % 400);
    ct.update(std::abs(u.apply(psi, t).norm() - 1.0));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + rng() % 49, 0.05 + 0.05 * (trial % 4));
    const auto arcs = dtqrw::arc_basis(g);
    const auto psi = oracle::random_state(rng, static_cast<Eigen::Index>(arcs.num_arcs()));
    const std::size_t n = 1 + rng() % 100;
    dt.update(std::abs(dtqrw::evolve(arcs, psi, n).norm() - 1.0));
    const auto m = static_cast<Eigen::Index>(arcs.num_arcs());
    Eigen::MatrixXcd um(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      dtqrw::ArcState e = dtqrw::ArcState::Zero(m);
      e[a] = 1.0;
      um.col(a) = dtqrw::step(arcs, e);
    }
    dense_u.update((um.adjoint() * um - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff());
  }
  return {ct.value <= 1e-9 && dt.value <= 1e-9 && dense_u.value <= 1e-10,
          "ctqrw drift " + sci(ct.value) + ", dtqrw drift " + sci(dt.value) + ", max|U'U-I| " + sci(dense_u.value)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1002);
  Worst ex, dt;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng() % 199);
    const auto h = oracle::random_hermitian(rng, n, 0.02 + 0.1 * (trial % 5));
    const auto v = oracle::random_state(rng, n);
    const double t = 0.1 * static_cast<double>(rng() % 200);
    ExpmOptions o;
    o.backend = trial % 2 ? ExpmBackend::Krylov : ExpmBackend::Auto;
    ex.update((expm_action(oracle::to_sparse(h), v, t, o) - oracle::eig_expm_action(h, v, t)).cwiseAbs().maxCoeff());
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + rng() % 49, 0.1);
    const auto arcs = dtqrw::arc_basis(g);
    const auto psi = oracle::random_state(rng, static_cast<Eigen::Index>(arcs.num_arcs()));
    const std::size_t steps = rng() % 30;
    Eigen::VectorXcd expected = psi;
    const Eigen::MatrixXd u = oracle::dtqrw_unitary(g);
    for (std::size_t s = 0; s < steps; ++s) expected = u * expected;
    dt.update((dtqrw::evolve(arcs, psi, steps) - expected).cwiseAbs().maxCoeff());
  }
  return {ex.value <= 1e-8 && dt.value <= 1e-10,
          "expm max diff " + sci(ex.value) + ", dtqrw max diff " + sci(dt.value)};
}

Outcome analytic_cases() {
  const auto k2g = oracle::make_graph(2, {{0, 1}});
  const auto k2 = ctqrw::build_hamiltonian(k2g, ctqrw::HamiltonianSpec::adjacency());
  const auto tri =
      ctqrw::build_hamiltonian(oracle::make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), ctqrw::HamiltonianSpec::adjacency());
  const UnitaryPropagator uk2(k2), utri(tri);
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> ut(0.0, 20.0);
  Worst a, b, c;
  for (int i = 0; i < 100; ++i) {
    const double t = ut(rng);
    a.update(std::abs(ctqrw::transition_probability(uk2, 0, 1, t) - std::pow(std::sin(t), 2)));
    b.update(std::abs(ctqrw::transition_probability(utri, 0, 1, t) - 4.0 / 9.0 * std::pow(std::sin(1.5 * t), 2)));
    const auto p = ctrw_evolve(k2g, delta(2, 0), t / 4);
    c.update(std::max(std::abs(p[0] - (1 + std::exp(-t / 2)) / 2), std::abs(p[1] - (1 - std::exp(-t / 2)) / 2)));
  }
  return {a.value <= 1e-10 && b.value <= 1e-9 && c.value <= 1e-10,
          "K2 " + sci(a.value) + ", triangle " + sci(b.value) + ", CTRW K2 " + sci(c.value)};
}

Outcome real_symmetry_and_chirality() {
  std::mt19937_64 rng(1004);
  Worst sym;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + rng() % 80, 0.08);
    const auto spec = trial % 2 ? ctqrw::HamiltonianSpec::laplacian() : ctqrw::HamiltonianSpec::adjacency();
    const UnitaryPropagator u(ctqrw::build_hamiltonian(g, spec));
    const auto n = static_cast<NodeId>(g.num_nodes());
    for (int q = 0; q < 10; ++q) {
      const NodeId j = rng() % n, k = rng() % n;
      const double t = 0.01 * static_cast<double>(rng() % 1000);
      sym.update(std::abs(ctqrw::transition_probability(u, j, k, t) - ctqrw::transition_probability(u, k, j, t)));
    }
  }
  const auto cycle = oracle::make_graph(3, {{0, 1}, {1, 2}, {2, 0}}, true);
  const auto h = ctqrw::build_hamiltonian(
      cycle, ctqrw::HamiltonianSpec::chiral(ctqrw::uniform_chiral_phases(cycle, std::numbers::pi / 2)));
  const Eigen::MatrixXcd hd(h.matrix());
  double asym = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double t = 0.01 * i;
    const auto from0 = oracle::eig_expm_action(hd, Eigen::VectorXcd::Unit(3, 0), t);
    const auto from1 = oracle::eig_expm_action(hd, Eigen::VectorXcd::Unit(3, 1), t);
    asym = std::max(asym, std::abs(std::norm(from0[1]) - std::norm(from1[0])));
  }
  const UnitaryPropagator uc(h);
  double lib_asym = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double t = 0.01 * i;
    lib_asym = std::max(lib_asym, std::abs(ctqrw::transition_probability(uc, 0, 1, t) -
                                           ctqrw::transition_probability(uc, 1, 0, t)));
  }
  return {sym.value <= 1e-10 && asym > 0.05 && lib_asym > 0.05,
          "real-H max asymmetry " + sci(sym.value) + ", chiral max asymmetry " + sci(lib_asym) + " (oracle " +
              sci(asym) + ")"};
}

Outcome rwr() {
  std::mt19937_64 rng(1005);
  Worst residual, agree;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 5 + rng() % 495, 0.01, trial % 4 != 0);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const auto p0 = random_distribution(rng, n);
    const auto m = normalize_column_stochastic(g, p0);
    for (double alpha : {0.15, 0.5, 0.85}) {
      RwrOptions d, p;
      d.method = RwrMethod::Direct;
      p.method = RwrMethod::Power;
      const auto a = rwr_steady_state(m, p0, alpha, d);
      const auto b = rwr_steady_state(m, p0, alpha, p);
      residual.update((a - alpha * (m.matrix * a) - (1 - alpha) * p0).lpNorm<1>());
      agree.update((a - b).cwiseAbs().maxCoeff());
    }
  }
  const auto k2 = rwr_steady_state(oracle::make_graph(2, {{0, 1}}), delta(2, 0), 0.5);
  const double k2_err = std::max(std::abs(k2[0] - 2.0 / 3.0), std::abs(k2[1] - 1.0 / 3.0));
  const auto tri = rwr_steady_state(oracle::make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), delta(3, 0), 0.85);
  const double tri_err = (tri - Eigen::Vector3d(23.0 / 57, 17.0 / 57, 17.0 / 57)).cwiseAbs().maxCoeff();
  return {residual.value <= 1e-8 && agree.value <= 1e-8 && k2_err <= 1e-12 && tri_err <= 1e-10,
          "residual " + sci(residual.value) + ", direct-vs-power " + sci(agree.value) + ", K2 " + sci(k2_err) +
              ", triangle " + sci(tri_err)};
}

Outcome metrics() {
  RankedList hand;
  hand.labels = {"T1", "F", "T2"};
  hand.scores = {3, 2, 1};
  const double ap = average_precision_at_k(hand, RelevanceSet({"T1", "T2"}), 3);
  const bool hand_ok = std::abs(ap - 5.0 / 6.0) <= 1e-15;

  std::mt19937_64 rng(1006);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 80;
    RankedList list;
    std::vector<std::string> rel;
    std::vector<bool> flags;
    for (std::size_t i = 0; i < n; ++i) {
      list.labels.push_back("g" + std::to_string(i));
      list.scores.push_back(static_cast<double>(n - i));
      const bool r = rng() % 3 == 0;
      flags.push_back(r);
      if (r) rel.push_back(list.labels.back());
    }
    for (std::size_t e = 0; e < rng() % 4; ++e) rel.push_back("unranked" + std::to_string(e));
    if (rel.empty()) rel.push_back("unranked");
    const std::size_t k = 1 + rng() % 100;
    if (average_precision_at_k(list, RelevanceSet(rel), k) != oracle::average_precision(flags, rel.size(), k))
      ++mismatches;
  }
  return {hand_ok && mismatches == 0,
          "hand case " + std::string(hand_ok ? "5/6" : "wrong") + ", " + std::to_string(mismatches) +
              " mismatches in 1000 random rankings"};
}

Outcome rates() {
  std::mt19937_64 rng(1007);
  Worst err;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng() % 60);
    const auto h = oracle::to_sparse(oracle::random_hermitian(rng, n, 0.2));
    const UnitaryPropagator u(h);
    const auto j = static_cast<NodeId>(rng() % n), k = static_cast<NodeId>(rng() % n);
    const double t = 0.01 + 0.01 * static_cast<double>(rng() % 500), e = 1e-5;
    const double fd =
        (ctqrw::transition_probability(u, j, k, t + e) - ctqrw::transition_probability(u, j, k, t - e)) / (2 * e);
    err.update(std::abs(ctqrw::transition_rate(u, j, k, t) - fd));
  }
  return {err.value <= 1e-6, "max |rate - finite difference| " + sci(err.value)};
}

Outcome conservation() {
  std::mt19937_64 rng(1008);
  Worst classical, quantum;
  double min_entry = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + rng() % 200, 0.04, trial % 3 != 0);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const auto p0 = random_distribution(rng, n);
    const std::vector<Eigen::VectorXd> outs{rwr_steady_state(g, p0, 0.85),
                                            rwr_iterate(normalize_column_stochastic(g, p0), p0, 0.5, rng() % 30),
                                            dtrw_evolve(g, p0, rng() % 30), ctrw_evolve(g, p0, 0.1 * (rng() % 100))};
    for (const auto& p : outs) {
      classical.update(std::abs(p.sum() - 1.0));
      min_entry = std::min(min_entry, p.minCoeff());
    }
    if (g.num_edges() == 0) continue;
    const auto arcs = dtqrw::arc_basis(g);
    const auto psi = oracle::random_state(rng, static_cast<Eigen::Index>(arcs.num_arcs()));
    quantum.update(std::abs(dtqrw::node_probabilities(arcs, dtqrw::evolve(arcs, psi, rng() % 40)).sum() - 1.0));
  }
  return {classical.value <= 1e-10 && quantum.value <= 1e-10 && min_entry >= 0.0,
          "classical sum error " + sci(classical.value) + ", node-probability sum error " + sci(quantum.value)};
}

Outcome determinism(const std::string& cli, const fs::path& src) {
  const fs::path data = src / "data/synthetic";
  const fs::path tmp = fs::temp_directory_path() / "qwalk_acceptance";
  fs::remove_all(tmp);
  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  for (const char* run : {"run1", "run2"}) {
    const std::string cmd = cli + " prioritize --graph " + (data / "network.tsv").string() + " --scores " +
                            (data / "scores.tsv").string() + " --targets " + (data / "targets.tsv").string() +
                            " --rng-seed 7 --out " + (tmp / run).string();
    status |= std::system(cmd.c_str());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool identical = status == 0;
  for (const char* f : {"sweep.csv", "summary.json", "manifest.json", "top_ranking.tsv"})
    identical = identical && slurp(tmp / "run1" / f) == slurp(tmp / "run2" / f);
  bool golden = true;
  for (const char* f : {"sweep.csv", "summary.json", "top_ranking.tsv"})
    golden = golden && slurp(tmp / "run1" / f) == slurp(src / "tests/golden/ctqrw" / f);
  return {identical && golden && seconds < 60.0,
          std::string(identical ? "byte-identical" : "outputs differ") + ", golden " + (golden ? "match" : "MISMATCH") +
              ", two runs in " + std::to_string(seconds).substr(0, 5) + " s"};
}

Outcome cci(const fs::path& src) {
  using L = CciLayer;
  const std::vector<std::pair<std::string, L>> nodes{{"cs", L::SenderCell}, {"l", L::Ligand}, {"l2", L::Ligand},
                                                     {"r", L::Receptor},   {"ct", L::ReceiverCell}};
  auto rejects = [&](std::vector<std::pair<std::string, std::string>> edges) {
    try {
      build_cci_graph(nodes, edges);
    } catch (const ValidationError&) {
      return true;
    }
    return false;
  };
  bool validation = !rejects({{"cs", "l"}, {"l", "r"}, {"r", "ct"}, {"cs", "l2"}, {"l2", "r"}}) &&
                    rejects({{"l", "l2"}}) && rejects({{"cs", "r"}}) && rejects({{"r", "l"}}) &&
                    rejects({{"l", "ct"}}) && rejects({{"ct", "r"}});

  CciConfig c;
  c.nodes_path = src / "data/cci_toy/nodes.tsv";
  c.edges_path = src / "data/cci_toy/edges.tsv";
  c.targets = {"T1"};
  c.epsilon = 0.2;
  c.steps = 5;
  const auto r = run_cci_analysis(c);
  validation = validation && r.graph.graph().num_nodes() == 6;
  const auto& sym = r.symmetrized;
  const auto n = static_cast<NodeId>(sym.num_nodes());
  std::vector<Eigen::VectorXd> classical, quantum;
  for (NodeId v = 0; v < n; ++v) {
    classical.push_back(oracle::dtrw(sym, delta(n, v), 5));
    quantum.push_back(oracle::dtqrw_profile(sym, v, 5));
  }
  Worst dc, dq;
  for (NodeId j = 0; j < n; ++j)
    for (NodeId k = 0; k < n; ++k) {
      dc.update(std::abs(r.dtrw.distances(j, k) - (classical[j] - classical[k]).norm()));
      dq.update(std::abs(r.dtqrw.distances(j, k) - (quantum[j] - quantum[k]).norm()));
    }
  std::set<oracle::LabelArc> got;
  for (const auto& e : r.dtqrw.subgraph.edges())
    got.insert({r.dtqrw.subgraph.label(e.source), r.dtqrw.subgraph.label(e.target)});
  const std::set<oracle::LabelArc> planted{{"S1", "L1"}, {"L1", "R1"}, {"R1", "T1"}};
  const std::vector<NodeId> targets{*r.graph.graph().find("T1")};
  const bool path_ok = got == planted && got == oracle::support_arcs(r.graph, quantum, targets, 0.2);
  return {validation && dc.value <= 1e-10 && dq.value <= 1e-10 && path_ok,
          std::string(validation ? "partition rules ok" : "partition rules FAILED") + ", DTRW distance " +
              sci(dc.value) + ", DTQRW distance " + sci(dq.value) + ", DTQRW subgraph at 0.2 " +
              (path_ok ? "= S1>L1>R1>T1" : "wrong")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <qwalk-cli> <source-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path src = argv[2];

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit;
  };
  const std::vector<Criterion> criteria{
      {1, "unitarity", unitarity, 30.0},
      {2, "oracle equivalence", oracle_equivalence, 0},
      {3, "analytic cases", analytic_cases, 0},
      {4, "real-H symmetry and chirality", real_symmetry_and_chirality, 0},
      {5, "random walk with restart", rwr, 0},
      {6, "ranking metrics", metrics, 0},
      {7, "transition rate", rates, 0},
      {8, "conservation", conservation, 0},
      {9, "end-to-end determinism", [&] { return determinism(cli, src); }, 60.0},
      {10, "CCI pipeline", [&] { return cci(src); }, 0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && seconds >= c.time_limit) {
      o.pass = false;
      o.detail += ", over the time limit";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %2d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
