#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qwalk/cci.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

namespace {

std::set<std::pair<std::string, std::string>> labeled_edges(const LabeledGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : g.edges()) {
    auto a = g.label(e.source), b = g.label(e.target);
    if (!g.directed() && b < a) std::swap(a, b);
    out.insert({a, b});
  }
  return out;
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("edge list ingestion") {
    auto g = load_edge_list("a\tb\nb\tc", false);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.labels() == std::vector<std::string>{"a", "b", "c"});

    auto d = load_edge_list("a\tb\na\tb\na\ta", false);
    CHECK(d.num_nodes() == 2);
    CHECK(d.num_edges() == 1);
    CHECK(d.ingest_stats().self_loops_dropped == 1);
    CHECK(d.ingest_stats().duplicates_merged == 1);
    CHECK(d.edges()[0].weight == 1.0);
  }

  TEST_CASE("weights, comments and trimming") {
    auto g = load_edge_list("# header\n a \tb\t2\nb\ta\t0.5\r\n\nb\tc\t1\n", false);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.weighted());
    CHECK(g.find("a").has_value());
    CHECK(g.edges()[0].weight == doctest::Approx(2.5));
  }

  TEST_CASE("directed duplicates keep orientation") {
    auto g = load_edge_list("a\tb\nb\ta\n", true);
    CHECK(g.num_edges() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
  }

  TEST_CASE("malformed input") {
    CHECK(error_of([] { load_edge_list("a\tb\nonlyone\n", false); }).find("line 2") != std::string::npos);
    CHECK_THROWS_AS(load_edge_list("a\tb\t-1\n", false), ValidationError);
    CHECK_THROWS_AS(load_edge_list("a\tb\tx\n", false), ValidationError);
    CHECK_THROWS_AS(load_edge_list("a\tb\tnan\n", false), ValidationError);
    CHECK_THROWS_AS(load_edge_list("", false), ValidationError);
    CHECK_THROWS_AS(load_edge_list("# only a comment\n", false), ValidationError);
    CHECK_THROWS_AS(read_edge_list_file("/nonexistent/file.tsv", false), IoError);
  }

  TEST_CASE("adjacency examples") {
    Eigen::MatrixXd k2 = adjacency_matrix(oracle::make_graph(2, {{0, 1}}));
    CHECK(k2 == (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());
    CHECK(Eigen::MatrixXd(adjacency_matrix(oracle::make_graph(3, {}))).isZero(0));
    Eigen::MatrixXd path = adjacency_matrix(oracle::make_graph(3, {{0, 1}, {1, 2}}));
    CHECK(path == (Eigen::MatrixXd(3, 3) << 0, 1, 0, 1, 0, 1, 0, 1, 0).finished());
  }

  TEST_CASE("laplacian examples") {
    Eigen::MatrixXd k2 = laplacian(oracle::make_graph(2, {{0, 1}}));
    CHECK(k2 == (Eigen::MatrixXd(2, 2) << 1, -1, -1, 1).finished());
    Eigen::MatrixXd tri = laplacian(oracle::make_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(tri == (Eigen::MatrixXd(3, 3) << 2, -1, -1, -1, 2, -1, -1, -1, 2).finished());
    Eigen::MatrixXd iso = laplacian(oracle::make_graph(3, {{0, 1}}));
    CHECK(iso.row(2).isZero(0));
    CHECK(iso.col(2).isZero(0));
    CHECK_THROWS_AS(laplacian(oracle::make_graph(2, {{0, 1}}, true)), ValidationError);
  }

  TEST_CASE("components and greatest component") {
    auto two = oracle::make_graph(4, {{0, 1}, {2, 3}});
    auto cc = connected_components(two);
    CHECK(cc.count() == 2);
    CHECK(cc.sizes == std::vector<std::size_t>{2, 2});

    auto g = load_edge_list("z\tb\nc\ta\n", false);  // {z,b} and {c,a}: tie, "a" wins
    auto gc = greatest_component(g);
    CHECK(gc.num_nodes() == 2);
    CHECK(gc.find("a").has_value());
    CHECK(gc.find("c").has_value());

    auto connected = oracle::make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(connected_components(connected).count() == 1);
    CHECK(labeled_edges(greatest_component(connected)) == labeled_edges(connected));

    auto directed = load_edge_list("a\tb\nc\tb\nd\te\n", true);
    auto dc = connected_components(directed);
    CHECK(dc.sizes == std::vector<std::size_t>{3, 2});
    auto stats = graph_stats(directed);
    CHECK(stats.fragments == 2);
    CHECK(stats.gc_nodes == 3);
    CHECK(stats.gc_edges == 2);
  }

  TEST_CASE("symmetric views of random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 5 + rng() % 45;
      auto g = oracle::random_graph(rng, n, 0.08, trial % 2 == 0);
      Eigen::MatrixXd a = adjacency_matrix(g);
      CHECK(a.isApprox(a.transpose(), 0.0));
      CHECK(a.diagonal().isZero(0));
      Eigen::MatrixXd l = laplacian(g);
      CHECK((l * Eigen::VectorXd::Ones(l.cols())).cwiseAbs().maxCoeff() == 0.0);

      auto cc = connected_components(g);
      std::size_t total = 0;
      for (auto s : cc.sizes) total += s;
      CHECK(total == n);
      CHECK(std::is_sorted(cc.sizes.rbegin(), cc.sizes.rend()));
      CHECK(greatest_component(g).num_nodes() == cc.sizes.front());

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
      const auto& ev = es.eigenvalues();
      std::size_t zeros = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) zeros += std::abs(ev[i]) < 1e-9 ? 1 : 0;
      CHECK(zeros == cc.count());
      if (cc.count() == 1) CHECK(std::abs(ev[0]) < 1e-9);
    }
  }

  TEST_CASE("ingestion is invariant under row permutation") {
    std::mt19937_64 rng(5);
    auto g = oracle::random_graph(rng, 40, 0.1);
    std::vector<std::string> rows;
    for (const auto& e : g.edges()) rows.push_back(g.label(e.source) + "\t" + g.label(e.target));
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(rows.begin(), rows.end(), rng);
      std::ostringstream text;
      for (const auto& r : rows) text << r << '\n';
      auto h = load_edge_list(text.str(), false);
      CHECK(h.num_nodes() == g.num_nodes());
      CHECK(labeled_edges(h) == labeled_edges(g));
    }
  }

  TEST_CASE("induced subgraph and symmetrize") {
    auto g = load_edge_list("a\tb\nb\tc\nc\td\n", true);
    std::vector<NodeId> keep{1, 2, 3};
    auto s = induced_subgraph(g, keep);
    CHECK(s.num_nodes() == 3);
    CHECK(s.num_edges() == 2);
    auto u = symmetrize(load_edge_list("a\tb\nb\ta\n", true));
    CHECK_FALSE(u.directed());
    CHECK(u.num_edges() == 1);
  }
}

TEST_SUITE("graph") {
  using L = CciLayer;
  const std::vector<std::pair<std::string, L>> kPath{
      {"cs", L::SenderCell}, {"l", L::Ligand}, {"r", L::Receptor}, {"ct", L::ReceiverCell}};

  TEST_CASE("CCI validation") {
    auto g = build_cci_graph(kPath, {{"cs", "l"}, {"l", "r"}, {"r", "ct"}});
    CHECK(g.graph().num_nodes() == 4);
    CHECK(g.graph().directed());
    CHECK(g.layer_counts() == std::array<std::size_t, 4>{1, 1, 1, 1});

    auto nodes = kPath;
    nodes.push_back({"l2", L::Ligand});
    CHECK(error_of([&] { build_cci_graph(nodes, {{"l", "l2"}}); }).find("l (ligand) -> l2 (ligand): intra-layer edge") != std::string::npos);
    CHECK_THROWS_AS(build_cci_graph(kPath, {{"cs", "r"}}), ValidationError);
    CHECK_THROWS_AS(build_cci_graph(kPath, {{"l", "cs"}}), ValidationError);
    CHECK_THROWS_AS(build_cci_graph(kPath, {{"cs", "nobody"}}), ValidationError);
    auto dup = kPath;
    dup.push_back({"l", L::Receptor});
    CHECK_THROWS_AS(build_cci_graph(dup, {}), ValidationError);
  }

  TEST_CASE("CCI table parsing") {
    auto nodes = parse_cci_nodes("a\tsender\nb\tLigand\nc\treceptor\nd\treceiver\n");
    CHECK(nodes.size() == 4);
    CHECK(nodes[1].second == L::Ligand);
    CHECK_THROWS_AS(parse_cci_nodes("a\tcell\n"), ValidationError);
    CHECK_THROWS_AS(parse_cci_nodes(""), ValidationError);
    auto edges = parse_cci_edges("a\tb\t0.3\n");
    CHECK(edges.size() == 1);
  }

  TEST_CASE("symmetrized view") {
    auto g = build_cci_graph(kPath, {{"cs", "l"}, {"l", "r"}, {"r", "ct"}});
    auto s = symmetrized_view(g);
    CHECK_FALSE(s.directed());
    CHECK(s.num_edges() == 3);
    CHECK(s.has_edge(1, 0));

    auto empty = symmetrized_view(build_cci_graph(kPath, {}));
    CHECK(empty.num_nodes() == 4);
    CHECK(empty.num_edges() == 0);
  }

  TEST_CASE("accepted CCI graphs only have three-hop sender-receiver paths") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::pair<std::string, L>> nodes;
      std::vector<L> layer;
      const std::size_t n = 4 + rng() % 16;
      for (std::size_t i = 0; i < n; ++i) {
        const auto l = static_cast<L>(i < 4 ? i : rng() % 4);
        nodes.push_back({"n" + std::to_string(i), l});
        layer.push_back(l);
      }
      std::vector<std::pair<std::string, std::string>> edges;
      std::vector<std::pair<NodeId, NodeId>> arcs;
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b)
          if (static_cast<int>(layer[b]) == static_cast<int>(layer[a]) + 1 && rng() % 3 == 0) {
            edges.push_back({nodes[a].first, nodes[b].first});
            arcs.emplace_back(a, b);
          }
      CHECK_NOTHROW(build_cci_graph(nodes, edges));
      CHECK(oracle::all_sender_receiver_paths_have_length_three(layer, arcs));
    }
  }

  TEST_CASE("one bad arc on a complete layered graph is rejected and breaks path lengths") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::pair<std::string, L>> nodes;
      std::vector<L> layer;
      for (int l = 0; l < 4; ++l)
        for (std::size_t c = 0; c < 1 + rng() % 3; ++c) {
          nodes.push_back({"n" + std::to_string(nodes.size()), static_cast<L>(l)});
          layer.push_back(static_cast<L>(l));
        }
      const auto n = static_cast<NodeId>(nodes.size());
      std::vector<std::pair<std::string, std::string>> edges;
      std::vector<std::pair<NodeId, NodeId>> arcs;
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b)
          if (static_cast<int>(layer[b]) == static_cast<int>(layer[a]) + 1) {
            edges.push_back({nodes[a].first, nodes[b].first});
            arcs.emplace_back(a, b);
          }
      const bool add_bad = trial % 4 != 0;
      if (add_bad) {
        NodeId a = 0, b = 0;
        do {
          a = static_cast<NodeId>(rng() % n);
          b = static_cast<NodeId>(rng() % n);
        } while (a == b || static_cast<int>(layer[b]) == static_cast<int>(layer[a]) + 1);
        edges.push_back({nodes[a].first, nodes[b].first});
        arcs.emplace_back(a, b);
      }
      bool accepted = true;
      try {
        build_cci_graph(nodes, edges);
      } catch (const ValidationError&) {
        accepted = false;
      }
      CHECK(accepted == !add_bad);
      CHECK(oracle::all_sender_receiver_paths_have_length_three(layer, arcs) == accepted);
    }
  }

  TEST_CASE("a three-arc path with a bad arc is still rejected") {
    // cs -> l -> l2 -> ct has three arcs but two of them break the layer order.
    auto nodes = kPath;
    nodes.push_back({"l2", L::Ligand});
    CHECK_THROWS_AS(build_cci_graph(nodes, {{"cs", "l"}, {"l", "l2"}, {"l2", "ct"}}), ValidationError);
  }
}
