#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "netsom/features.hpp"
#include "netsom/graph.hpp"
#include "netsom/rng.hpp"
#include "netsom/stats.hpp"
#include "test_support.hpp"

using namespace netsom;
using test_support::make_nodes;

TEST_CASE("encode_label") {
  CHECK(encode_label("Major") == 3);
  CHECK(encode_label("indie") == 2);
  CHECK(encode_label("") == 1);
  CHECK(encode_label("MAJOR") == 3);
  CHECK(encode_label("  Indie  ") == 2);
  CHECK(encode_label("self-released") == 1);
}

TEST_CASE("gradient formula") {
  CHECK(gradient(5.0, 5.0) == 0.0);
  CHECK(gradient(3.0, 1.0) == doctest::Approx(0.5));
  CHECK(gradient(0.0, 0.0) == 0.0);
  CHECK(gradient(1.0, 0.0) == 1.0);
  CHECK(gradient(0.0, 1.0) == -1.0);
  CHECK_THROWS_AS(gradient(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(gradient(2.0, -1.0), std::invalid_argument);
}

TEST_CASE("gradient is antisymmetric, bounded, and scale invariant") {
  Rng rng(97);
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform(0.0, 1e6);
    const double b = rng.uniform(0.0, 1e6);
    const double g = gradient(a, b);
    CHECK(g == -gradient(b, a));
    CHECK(std::abs(g) <= 1.0);
    for (double k : {0.5, 2.0, 1000.0}) {
      CHECK(gradient(k * a, k * b) == doctest::Approx(g).epsilon(1e-12));
    }
  }
}

TEST_CASE("node_features of a single isolated artist") {
  auto nodes = make_nodes(1);
  nodes[0].hits = 120;
  nodes[0].comments = 7;
  nodes[0].label = "Indie";
  const auto g = from_edge_list(nodes, {}).graph;
  const auto artist = induced_artist_subgraph(g);
  const auto pr = pagerank_by_id(artist, pagerank(artist));
  const auto fm = node_features(g, artist, pr, 0.01);

  REQUIRE(fm.rows() == 1);
  REQUIRE(fm.cols() == 7);
  const std::vector<std::string> expected_cols = {
      "hits", "comments", "indeg_whole", "indeg_artist", "pagerank", "reciprocity", "label"};
  CHECK(fm.columns == expected_cols);
  // a single sample cannot be tested for normality, so the gate stays closed
  CHECK(fm.at(0, 0) == 120.0);
  CHECK(fm.at(0, 1) == 7.0);
  CHECK(fm.at(0, 2) == 0.0);
  CHECK(fm.at(0, 3) == 0.0);
  CHECK(fm.at(0, 4) == doctest::Approx(1.0));
  CHECK(fm.at(0, 5) == 0.0);
  CHECK(fm.at(0, 6) == 2.0);
}

TEST_CASE("node_features errors when pagerank misses an artist") {
  const auto g = test_support::er_graph(5, 0.3, 101);
  const auto artist = induced_artist_subgraph(g);
  std::map<std::string, double> pr = pagerank_by_id(artist, pagerank(artist));
  pr.erase("v3");
  CHECK_THROWS_WITH_AS(node_features(g, artist, pr, 0.01), doctest::Contains("v3"),
                       std::invalid_argument);
}

TEST_CASE("node_features in-degree columns match brute-force counts pre-transform") {
  // mixed artist/fan graph so whole and artist in-degrees differ
  Rng rng(103);
  auto nodes = make_nodes(120);
  for (auto& n : nodes) {
    n.is_artist = rng.uniform01() < 0.6;
    n.hits = static_cast<std::uint64_t>(rng.lognormal(4.0, 1.5));
    n.comments = static_cast<std::uint64_t>(rng.lognormal(2.0, 1.0));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (int u = 0; u < 120; ++u) {
    for (int v = 0; v < 120; ++v) {
      if (u != v && rng.uniform01() < 0.05) {
        edges.emplace_back(nodes[static_cast<std::size_t>(u)].id,
                           nodes[static_cast<std::size_t>(v)].id);
      }
    }
  }
  const auto g = from_edge_list(nodes, edges).graph;
  const auto artist = induced_artist_subgraph(g);
  const auto pr = pagerank_by_id(artist, pagerank(artist));
  const auto fm = node_features(g, artist, pr, 0.01);
  CHECK(fm.rows() == artist.node_count());

  // brute-force predecessor counts straight off the edge list
  std::map<std::string, std::size_t> whole_count, artist_count;
  for (const auto& [from, to] : test_support::edge_set(g)) {
    ++whole_count[to];
    const int fi = g.index_of(from);
    const int ti = g.index_of(to);
    if (g.node(fi).is_artist && g.node(ti).is_artist) ++artist_count[to];
  }
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    const double w = inverse_transform(fm.at(r, 2), fm.transforms[2]);
    const double a = inverse_transform(fm.at(r, 3), fm.transforms[3]);
    CHECK(w == doctest::Approx(static_cast<double>(whole_count[fm.ids[r]])).epsilon(1e-9));
    CHECK(a == doctest::Approx(static_cast<double>(artist_count[fm.ids[r]])).epsilon(1e-9));
  }
  // label codes stay in {1,2,3}
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    const double code = fm.at(r, 6);
    CHECK((code == 1.0 || code == 2.0 || code == 3.0));
  }
}

TEST_CASE("edge_features of a fully symmetric pair") {
  auto nodes = make_nodes(2);
  nodes[0].genre = nodes[1].genre = "jazz";
  nodes[0].hits = nodes[1].hits = 50;
  nodes[0].comments = nodes[1].comments = 5;
  const auto g = from_edge_list(nodes, {{"v0", "v1"}, {"v1", "v0"}}).graph;
  std::map<std::string, EdgeNodeAttrs> attrs{{"v0", {50.0, 5.0, 1.0}}, {"v1", {50.0, 5.0, 1.0}}};
  const auto fm = edge_features(g, attrs);
  REQUIRE(fm.rows() == 2);
  const std::vector<std::string> expected_cols = {
      "hits_grad", "comments_grad", "indeg_grad", "common_pred",
      "common_succ", "genre_same", "reciprocal"};
  CHECK(fm.columns == expected_cols);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(fm.at(r, 0) == 0.0);
    CHECK(fm.at(r, 1) == 0.0);
    CHECK(fm.at(r, 2) == 0.0);
    CHECK(fm.at(r, 5) == 1.0);
    CHECK(fm.at(r, 6) == 1.0);
  }
}

TEST_CASE("edge_features of a one-way link with nothing shared") {
  auto nodes = make_nodes(2);
  nodes[0].genre = "jazz";
  nodes[1].genre = "electro";
  const auto g = from_edge_list(nodes, {{"v0", "v1"}}).graph;
  std::map<std::string, EdgeNodeAttrs> attrs{{"v0", {10.0, 1.0, 0.0}}, {"v1", {20.0, 2.0, 1.0}}};
  const auto fm = edge_features(g, attrs);
  REQUIRE(fm.rows() == 1);
  CHECK(fm.ids[0] == "v0->v1");
  CHECK(fm.at(0, 3) == 0.0);  // common_pred
  CHECK(fm.at(0, 4) == 0.0);  // common_succ
  CHECK(fm.at(0, 5) == 0.0);  // genre_same
  CHECK(fm.at(0, 6) == 0.0);  // reciprocal
}

TEST_CASE("edge_features errors name the unattributed node") {
  const auto g = from_edge_list(make_nodes(2), {{"v0", "v1"}}).graph;
  std::map<std::string, EdgeNodeAttrs> attrs{{"v0", {1.0, 1.0, 1.0}}};
  CHECK_THROWS_WITH_AS(edge_features(g, attrs), doctest::Contains("v1"), std::invalid_argument);
}

TEST_CASE("edge gradient columns are antisymmetric across reciprocal pairs") {
  const auto g = test_support::er_graph(30, 0.15, 107);
  std::map<std::string, EdgeNodeAttrs> attrs;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.node(static_cast<int>(i));
    attrs.emplace(n.id, EdgeNodeAttrs{static_cast<double>(n.hits),
                                      static_cast<double>(n.comments),
                                      static_cast<double>(in_degree(g, static_cast<int>(i)))});
  }
  const auto fm = edge_features(g, attrs);
  CHECK(fm.rows() == g.edge_count());

  std::map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < fm.rows(); ++r) row_of[fm.ids[r]] = r;
  int reciprocal_pairs = 0;
  g.for_each_edge([&](int u, int v) {
    if (!g.has_edge(v, u)) return;
    ++reciprocal_pairs;
    const std::size_t fwd = row_of.at(g.node(u).id + "->" + g.node(v).id);
    const std::size_t rev = row_of.at(g.node(v).id + "->" + g.node(u).id);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(fm.at(fwd, c) == doctest::Approx(-fm.at(rev, c)).epsilon(1e-12));
    }
    // set intersections are symmetric
    CHECK(fm.at(fwd, 3) == fm.at(rev, 3));
    CHECK(fm.at(fwd, 4) == fm.at(rev, 4));
  });
  CHECK(reciprocal_pairs > 0);
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    CHECK((fm.at(r, 5) == 0.0 || fm.at(r, 5) == 1.0));
    CHECK((fm.at(r, 6) == 0.0 || fm.at(r, 6) == 1.0));
  }
}

TEST_CASE("zscore standardizes and records an invertible transform") {
  auto fm = test_support::make_matrix({{1.0}, {2.0}, {3.0}}, {"x"});
  fm = zscore(std::move(fm), {"x"});
  CHECK(mean_of(fm.column_values(0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sample_sd(fm.column_values(0)) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(fm.transforms[0].size() == 2);
  CHECK(fm.transforms[0][1].kind == ColumnTransform::Kind::zscore);
  CHECK(fm.transforms[0][1].mean == doctest::Approx(2.0));
  CHECK(fm.transforms[0][1].sd == doctest::Approx(1.0));
}

TEST_CASE("zscore is idempotent up to numerical noise") {
  Rng rng(109);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({rng.normal(5.0, 3.0)});
  auto first = zscore(test_support::make_matrix(rows, {"x"}), {"x"});
  auto second = zscore(first, {"x"});
  for (std::size_t r = 0; r < first.rows(); ++r) {
    CHECK(second.at(r, 0) == doctest::Approx(first.at(r, 0)).epsilon(1e-12));
  }
}

TEST_CASE("zscore inverse transform recovers the input") {
  Rng rng(113);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 60; ++i) rows.push_back({rng.uniform(0.0, 100.0), rng.normal()});
  const auto original = test_support::make_matrix(rows, {"a", "b"});
  const auto scaled = zscore_all(original);
  for (std::size_t r = 0; r < original.rows(); ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(inverse_transform(scaled.at(r, c), scaled.transforms[c]) ==
            doctest::Approx(original.at(r, c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("zscore rejects constant columns by name") {
  auto fm = test_support::make_matrix({{1.0, 7.0}, {2.0, 7.0}}, {"x", "flat"});
  CHECK_THROWS_WITH_AS(zscore(std::move(fm), {"flat"}), doctest::Contains("flat"),
                       std::invalid_argument);
}

TEST_CASE("log1p then zscore chain inverts in the right order") {
  std::vector<std::vector<double>> rows = {{0.0}, {10.0}, {100.0}, {1000.0}};
  auto fm = test_support::make_matrix(rows, {"x"});
  for (std::size_t r = 0; r < fm.rows(); ++r) fm.at(r, 0) = std::log1p(fm.at(r, 0));
  fm.transforms[0] = {{ColumnTransform::Kind::log1p}};
  fm = zscore(std::move(fm), {"x"});
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    CHECK(inverse_transform(fm.at(r, 0), fm.transforms[0]) ==
          doctest::Approx(rows[r][0]).epsilon(1e-9));
  }
}

TEST_CASE("features csv round trip") {
  Rng rng(127);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({rng.normal(), rng.uniform(0.0, 9.0)});
  const auto fm = test_support::make_matrix(rows, {"a", "b"});
  const std::string path = "test_features_roundtrip.csv";
  write_features_csv(path, fm);
  const auto back = read_features_csv(path);
  CHECK(back.ids == fm.ids);
  CHECK(back.columns == fm.columns);
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    for (std::size_t c = 0; c < fm.cols(); ++c) {
      CHECK(back.at(r, c) == fm.at(r, c));  // shortest round-trip formatting is exact
    }
  }
  std::filesystem::remove(path);
}
