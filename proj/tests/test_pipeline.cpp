#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "netsom/csv.hpp"
#include "netsom/pipeline.hpp"
#include "netsom/svg.hpp"
#include "netsom/synth.hpp"

using namespace netsom;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_synth_config(const std::string& out_dir, std::uint64_t seed) {
  PipelineConfig cfg;
  SynthConfig synth;
  synth.n_nodes = 500;
  cfg.synth = synth;
  cfg.seed = seed;
  cfg.output_dir = out_dir;
  cfg.node_som.epochs = 30;
  cfg.edge_som.epochs = 30;
  cfg.layout.iterations = 120;
  cfg.cluster_k = 4;  // fixed k keeps the small run fast
  return cfg;
}

}  // namespace

TEST_CASE("pipeline emits every artifact and a parsable report") {
  const std::string dir = "pipe_out_a";
  fs::remove_all(dir);
  const PipelineResult result = run_pipeline(small_synth_config(dir, 11));

  const std::vector<std::string> artifacts = {
      "nodes.csv",          "edges.csv",          "node_features.csv",
      "edge_features.csv",  "som_nodes.json",     "som_edges.json",
      "umatrix.csv",        "cell_clusters.csv",  "entity_clusters.csv",
      "density_matrix.csv", "layout.csv",         "report.json",
      "elites.json",        "umatrix.svg",        "layout.svg",
      "genre_plane.svg",    "dataset_summary.csv", "interclique.csv"};
  for (const auto& name : artifacts) {
    CAPTURE(name);
    CHECK(fs::exists(fs::path(dir) / name));
  }
  // a finished run leaves no stage markers behind
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".partial");
  }

  // report counts must equal direct recounts of the emitted csvs
  const CsvTable nodes = read_csv(dir + "/nodes.csv");
  const CsvTable edges = read_csv(dir + "/edges.csv");
  std::size_t artist_rows = 0;
  const std::size_t c_artist = nodes.column("is_artist");
  for (const auto& row : nodes.rows) {
    if (row[c_artist] == "1") ++artist_rows;
  }
  const std::string report = read_file(dir + "/report.json");
  CHECK(report.find("\"total_profiles\": " + std::to_string(nodes.rows.size())) !=
        std::string::npos);
  CHECK(report.find("\"artist_profiles\": " + std::to_string(artist_rows)) != std::string::npos);
  CHECK(report.find("\"total_links\": " + std::to_string(edges.rows.size())) !=
        std::string::npos);

  // entity clusters cover exactly the artists
  const CsvTable clusters = read_csv(dir + "/entity_clusters.csv");
  CHECK(clusters.rows.size() == artist_rows);

  fs::remove_all(dir);
}

TEST_CASE("pipeline is byte-deterministic given the seed") {
  const std::string dir = "pipe_out_b";
  fs::remove_all(dir);
  const PipelineConfig cfg = small_synth_config(dir, 23);
  run_pipeline(cfg);
  std::map<std::string, std::string> first;
  const std::vector<std::string> names = {"report.json",       "som_nodes.json",
                                          "som_edges.json",    "layout.csv",
                                          "node_features.csv", "density_matrix.csv"};
  for (const auto& name : names) first[name] = read_file(dir + "/" + name);
  run_pipeline(cfg);  // same seed, same directory
  for (const auto& name : names) {
    CAPTURE(name);
    const bool identical = read_file(dir + "/" + name) == first[name];
    CHECK(identical);
  }
  fs::remove_all(dir);
}

TEST_CASE("pipeline input validation") {
  PipelineConfig both = small_synth_config("pipe_out_c", 5);
  both.nodes_path = "x.csv";
  CHECK_THROWS_AS(run_pipeline(both), std::invalid_argument);

  PipelineConfig neither;
  neither.output_dir = "pipe_out_c";
  CHECK_THROWS_AS(run_pipeline(neither), std::invalid_argument);
}

TEST_CASE("a missing input file aborts naming the load stage") {
  PipelineConfig cfg;
  cfg.nodes_path = "does_not_exist_nodes.csv";
  cfg.edges_path = "does_not_exist_edges.csv";
  cfg.output_dir = "pipe_out_d";
  cfg.seed = 1;
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("stage load"), std::runtime_error);
  fs::remove_all("pipe_out_d");
}

TEST_CASE("stage sub-seeds isolate stages from one another") {
  // changing a later stage's setting must leave earlier artifacts untouched
  fs::remove_all("pipe_out_e1");
  fs::remove_all("pipe_out_e2");
  PipelineConfig a = small_synth_config("pipe_out_e1", 31);
  PipelineConfig b = small_synth_config("pipe_out_e2", 31);
  b.cluster_k = 3;           // differs from a's 4
  b.partition_q = 2;         // and a different partitioning
  run_pipeline(a);
  run_pipeline(b);
  for (const char* name : {"nodes.csv", "edges.csv", "node_features.csv", "som_nodes.json"}) {
    CAPTURE(name);
    const bool identical = read_file(std::string("pipe_out_e1/") + name) ==
                           read_file(std::string("pipe_out_e2/") + name);
    CHECK(identical);
  }
  const bool clusters_differ = read_file("pipe_out_e1/entity_clusters.csv") !=
                               read_file("pipe_out_e2/entity_clusters.csv");
  CHECK(clusters_differ);
  fs::remove_all("pipe_out_e1");
  fs::remove_all("pipe_out_e2");
}

TEST_CASE("report numbers recompute from the persisted artifacts") {
  const std::string dir = "pipe_out_f";
  fs::remove_all(dir);
  run_pipeline(small_synth_config(dir, 47));
  const nlohmann::json report = nlohmann::json::parse(read_file(dir + "/report.json"));

  // quantization error from the persisted map and feature matrix
  const SomMap map = som_from_json(read_file(dir + "/som_nodes.json"));
  const FeatureMatrix fm = read_features_csv(dir + "/node_features.csv");
  CHECK(quantization_error(map, fm) ==
        report["node_som"]["quantization_error"].get<double>());

  // density counts from the persisted clusters and edge list
  const auto nodes = read_nodes_csv(dir + "/nodes.csv");
  const auto edge_rows = read_edges_csv(dir + "/edges.csv");
  const DirectedGraph artist =
      induced_artist_subgraph(from_edge_list(nodes, edge_rows).graph);
  const CsvTable ec = read_csv(dir + "/entity_clusters.csv");
  std::vector<int> clusters(artist.node_count(), -1);
  int k = 0;
  for (const auto& row : ec.rows) {
    const int c = static_cast<int>(parse_int(row[1])) - 1;
    clusters[static_cast<std::size_t>(artist.require(row[0]))] = c;
    k = std::max(k, c + 1);
  }
  const DensityMatrix dm = density_matrix(artist, clusters, k);
  const auto reported = report["density"]["counts"].get<std::vector<std::vector<std::uint64_t>>>();
  CHECK(dm.counts == reported);

  // dataset counts from the emitted csvs
  CHECK(report["dataset"]["artist_links"].get<std::size_t>() == artist.edge_count());
  fs::remove_all(dir);
}

TEST_CASE("hexmap rendering") {
  SUBCASE("single constant cell carries a degenerate legend") {
    const std::string svg = render_hexmap_numeric(1, 1, {0.0});
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg.find("min=0.000 max=0.000") != std::string::npos);
    // exactly one hexagon
    std::size_t polygons = 0, pos = 0;
    while ((pos = svg.find("<polygon", pos)) != std::string::npos) {
      ++polygons;
      pos += 8;
    }
    CHECK(polygons == 1);
  }
  SUBCASE("2x2 grid: four hexagons, odd row shifted half a cell") {
    const std::string svg = render_hexmap_numeric(2, 2, {0.0, 1.0, 2.0, 3.0});
    std::size_t polygons = 0, pos = 0;
    std::vector<std::string> points;
    while ((pos = svg.find("<polygon points=\"", pos)) != std::string::npos) {
      ++polygons;
      pos += 17;
      points.push_back(svg.substr(pos, svg.find('"', pos) - pos));
    }
    REQUIRE(polygons == 4);
    // first vertex x of cell (1,0) sits half a hex width right of cell (0,0)
    const double x00 = parse_double(points[0].substr(0, points[0].find(',')));
    const double x10 = parse_double(points[2].substr(0, points[2].find(',')));
    CHECK(x10 - x00 == doctest::Approx(16.0 * std::sqrt(3.0) / 2.0).epsilon(1e-3));
  }
  SUBCASE("identical input renders identical bytes") {
    const std::vector<double> grid = {1.5, -2.0, 0.25, 7.0, 3.0, 4.0};
    CHECK(render_hexmap_numeric(2, 3, grid, "t") == render_hexmap_numeric(2, 3, grid, "t"));
    const std::vector<std::string> cats = {"a", "b", "", "a"};
    CHECK(render_hexmap_categories(2, 2, cats) == render_hexmap_categories(2, 2, cats));
  }
  SUBCASE("categorical legend keys every category") {
    const std::string svg = render_hexmap_categories(1, 3, {"jazz", "electro", "jazz"});
    CHECK(svg.find(">jazz</text>") != std::string::npos);
    CHECK(svg.find(">electro</text>") != std::string::npos);
    CHECK(svg.find("fill=\"none\"") == std::string::npos);
  }
  SUBCASE("empty grid is an error") {
    CHECK_THROWS_AS(render_hexmap_numeric(0, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(render_hexmap_numeric(2, 2, {1.0}), std::invalid_argument);
  }
}

TEST_CASE("pipeline config json round trip") {
  PipelineConfig cfg = small_synth_config("somewhere", 77);
  cfg.alpha = 0.05;
  cfg.elite_percentile = 0.02;
  cfg.cell_cluster_mode = CellClusterMode::distance_rows;
  cfg.edge_indeg_scope = PipelineConfig::EdgeIndegScope::whole;
  cfg.partition_q = 6;
  const std::string text = pipeline_config_to_json(cfg);
  const PipelineConfig back = pipeline_config_from_json(text);
  CHECK(back.seed == 77);
  CHECK(back.alpha == 0.05);
  CHECK(back.elite_percentile == 0.02);
  CHECK(back.cell_cluster_mode == CellClusterMode::distance_rows);
  CHECK(back.edge_indeg_scope == PipelineConfig::EdgeIndegScope::whole);
  CHECK(back.partition_q == 6);
  CHECK(back.synth.has_value());
  CHECK(back.synth->n_nodes == 500);
  CHECK(back.node_som.epochs == 30);
  CHECK(pipeline_config_to_json(back) == text);
}
