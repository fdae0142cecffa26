// netsom command line: generate synthetic social graphs, crawl samples,
// build feature spaces, train self-organizing maps, cluster, lay out, and
// run the whole analysis pipeline. See README.md for examples.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "netsom/clustering.hpp"
#include "netsom/csv.hpp"
#include "netsom/features.hpp"
#include "netsom/graph.hpp"
#include "netsom/layout.hpp"
#include "netsom/pipeline.hpp"
#include "netsom/rng.hpp"
#include "netsom/som.hpp"
#include "netsom/stats.hpp"
#include "netsom/svg.hpp"
#include "netsom/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

netsom::DirectedGraph load_graph(const std::string& nodes_path, const std::string& edges_path) {
  auto nodes = netsom::read_nodes_csv(nodes_path);
  auto edges = netsom::read_edges_csv(edges_path);
  auto result = netsom::from_edge_list(std::move(nodes), edges);
  if (result.dropped_rows > 0) {
    std::cerr << "note: dropped " << result.dropped_rows
              << " duplicate/self-loop edge rows\n";
  }
  return std::move(result.graph);
}

std::vector<double> numeric_column(const netsom::CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(netsom::parse_double(row[c]));
  return out;
}

std::vector<std::vector<double>> read_square_matrix(const std::string& path) {
  int rows = 0, cols = 0;
  const auto flat = netsom::read_grid_csv(path, rows, cols);
  if (rows != cols) throw std::runtime_error(path + ": matrix is not square");
  std::vector<std::vector<double>> m(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    m[static_cast<std::size_t>(r)].assign(flat.begin() + r * cols, flat.begin() + (r + 1) * cols);
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social graph popularity analysis with self-organizing maps"};
  app.require_subcommand(1);

  // ---- generate ----------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Generate a synthetic scale-free social graph");
  netsom::SynthConfig synth_cfg;
  std::string gen_out = "data";
  gen->add_option("--nodes", synth_cfg.n_nodes, "Node count");
  gen->add_option("--artist-fraction", synth_cfg.artist_fraction, "Artist profile fraction");
  gen->add_option("--out-degree-min", synth_cfg.out_degree_min, "Minimum emitted links");
  gen->add_option("--out-degree-max", synth_cfg.out_degree_max, "Maximum emitted links (<= 40)");
  gen->add_option("--attachment-exponent", synth_cfg.attachment_exponent,
                  "Preferential attachment exponent");
  gen->add_option("--reciprocity", synth_cfg.reciprocity_target, "Reciprocal link rate target");
  gen->add_option("--genres", synth_cfg.genre_count, "Distinct genre count");
  gen->add_option("--seed", synth_cfg.seed, "RNG seed")->required();
  gen->add_option("--output", gen_out, "Output directory");

  // ---- crawl ---------------------------------------------------------------
  auto* crawl = app.add_subcommand("crawl", "BFS-sample a graph along out-links");
  std::string crawl_nodes, crawl_edges, crawl_out = "crawl";
  std::vector<std::string> crawl_seeds;
  int crawl_num_seeds = 7;
  netsom::CrawlConfig crawl_cfg;
  std::uint64_t crawl_seed = 1;
  crawl->add_option("--nodes", crawl_nodes, "Node CSV")->required();
  crawl->add_option("--edges", crawl_edges, "Edge CSV")->required();
  crawl->add_option("--seeds", crawl_seeds, "Seed node ids (comma separated)")->delimiter(',');
  crawl->add_option("--num-seeds", crawl_num_seeds, "Random seed nodes when --seeds absent");
  crawl->add_option("--depth", crawl_cfg.depth, "BFS iterations");
  crawl->add_option("--max-out-degree", crawl_cfg.max_out_degree, "Followed out-links cap");
  crawl->add_option("--seed", crawl_seed, "RNG seed for random seed-node choice");
  crawl->add_option("--output", crawl_out, "Output directory");

  // ---- features -----------------------------------------------------------
  auto* feat = app.add_subcommand("features", "Build node and edge feature matrices");
  std::string feat_nodes, feat_edges, feat_out = "features";
  double feat_alpha = 0.01;
  bool feat_no_zscore = false;
  std::string feat_indeg_scope = "artist";
  feat->add_option("--nodes", feat_nodes, "Node CSV")->required();
  feat->add_option("--edges", feat_edges, "Edge CSV")->required();
  feat->add_option("--alpha", feat_alpha, "Log-gate significance level");
  feat->add_flag("--no-zscore", feat_no_zscore, "Skip final z-scoring");
  feat->add_option("--edge-indeg-scope", feat_indeg_scope,
                   "In-degree for edge gradients: artist|whole");
  feat->add_option("--output", feat_out, "Output directory");

  // ---- train-som -----------------------------------------------------------
  auto* tsom = app.add_subcommand("train-som", "Train a SOM on a feature CSV");
  std::string tsom_input, tsom_out = "som.json", tsom_umatrix;
  netsom::SomConfig tsom_cfg;
  tsom->add_option("--input", tsom_input, "Feature CSV (id + numeric columns)")->required();
  tsom->add_option("--rows", tsom_cfg.rows, "Grid rows (0 = from data size)");
  tsom->add_option("--cols", tsom_cfg.cols, "Grid cols (0 = from data size)");
  tsom->add_option("--epochs", tsom_cfg.epochs, "Training epochs");
  tsom->add_option("--lr-start", tsom_cfg.lr_start, "Initial learning rate");
  tsom->add_option("--lr-end", tsom_cfg.lr_end, "Final learning rate");
  tsom->add_option("--radius-start", tsom_cfg.radius_start, "Initial radius (0 = max(m,p)/2)");
  tsom->add_option("--radius-end", tsom_cfg.radius_end, "Final radius");
  tsom->add_option("--seed", tsom_cfg.seed, "RNG seed")->required();
  tsom->add_option("--output", tsom_out, "Trained map JSON path");
  tsom->add_option("--umatrix", tsom_umatrix, "Also write the U-matrix grid CSV here");

  // ---- cluster --------------------------------------------------------------
  auto* clus = app.add_subcommand("cluster",
                                  "Cluster SOM cells and entities; emits cell and entity "
                                  "clusters, the link density matrix, and elite distributions");
  std::string clus_map, clus_features, clus_nodes, clus_edges, clus_out = "clusters";
  int clus_k = 0;
  int clus_kmin = 2, clus_kmax = 10;
  std::uint64_t clus_seed = 1;
  std::string clus_mode = "prototypes";
  double clus_percentile = 0.01;
  clus->add_option("--map", clus_map, "Trained SOM JSON")->required();
  clus->add_option("--features", clus_features, "Feature CSV the map was trained on")->required();
  clus->add_option("--nodes", clus_nodes, "Node CSV")->required();
  clus->add_option("--edges", clus_edges, "Edge CSV")->required();
  clus->add_option("--k", clus_k, "Cluster count (0 = choose by EM/BIC)");
  clus->add_option("--k-min", clus_kmin, "Auto selection lower bound");
  clus->add_option("--k-max", clus_kmax, "Auto selection upper bound");
  clus->add_option("--mode", clus_mode, "prototypes|distance_rows");
  clus->add_option("--elite-percentile", clus_percentile, "Upper percentile for elites.json");
  clus->add_option("--seed", clus_seed, "RNG seed")->required();
  clus->add_option("--output", clus_out, "Output directory");

  // ---- density ---------------------------------------------------------------
  auto* dens = app.add_subcommand("density", "Inter-cluster link density matrix");
  std::string dens_nodes, dens_edges, dens_clusters, dens_out = "density_matrix.csv";
  dens->add_option("--nodes", dens_nodes, "Node CSV")->required();
  dens->add_option("--edges", dens_edges, "Edge CSV")->required();
  dens->add_option("--clusters", dens_clusters, "entity_clusters.csv (id,cluster)")->required();
  dens->add_option("--output", dens_out, "Output CSV path");

  // ---- layout -----------------------------------------------------------------
  auto* lay = app.add_subcommand("layout", "LinLog layout plus spatial partition");
  std::string lay_nodes, lay_edges, lay_out = "layout";
  netsom::LayoutConfig lay_cfg;
  int lay_q = 0;
  bool lay_svg = false;
  lay->add_option("--nodes", lay_nodes, "Node CSV")->required();
  lay->add_option("--edges", lay_edges, "Edge CSV")->required();
  lay->add_option("--iterations", lay_cfg.iterations, "Descent iterations");
  lay->add_option("--step-start", lay_cfg.step_start, "Initial step size");
  lay->add_option("--step-end", lay_cfg.step_end, "Final step size");
  lay->add_option("--partitions", lay_q, "Partition count (0 = silhouette-chosen)");
  lay->add_option("--seed", lay_cfg.seed, "RNG seed")->required();
  lay->add_flag("--svg", lay_svg, "Also render layout.svg");
  lay->add_option("--output", lay_out, "Output directory");

  // ---- stats ----------------------------------------------------------------
  auto* st = app.add_subcommand("stats", "Normality / matrix correlation tests");
  auto* lill = st->add_subcommand("lilliefors", "Normality test of one CSV column");
  std::string lill_input, lill_column;
  double lill_alpha = 0.01;
  lill->add_option("--input", lill_input, "CSV file")->required();
  lill->add_option("--column", lill_column, "Column name")->required();
  lill->add_option("--alpha", lill_alpha, "Significance level");
  auto* mant = st->add_subcommand("mantel", "Mantel test between two square matrix CSVs");
  std::string mant_m1, mant_m2;
  int mant_perms = 999;
  std::uint64_t mant_seed = 1;
  mant->add_option("--m1", mant_m1, "First matrix (grid CSV)")->required();
  mant->add_option("--m2", mant_m2, "Second matrix (grid CSV)")->required();
  mant->add_option("--permutations", mant_perms, "Permutation count");
  mant->add_option("--seed", mant_seed, "RNG seed");
  auto* corr = st->add_subcommand("correlation", "Correlation matrix of CSV columns");
  std::string corr_input, corr_output;
  std::vector<std::string> corr_columns;
  corr->add_option("--input", corr_input, "CSV file")->required();
  corr->add_option("--columns", corr_columns, "Column names")->required()->delimiter(',');
  corr->add_option("--output", corr_output, "Write the matrix as grid CSV here");
  st->require_subcommand(1);

  // ---- render ------------------------------------------------------------------
  auto* rend = app.add_subcommand("render", "Render a grid CSV as a hex-tiled SVG");
  std::string rend_input, rend_output = "grid.svg", rend_mode = "numeric", rend_title;
  rend->add_option("--input", rend_input, "Grid CSV")->required();
  rend->add_option("--mode", rend_mode, "numeric|categorical");
  rend->add_option("--title", rend_title, "Legend title");
  rend->add_option("--output", rend_output, "SVG path");

  // ---- report ---------------------------------------------------------------------
  auto* rep = app.add_subcommand("report", "Run the full pipeline end to end");
  std::string rep_config;
  std::string rep_nodes, rep_edges, rep_out;
  std::optional<std::uint64_t> rep_seed;
  std::optional<std::size_t> rep_synth_nodes;
  std::optional<int> rep_cluster_k, rep_k_min, rep_k_max, rep_partition_q;
  std::optional<int> rep_node_epochs, rep_edge_epochs, rep_layout_iters;
  std::optional<int> rep_node_rows, rep_node_cols, rep_synth_out_min, rep_synth_out_max;
  std::optional<int> rep_synth_genres;
  std::optional<double> rep_alpha, rep_percentile, rep_step_start, rep_step_end, rep_epsilon;
  std::optional<double> rep_node_lr_start, rep_node_lr_end, rep_node_radius_start,
      rep_node_radius_end;
  std::optional<double> rep_synth_artist_fraction, rep_synth_exponent, rep_synth_reciprocity;
  std::optional<std::string> rep_cell_mode, rep_indeg_scope;
  bool rep_no_svg = false;
  rep->add_option("--config", rep_config, "Pipeline config JSON");
  rep->add_option("--nodes", rep_nodes, "Node CSV (overrides config)");
  rep->add_option("--edges", rep_edges, "Edge CSV (overrides config)");
  rep->add_option("--synth-nodes", rep_synth_nodes, "Generate a synthetic graph of this size");
  rep->add_option("--synth-artist-fraction", rep_synth_artist_fraction,
                  "Synthetic artist profile fraction");
  rep->add_option("--synth-out-degree-min", rep_synth_out_min, "Synthetic emission range min");
  rep->add_option("--synth-out-degree-max", rep_synth_out_max, "Synthetic emission range max");
  rep->add_option("--synth-attachment-exponent", rep_synth_exponent,
                  "Synthetic attachment exponent");
  rep->add_option("--synth-reciprocity", rep_synth_reciprocity,
                  "Synthetic reciprocal link rate target");
  rep->add_option("--synth-genres", rep_synth_genres, "Synthetic genre count");
  rep->add_option("--node-som-rows", rep_node_rows, "Node SOM grid rows (0 = from data)");
  rep->add_option("--node-som-cols", rep_node_cols, "Node SOM grid cols (0 = from data)");
  rep->add_option("--node-som-lr-start", rep_node_lr_start, "Node SOM initial learning rate");
  rep->add_option("--node-som-lr-end", rep_node_lr_end, "Node SOM final learning rate");
  rep->add_option("--node-som-radius-start", rep_node_radius_start, "Node SOM initial radius");
  rep->add_option("--node-som-radius-end", rep_node_radius_end, "Node SOM final radius");
  rep->add_option("--layout-epsilon", rep_epsilon, "LinLog minimum distance guard");
  rep->add_option("--cluster-k", rep_cluster_k, "Fixed cluster count (0 = auto)");
  rep->add_option("--k-range-min", rep_k_min, "Auto cluster-count lower bound");
  rep->add_option("--k-range-max", rep_k_max, "Auto cluster-count upper bound");
  rep->add_option("--cell-cluster-mode", rep_cell_mode, "prototypes|distance_rows");
  rep->add_option("--alpha", rep_alpha, "Log-gate significance level");
  rep->add_option("--elite-percentile", rep_percentile, "Elite percentile");
  rep->add_option("--node-som-epochs", rep_node_epochs, "Node SOM training epochs");
  rep->add_option("--edge-som-epochs", rep_edge_epochs, "Edge SOM training epochs");
  rep->add_option("--layout-iterations", rep_layout_iters, "LinLog descent iterations");
  rep->add_option("--layout-step-start", rep_step_start, "LinLog initial step");
  rep->add_option("--layout-step-end", rep_step_end, "LinLog final step");
  rep->add_option("--partition-q", rep_partition_q, "Spatial partition count (0 = silhouette)");
  rep->add_option("--edge-indeg-scope", rep_indeg_scope,
                  "In-degree for edge gradients: artist|whole");
  rep->add_option("--seed", rep_seed, "Global seed (required)");
  rep->add_option("--output", rep_out, "Output directory");
  rep->add_flag("--no-svg", rep_no_svg, "Skip SVG rendering");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const netsom::DirectedGraph g = netsom::generate(synth_cfg);
      fs::create_directories(gen_out);
      netsom::write_nodes_csv((fs::path(gen_out) / "nodes.csv").string(), g);
      netsom::write_edges_csv((fs::path(gen_out) / "edges.csv").string(), g);
      ordered_json prov;
      prov["n_nodes"] = synth_cfg.n_nodes;
      prov["artist_fraction"] = synth_cfg.artist_fraction;
      prov["out_degree_min"] = synth_cfg.out_degree_min;
      prov["out_degree_max"] = synth_cfg.out_degree_max;
      prov["attachment_exponent"] = synth_cfg.attachment_exponent;
      prov["reciprocity_target"] = synth_cfg.reciprocity_target;
      prov["label_mix"] = synth_cfg.label_mix;
      prov["genre_count"] = synth_cfg.genre_count;
      prov["hits_mu"] = synth_cfg.hits_mu;
      prov["hits_sigma"] = synth_cfg.hits_sigma;
      prov["comments_mu"] = synth_cfg.comments_mu;
      prov["comments_sigma"] = synth_cfg.comments_sigma;
      prov["degree_coupling"] = synth_cfg.degree_coupling;
      prov["seed"] = synth_cfg.seed;
      netsom::write_file((fs::path(gen_out) / "provenance.json").string(), prov.dump(2) + "\n");
      std::cout << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges to "
                << gen_out << "\n";
    } else if (*crawl) {
      const netsom::DirectedGraph g = load_graph(crawl_nodes, crawl_edges);
      if (crawl_seeds.empty()) {
        netsom::Rng rng(crawl_seed);
        std::vector<int> picks;
        while (picks.size() < static_cast<std::size_t>(crawl_num_seeds) &&
               picks.size() < g.node_count()) {
          const int idx = static_cast<int>(rng.below(g.node_count()));
          if (std::find(picks.begin(), picks.end(), idx) == picks.end()) picks.push_back(idx);
        }
        for (int idx : picks) crawl_cfg.seeds.push_back(g.node(idx).id);
      } else {
        crawl_cfg.seeds = crawl_seeds;
      }
      const netsom::DirectedGraph sample = netsom::bfs_crawl(g, crawl_cfg);
      fs::create_directories(crawl_out);
      netsom::write_nodes_csv((fs::path(crawl_out) / "nodes.csv").string(), sample);
      netsom::write_edges_csv((fs::path(crawl_out) / "edges.csv").string(), sample);
      std::cout << "crawled " << sample.node_count() << " of " << g.node_count() << " nodes, "
                << sample.edge_count() << " edges\n";
    } else if (*feat) {
      const netsom::DirectedGraph g = load_graph(feat_nodes, feat_edges);
      const netsom::DirectedGraph artist = netsom::induced_artist_subgraph(g);
      const netsom::PageRankResult pr = netsom::pagerank(artist);
      netsom::FeatureMatrix nf =
          netsom::node_features(g, artist, netsom::pagerank_by_id(artist, pr), feat_alpha);
      std::map<std::string, netsom::EdgeNodeAttrs> attrs;
      for (std::size_t i = 0; i < artist.node_count(); ++i) {
        const auto& n = artist.node(static_cast<int>(i));
        netsom::EdgeNodeAttrs a;
        a.hits = static_cast<double>(n.hits);
        a.comments = static_cast<double>(n.comments);
        a.indeg = feat_indeg_scope == "whole"
                      ? static_cast<double>(netsom::in_degree(g, n.id))
                      : static_cast<double>(netsom::in_degree(artist, static_cast<int>(i)));
        attrs.emplace(n.id, a);
      }
      netsom::FeatureMatrix ef = netsom::edge_features(artist, attrs);
      if (!feat_no_zscore) {
        nf = netsom::zscore_all(std::move(nf));
        ef = netsom::zscore_all(std::move(ef));
      }
      fs::create_directories(feat_out);
      netsom::write_features_csv((fs::path(feat_out) / "node_features.csv").string(), nf);
      netsom::write_file((fs::path(feat_out) / "node_features_transforms.json").string(),
                         netsom::transforms_json(nf));
      netsom::write_features_csv((fs::path(feat_out) / "edge_features.csv").string(), ef);
      netsom::write_file((fs::path(feat_out) / "edge_features_transforms.json").string(),
                         netsom::transforms_json(ef));
      std::cout << "wrote " << nf.rows() << " node rows, " << ef.rows() << " edge rows to "
                << feat_out << "\n";
    } else if (*tsom) {
      const netsom::FeatureMatrix fm = netsom::read_features_csv(tsom_input);
      const netsom::SomMap map = netsom::train(fm, tsom_cfg);
      netsom::write_file(tsom_out, netsom::som_to_json(map));
      if (!tsom_umatrix.empty()) {
        const netsom::UMatrix u = netsom::u_matrix(map);
        netsom::write_grid_csv(tsom_umatrix, u.rows, u.cols, u.values);
      }
      std::cout << "trained " << map.rows << "x" << map.cols << " map, quantization error "
                << netsom::quantization_error(map, fm) << "\n";
    } else if (*clus) {
      const netsom::SomMap map = netsom::som_from_json(netsom::read_file(clus_map));
      const netsom::FeatureMatrix fm = netsom::read_features_csv(clus_features);
      const auto cells = netsom::assign(map, fm);
      const auto mode = clus_mode == "distance_rows" ? netsom::CellClusterMode::distance_rows
                                                     : netsom::CellClusterMode::prototypes;
      const netsom::ClusterModel model =
          netsom::cluster_cells(map, cells, clus_k, clus_seed, mode, clus_kmin, clus_kmax);
      fs::create_directories(clus_out);
      {
        std::string s = "row,col,cluster\n";
        for (int cell = 0; cell < map.cell_count(); ++cell) {
          const netsom::CellIndex ci = map.from_linear(cell);
          s += std::to_string(ci.row) + "," + std::to_string(ci.col) + "," +
               std::to_string(model.cell_assignments[static_cast<std::size_t>(cell)] + 1) + "\n";
        }
        netsom::write_file((fs::path(clus_out) / "cell_clusters.csv").string(), s);
      }
      {
        std::string s = "id,cluster\n";
        for (std::size_t i = 0; i < fm.rows(); ++i) {
          s += fm.ids[i] + "," + std::to_string(model.entity_assignments[i] + 1) + "\n";
        }
        netsom::write_file((fs::path(clus_out) / "entity_clusters.csv").string(), s);
      }
      // the clusters cover the artist network; density and elites live there
      const netsom::DirectedGraph artist =
          netsom::induced_artist_subgraph(load_graph(clus_nodes, clus_edges));
      std::vector<int> by_node(artist.node_count(), -1);
      for (std::size_t i = 0; i < fm.rows(); ++i) {
        by_node[static_cast<std::size_t>(artist.require(fm.ids[i]))] =
            model.entity_assignments[i];
      }
      const netsom::DensityMatrix dm = netsom::density_matrix(artist, by_node, model.k);
      {
        std::string s = "emitter_cluster,receiver_cluster,count,p\n";
        for (int i = 0; i < dm.k; ++i) {
          for (int j = 0; j < dm.k; ++j) {
            s += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                 std::to_string(
                     dm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
                 "," +
                 netsom::fmt_double(
                     dm.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
                 "\n";
          }
        }
        netsom::write_file((fs::path(clus_out) / "density_matrix.csv").string(), s);
      }
      {
        std::vector<double> hits, indeg;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < artist.node_count(); ++i) {
          const auto& n = artist.node(static_cast<int>(i));
          hits.push_back(static_cast<double>(n.hits));
          indeg.push_back(static_cast<double>(netsom::in_degree(artist, static_cast<int>(i))));
          labels.push_back(netsom::encode_label(n.label) == 3   ? "Major"
                           : netsom::encode_label(n.label) == 2 ? "Indie"
                                                                : "Other");
        }
        auto elite_json = [](const netsom::EliteDistribution& e) {
          ordered_json j;
          j["threshold"] = e.threshold;
          j["elite_size"] = e.elite_size;
          j["elite"] = e.elite;
          j["sample"] = e.sample;
          return j;
        };
        ordered_json doc;
        doc["hits"] = elite_json(netsom::elite_distribution(hits, labels, clus_percentile));
        doc["indegree"] = elite_json(netsom::elite_distribution(indeg, labels, clus_percentile));
        netsom::write_file((fs::path(clus_out) / "elites.json").string(), doc.dump(2) + "\n");
      }
      std::cout << "k=" << model.k << ", wrote clusters, density matrix, and elites to "
                << clus_out << "\n";
    } else if (*dens) {
      // link density over the artist network, which is what the clusters cover
      const netsom::DirectedGraph artist =
          netsom::induced_artist_subgraph(load_graph(dens_nodes, dens_edges));
      const netsom::CsvTable t = netsom::read_csv(dens_clusters);
      const std::size_t c_id = t.column("id");
      const std::size_t c_cluster = t.column("cluster");
      std::vector<int> clusters(artist.node_count(), -1);
      int k = 0;
      for (const auto& row : t.rows) {
        const int idx = artist.require(row[c_id]);
        const int c = static_cast<int>(netsom::parse_int(row[c_cluster])) - 1;
        clusters[static_cast<std::size_t>(idx)] = c;
        k = std::max(k, c + 1);
      }
      const netsom::DensityMatrix dm = netsom::density_matrix(artist, clusters, k);
      std::string s = "emitter_cluster,receiver_cluster,count,p\n";
      for (int i = 0; i < dm.k; ++i) {
        for (int j = 0; j < dm.k; ++j) {
          s += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
               std::to_string(dm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
               "," +
               netsom::fmt_double(dm.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
               "\n";
        }
      }
      netsom::write_file(dens_out, s);
      std::cout << "wrote " << dm.k << "x" << dm.k << " density matrix to " << dens_out << "\n";
    } else if (*lay) {
      const netsom::DirectedGraph g = load_graph(lay_nodes, lay_edges);
      const netsom::Layout layout = netsom::linlog_layout(g, lay_cfg);
      const netsom::Partition part = netsom::spatial_partition(layout, lay_q, lay_cfg.seed);
      fs::create_directories(lay_out);
      std::string s = "id,x,y,partition\n";
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        s += g.node(static_cast<int>(i)).id + "," + netsom::fmt_double(layout.coords[i].x) + "," +
             netsom::fmt_double(layout.coords[i].y) + "," + std::to_string(part.labels[i] + 1) +
             "\n";
      }
      netsom::write_file((fs::path(lay_out) / "layout.csv").string(), s);
      if (lay_svg) {
        netsom::write_file((fs::path(lay_out) / "layout.svg").string(),
                           netsom::render_layout_svg(g, layout, part));
      }
      std::cout << "final energy " << layout.energy << ", " << part.q << " partitions\n";
    } else if (*st) {
      if (*lill) {
        const netsom::CsvTable t = netsom::read_csv(lill_input);
        const auto column = numeric_column(t, lill_column);
        const netsom::NormalityVerdict v = netsom::lilliefors_test(column, lill_alpha);
        ordered_json j;
        j["statistic"] = v.statistic;
        j["p_value"] = v.p_value;
        j["reject"] = v.reject;
        std::cout << j.dump(2) << "\n";
      } else if (*mant) {
        const auto m1 = read_square_matrix(mant_m1);
        const auto m2 = read_square_matrix(mant_m2);
        const netsom::MantelResult r = netsom::mantel_test(m1, m2, mant_perms, mant_seed);
        ordered_json j;
        j["r"] = r.r;
        j["p_bilateral"] = r.p_bilateral;
        j["permutations"] = r.permutations;
        std::cout << j.dump(2) << "\n";
      } else if (*corr) {
        const netsom::CsvTable t = netsom::read_csv(corr_input);
        std::vector<std::vector<double>> cols;
        for (const auto& name : corr_columns) cols.push_back(numeric_column(t, name));
        const netsom::CorrelationMatrix cm = netsom::correlation_matrix(corr_columns, cols);
        if (!corr_output.empty()) {
          std::vector<double> flat;
          for (const auto& row : cm.values) flat.insert(flat.end(), row.begin(), row.end());
          netsom::write_grid_csv(corr_output, static_cast<int>(cm.values.size()),
                                 static_cast<int>(cm.values.size()), flat);
        }
        ordered_json j;
        j["names"] = cm.names;
        j["values"] = cm.values;
        std::cout << j.dump(2) << "\n";
      }
    } else if (*rend) {
      int rows = 0, cols = 0;
      if (rend_mode == "categorical") {
        const std::string text = netsom::read_file(rend_input);
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (start < text.size()) {
          std::size_t end = text.find('\n', start);
          if (end == std::string::npos) end = text.size();
          std::string line = text.substr(start, end - start);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) {
            ++rows;
            int count = 1;
            std::size_t from = 0, comma;
            while ((comma = line.find(',', from)) != std::string::npos) {
              cells.push_back(line.substr(from, comma - from));
              from = comma + 1;
              ++count;
            }
            cells.push_back(line.substr(from));
            cols = count;
          }
          start = end + 1;
        }
        netsom::write_file(rend_output,
                           netsom::render_hexmap_categories(rows, cols, cells, rend_title));
      } else {
        const auto values = netsom::read_grid_csv(rend_input, rows, cols);
        netsom::write_file(rend_output,
                           netsom::render_hexmap_numeric(rows, cols, values, rend_title));
      }
      std::cout << "wrote " << rend_output << "\n";
    } else if (*rep) {
      netsom::PipelineConfig cfg;
      bool seed_in_config = false;
      if (!rep_config.empty()) {
        const std::string text = netsom::read_file(rep_config);
        cfg = netsom::pipeline_config_from_json(text);
        seed_in_config = nlohmann::json::parse(text).contains("seed");
      }
      if (!rep_nodes.empty()) cfg.nodes_path = rep_nodes;
      if (!rep_edges.empty()) cfg.edges_path = rep_edges;
      if (rep_synth_nodes || rep_synth_artist_fraction || rep_synth_out_min ||
          rep_synth_out_max || rep_synth_exponent || rep_synth_reciprocity ||
          rep_synth_genres) {
        netsom::SynthConfig s = cfg.synth.value_or(netsom::SynthConfig{});
        if (rep_synth_nodes) s.n_nodes = *rep_synth_nodes;
        if (rep_synth_artist_fraction) s.artist_fraction = *rep_synth_artist_fraction;
        if (rep_synth_out_min) s.out_degree_min = *rep_synth_out_min;
        if (rep_synth_out_max) s.out_degree_max = *rep_synth_out_max;
        if (rep_synth_exponent) s.attachment_exponent = *rep_synth_exponent;
        if (rep_synth_reciprocity) s.reciprocity_target = *rep_synth_reciprocity;
        if (rep_synth_genres) s.genre_count = *rep_synth_genres;
        cfg.synth = s;
      }
      if (rep_cluster_k) cfg.cluster_k = *rep_cluster_k;
      if (rep_k_min) cfg.k_range_min = *rep_k_min;
      if (rep_k_max) cfg.k_range_max = *rep_k_max;
      if (rep_cell_mode) {
        cfg.cell_cluster_mode = *rep_cell_mode == "distance_rows"
                                    ? netsom::CellClusterMode::distance_rows
                                    : netsom::CellClusterMode::prototypes;
      }
      if (rep_alpha) cfg.alpha = *rep_alpha;
      if (rep_percentile) cfg.elite_percentile = *rep_percentile;
      if (rep_node_epochs) cfg.node_som.epochs = *rep_node_epochs;
      if (rep_node_rows) cfg.node_som.rows = *rep_node_rows;
      if (rep_node_cols) cfg.node_som.cols = *rep_node_cols;
      if (rep_node_lr_start) cfg.node_som.lr_start = *rep_node_lr_start;
      if (rep_node_lr_end) cfg.node_som.lr_end = *rep_node_lr_end;
      if (rep_node_radius_start) cfg.node_som.radius_start = *rep_node_radius_start;
      if (rep_node_radius_end) cfg.node_som.radius_end = *rep_node_radius_end;
      if (rep_edge_epochs) cfg.edge_som.epochs = *rep_edge_epochs;
      if (rep_layout_iters) cfg.layout.iterations = *rep_layout_iters;
      if (rep_step_start) cfg.layout.step_start = *rep_step_start;
      if (rep_step_end) cfg.layout.step_end = *rep_step_end;
      if (rep_epsilon) cfg.layout.epsilon = *rep_epsilon;
      if (rep_partition_q) cfg.partition_q = *rep_partition_q;
      if (rep_indeg_scope) {
        cfg.edge_indeg_scope = *rep_indeg_scope == "whole"
                                   ? netsom::PipelineConfig::EdgeIndegScope::whole
                                   : netsom::PipelineConfig::EdgeIndegScope::artist;
      }
      if (!rep_out.empty()) cfg.output_dir = rep_out;
      if (rep_no_svg) cfg.write_svg = false;
      if (rep_seed) {
        cfg.seed = *rep_seed;
      } else if (!seed_in_config) {
        std::cerr << "report: --seed is required (or a 'seed' field in --config)\n";
        return 2;
      }
      const netsom::PipelineResult result = netsom::run_pipeline(cfg);
      std::cout << "report written to " << result.report_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
