#include "netsom/pipeline.hpp"

#include <filesystem>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netsom/csv.hpp"
#include "netsom/rng.hpp"
#include "netsom/stats.hpp"
#include "netsom/svg.hpp"

namespace netsom {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Full content goes to <path>.partial first; the rename marks completion, so
// an aborted stage leaves only .partial files behind.
void write_artifact(const fs::path& dir, const std::string& name, std::string_view content) {
  const fs::path partial = dir / (name + ".partial");
  write_file(partial.string(), content);
  fs::rename(partial, dir / name);
}

template <class Fn>
auto run_stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + name + ": " + e.what());
  }
}

ordered_json som_config_json(const SomConfig& c) {
  ordered_json j;
  j["rows"] = c.rows;
  j["cols"] = c.cols;
  j["epochs"] = c.epochs;
  j["lr_start"] = c.lr_start;
  j["lr_end"] = c.lr_end;
  j["radius_start"] = c.radius_start;
  j["radius_end"] = c.radius_end;
  j["init"] = c.init == SomConfig::Init::random ? "random" : "data_sample";
  return j;
}

void som_config_from(const nlohmann::json& j, SomConfig& c) {
  if (j.contains("rows")) c.rows = j["rows"].get<int>();
  if (j.contains("cols")) c.cols = j["cols"].get<int>();
  if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
  if (j.contains("lr_start")) c.lr_start = j["lr_start"].get<double>();
  if (j.contains("lr_end")) c.lr_end = j["lr_end"].get<double>();
  if (j.contains("radius_start")) c.radius_start = j["radius_start"].get<double>();
  if (j.contains("radius_end")) c.radius_end = j["radius_end"].get<double>();
  if (j.contains("init")) {
    c.init = j["init"].get<std::string>() == "data_sample" ? SomConfig::Init::data_sample
                                                           : SomConfig::Init::random;
  }
}

ordered_json synth_config_json(const SynthConfig& s) {
  ordered_json j;
  j["n_nodes"] = s.n_nodes;
  j["artist_fraction"] = s.artist_fraction;
  j["out_degree_min"] = s.out_degree_min;
  j["out_degree_max"] = s.out_degree_max;
  j["attachment_exponent"] = s.attachment_exponent;
  j["reciprocity_target"] = s.reciprocity_target;
  j["label_mix"] = s.label_mix;
  j["genre_count"] = s.genre_count;
  j["hits_mu"] = s.hits_mu;
  j["hits_sigma"] = s.hits_sigma;
  j["comments_mu"] = s.comments_mu;
  j["comments_sigma"] = s.comments_sigma;
  j["degree_coupling"] = s.degree_coupling;
  j["seed"] = s.seed;
  return j;
}

void synth_config_from(const nlohmann::json& j, SynthConfig& s) {
  if (j.contains("n_nodes")) s.n_nodes = j["n_nodes"].get<std::size_t>();
  if (j.contains("artist_fraction")) s.artist_fraction = j["artist_fraction"].get<double>();
  if (j.contains("out_degree_min")) s.out_degree_min = j["out_degree_min"].get<int>();
  if (j.contains("out_degree_max")) s.out_degree_max = j["out_degree_max"].get<int>();
  if (j.contains("attachment_exponent")) {
    s.attachment_exponent = j["attachment_exponent"].get<double>();
  }
  if (j.contains("reciprocity_target")) {
    s.reciprocity_target = j["reciprocity_target"].get<double>();
  }
  if (j.contains("label_mix")) s.label_mix = j["label_mix"].get<std::array<double, 3>>();
  if (j.contains("genre_count")) s.genre_count = j["genre_count"].get<int>();
  if (j.contains("hits_mu")) s.hits_mu = j["hits_mu"].get<double>();
  if (j.contains("hits_sigma")) s.hits_sigma = j["hits_sigma"].get<double>();
  if (j.contains("comments_mu")) s.comments_mu = j["comments_mu"].get<double>();
  if (j.contains("comments_sigma")) s.comments_sigma = j["comments_sigma"].get<double>();
  if (j.contains("degree_coupling")) s.degree_coupling = j["degree_coupling"].get<double>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
}

std::string canonical_label(const std::string& label) {
  switch (encode_label(label)) {
    case 3: return "Major";
    case 2: return "Indie";
    default: return "Other";
  }
}

}  // namespace

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  ordered_json j;
  if (cfg.synth) {
    j["synth"] = synth_config_json(*cfg.synth);
  } else {
    j["nodes"] = cfg.nodes_path;
    j["edges"] = cfg.edges_path;
  }
  j["alpha"] = cfg.alpha;
  j["node_som"] = som_config_json(cfg.node_som);
  j["edge_som"] = som_config_json(cfg.edge_som);
  j["cluster_k"] = cfg.cluster_k;
  j["k_range_min"] = cfg.k_range_min;
  j["k_range_max"] = cfg.k_range_max;
  j["cell_cluster_mode"] =
      cfg.cell_cluster_mode == CellClusterMode::prototypes ? "prototypes" : "distance_rows";
  j["elite_percentile"] = cfg.elite_percentile;
  ordered_json lay;
  lay["iterations"] = cfg.layout.iterations;
  lay["step_start"] = cfg.layout.step_start;
  lay["step_end"] = cfg.layout.step_end;
  lay["epsilon"] = cfg.layout.epsilon;
  j["layout"] = std::move(lay);
  j["partition_q"] = cfg.partition_q;
  j["edge_indeg_scope"] =
      cfg.edge_indeg_scope == PipelineConfig::EdgeIndegScope::artist ? "artist" : "whole";
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["write_svg"] = cfg.write_svg;
  return j.dump(2) + "\n";
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PipelineConfig cfg;
  if (j.contains("synth")) {
    SynthConfig s;
    synth_config_from(j["synth"], s);
    cfg.synth = s;
  }
  if (j.contains("nodes")) cfg.nodes_path = j["nodes"].get<std::string>();
  if (j.contains("edges")) cfg.edges_path = j["edges"].get<std::string>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("node_som")) som_config_from(j["node_som"], cfg.node_som);
  if (j.contains("edge_som")) som_config_from(j["edge_som"], cfg.edge_som);
  if (j.contains("cluster_k")) cfg.cluster_k = j["cluster_k"].get<int>();
  if (j.contains("k_range_min")) cfg.k_range_min = j["k_range_min"].get<int>();
  if (j.contains("k_range_max")) cfg.k_range_max = j["k_range_max"].get<int>();
  if (j.contains("cell_cluster_mode")) {
    cfg.cell_cluster_mode = j["cell_cluster_mode"].get<std::string>() == "distance_rows"
                                ? CellClusterMode::distance_rows
                                : CellClusterMode::prototypes;
  }
  if (j.contains("elite_percentile")) cfg.elite_percentile = j["elite_percentile"].get<double>();
  if (j.contains("layout")) {
    const auto& lay = j["layout"];
    if (lay.contains("iterations")) cfg.layout.iterations = lay["iterations"].get<int>();
    if (lay.contains("step_start")) cfg.layout.step_start = lay["step_start"].get<double>();
    if (lay.contains("step_end")) cfg.layout.step_end = lay["step_end"].get<double>();
    if (lay.contains("epsilon")) cfg.layout.epsilon = lay["epsilon"].get<double>();
  }
  if (j.contains("partition_q")) cfg.partition_q = j["partition_q"].get<int>();
  if (j.contains("edge_indeg_scope")) {
    cfg.edge_indeg_scope = j["edge_indeg_scope"].get<std::string>() == "whole"
                               ? PipelineConfig::EdgeIndegScope::whole
                               : PipelineConfig::EdgeIndegScope::artist;
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("write_svg")) cfg.write_svg = j["write_svg"].get<bool>();
  return cfg;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const bool has_files = !cfg.nodes_path.empty() || !cfg.edges_path.empty();
  if (cfg.synth.has_value() == has_files) {
    throw std::invalid_argument(
        "pipeline: exactly one of {node/edge csv paths, synth config} must be given");
  }
  if (!(cfg.elite_percentile > 0.0 && cfg.elite_percentile < 1.0)) {
    throw std::invalid_argument("pipeline: elite_percentile must be in (0,1)");
  }
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  // ---- load / generate --------------------------------------------------
  DirectedGraph g_whole = run_stage("load", [&] {
    if (cfg.synth) {
      SynthConfig s = *cfg.synth;
      s.seed = derive_seed(cfg.seed, "generate");  // all randomness off the global seed
      DirectedGraph g = generate(s);
      write_artifact(dir, "synth_provenance.json", synth_config_json(s).dump(2) + "\n");
      return g;
    }
    auto nodes = read_nodes_csv(cfg.nodes_path);
    auto edges = read_edges_csv(cfg.edges_path);
    return from_edge_list(std::move(nodes), edges).graph;
  });
  write_artifact(dir, "nodes.csv", nodes_csv_string(g_whole));
  write_artifact(dir, "edges.csv", edges_csv_string(g_whole));

  // ---- artist subgraph + node features ----------------------------------
  DirectedGraph g_artist = run_stage("artist-subgraph", [&] {
    return induced_artist_subgraph(g_whole);
  });

  FeatureMatrix node_fm = run_stage("node-features", [&] {
    const PageRankResult pr = pagerank(g_artist);
    FeatureMatrix fm = node_features(g_whole, g_artist, pagerank_by_id(g_artist, pr), cfg.alpha);
    return zscore_all(std::move(fm));
  });
  write_artifact(dir, "node_features.csv", features_csv_string(node_fm));
  write_artifact(dir, "node_features_transforms.json", transforms_json(node_fm));

  // ---- node SOM ----------------------------------------------------------
  SomMap node_map = run_stage("node-som", [&] {
    SomConfig sc = cfg.node_som;
    sc.seed = derive_seed(cfg.seed, "node-som");
    return train(node_fm, sc);
  });
  const UMatrix node_u = u_matrix(node_map);
  write_artifact(dir, "som_nodes.json", som_to_json(node_map));
  write_artifact(dir, "umatrix.csv", grid_csv_string(node_u.rows, node_u.cols, node_u.values));
  for (std::size_t c = 0; c < node_map.dim; ++c) {
    const auto plane = component_plane(node_map, c, node_map.transforms[c]);
    write_artifact(dir, "plane_" + node_map.column_names[c] + ".csv",
                   grid_csv_string(node_map.rows, node_map.cols, plane));
    if (cfg.write_svg) {
      write_artifact(dir, "plane_" + node_map.column_names[c] + ".svg",
                     render_hexmap_numeric(node_map.rows, node_map.cols, plane,
                                           node_map.column_names[c]));
    }
  }
  if (cfg.write_svg) {
    write_artifact(dir, "umatrix.svg",
                   render_hexmap_numeric(node_u.rows, node_u.cols, node_u.values, "U-matrix"));
  }

  // ---- cell clustering ---------------------------------------------------
  const std::vector<CellIndex> node_cells = assign(node_map, node_fm);
  const ClusterModel clusters = run_stage("cluster", [&] {
    return cluster_cells(node_map, node_cells, cfg.cluster_k, derive_seed(cfg.seed, "cluster"),
                         cfg.cell_cluster_mode, cfg.k_range_min, cfg.k_range_max);
  });
  {
    std::string s = "row,col,cluster\n";
    for (int cell = 0; cell < node_map.cell_count(); ++cell) {
      const CellIndex ci = node_map.from_linear(cell);
      s += std::to_string(ci.row) + "," + std::to_string(ci.col) + "," +
           std::to_string(clusters.cell_assignments[static_cast<std::size_t>(cell)] + 1) + "\n";
    }
    write_artifact(dir, "cell_clusters.csv", s);
  }
  {
    std::string s = "id,cluster\n";
    for (std::size_t i = 0; i < node_fm.rows(); ++i) {
      s += node_fm.ids[i] + "," + std::to_string(clusters.entity_assignments[i] + 1) + "\n";
    }
    write_artifact(dir, "entity_clusters.csv", s);
  }
  if (cfg.write_svg) {
    std::vector<std::string> cluster_cats(static_cast<std::size_t>(node_map.cell_count()));
    for (int cell = 0; cell < node_map.cell_count(); ++cell) {
      cluster_cats[static_cast<std::size_t>(cell)] =
          "cluster " + std::to_string(clusters.cell_assignments[static_cast<std::size_t>(cell)] + 1);
    }
    write_artifact(dir, "cell_clusters.svg",
                   render_hexmap_categories(node_map.rows, node_map.cols, cluster_cats,
                                            "cell clusters"));
    std::vector<std::string> genres;
    genres.reserve(g_artist.node_count());
    for (const auto& n : g_artist.nodes()) genres.push_back(n.genre);
    write_artifact(dir, "genre_plane.svg",
                   render_hexmap_categories(
                       node_map.rows, node_map.cols,
                       dominant_category_plane(node_cells, genres, {node_map.rows, node_map.cols}),
                       "dominant genre"));
  }

  // ---- density matrix ----------------------------------------------------
  const DensityMatrix density = run_stage("density", [&] {
    return density_matrix(g_artist, clusters.entity_assignments, clusters.k);
  });
  {
    std::string s = "emitter_cluster,receiver_cluster,count,p\n";
    for (int i = 0; i < density.k; ++i) {
      for (int j = 0; j < density.k; ++j) {
        s += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
             std::to_string(density.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
             "," + fmt_double(density.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
             "\n";
      }
    }
    write_artifact(dir, "density_matrix.csv", s);
  }

  // ---- elite distributions ------------------------------------------------
  const auto elites = run_stage("elites", [&] {
    std::vector<double> hits, indeg;
    std::vector<std::string> labels;
    hits.reserve(g_artist.node_count());
    for (std::size_t i = 0; i < g_artist.node_count(); ++i) {
      const auto& n = g_artist.node(static_cast<int>(i));
      hits.push_back(static_cast<double>(n.hits));
      indeg.push_back(static_cast<double>(in_degree(g_artist, static_cast<int>(i))));
      labels.push_back(canonical_label(n.label));
    }
    return std::pair{elite_distribution(hits, labels, cfg.elite_percentile),
                     elite_distribution(indeg, labels, cfg.elite_percentile)};
  });
  auto elite_json = [](const EliteDistribution& e) {
    ordered_json j;
    j["threshold"] = e.threshold;
    j["elite_size"] = e.elite_size;
    j["elite"] = e.elite;
    j["sample"] = e.sample;
    return j;
  };
  {
    ordered_json j;
    j["hits"] = elite_json(elites.first);
    j["indegree"] = elite_json(elites.second);
    write_artifact(dir, "elites.json", j.dump(2) + "\n");
  }

  // ---- edge features + edge SOM -------------------------------------------
  FeatureMatrix edge_fm = run_stage("edge-features", [&] {
    std::map<std::string, EdgeNodeAttrs> attrs;
    for (std::size_t i = 0; i < g_artist.node_count(); ++i) {
      const auto& n = g_artist.node(static_cast<int>(i));
      EdgeNodeAttrs a;
      a.hits = static_cast<double>(n.hits);
      a.comments = static_cast<double>(n.comments);
      a.indeg = cfg.edge_indeg_scope == PipelineConfig::EdgeIndegScope::artist
                    ? static_cast<double>(in_degree(g_artist, static_cast<int>(i)))
                    : static_cast<double>(in_degree(g_whole, g_whole.require(n.id)));
      attrs.emplace(n.id, a);
    }
    return zscore_all(edge_features(g_artist, attrs));
  });
  write_artifact(dir, "edge_features.csv", features_csv_string(edge_fm));
  write_artifact(dir, "edge_features_transforms.json", transforms_json(edge_fm));

  SomMap edge_map = run_stage("edge-som", [&] {
    SomConfig sc = cfg.edge_som;
    sc.seed = derive_seed(cfg.seed, "edge-som");
    return train(edge_fm, sc);
  });
  const UMatrix edge_u = u_matrix(edge_map);
  write_artifact(dir, "som_edges.json", som_to_json(edge_map));
  write_artifact(dir, "umatrix_edges.csv",
                 grid_csv_string(edge_u.rows, edge_u.cols, edge_u.values));
  if (cfg.write_svg) {
    write_artifact(dir, "umatrix_edges.svg",
                   render_hexmap_numeric(edge_u.rows, edge_u.cols, edge_u.values,
                                         "U-matrix (links)"));
  }

  // ---- layout + spatial partition ------------------------------------------
  const Layout layout = run_stage("layout", [&] {
    LayoutConfig lc = cfg.layout;
    lc.seed = derive_seed(cfg.seed, "layout");
    return linlog_layout(g_artist, lc);
  });
  const Partition partition = run_stage("partition", [&] {
    return spatial_partition(layout, cfg.partition_q, derive_seed(cfg.seed, "partition"));
  });
  {
    std::string s = "id,x,y,partition\n";
    for (std::size_t i = 0; i < g_artist.node_count(); ++i) {
      s += g_artist.node(static_cast<int>(i)).id + "," + fmt_double(layout.coords[i].x) + "," +
           fmt_double(layout.coords[i].y) + "," + std::to_string(partition.labels[i] + 1) + "\n";
    }
    write_artifact(dir, "layout.csv", s);
  }
  if (cfg.write_svg) {
    write_artifact(dir, "layout.svg", render_layout_svg(g_artist, layout, partition));
  }

  // ---- inter-clique fractions ----------------------------------------------
  const auto interclique = run_stage("interclique", [&] {
    return inter_clique_fraction(g_artist, partition, clusters.entity_assignments, clusters.k);
  });

  // ---- report ----------------------------------------------------------------
  const std::string report = run_stage("report", [&] {
    ordered_json doc;

    ordered_json dataset;
    dataset["total_profiles"] = g_whole.node_count();
    dataset["artist_profiles"] = g_artist.node_count();
    dataset["total_links"] = g_whole.edge_count();
    dataset["artist_links"] = g_artist.edge_count();
    dataset["reciprocal_rate"] = reciprocal_edge_fraction(g_whole);
    ordered_json label_counts;
    {
      std::size_t major = 0, indie = 0, other = 0;
      for (const auto& n : g_artist.nodes()) {
        switch (encode_label(n.label)) {
          case 3: ++major; break;
          case 2: ++indie; break;
          default: ++other; break;
        }
      }
      label_counts["major"] = major;
      label_counts["indie"] = indie;
      label_counts["other"] = other;
    }
    dataset["artist_labels"] = std::move(label_counts);
    doc["dataset"] = std::move(dataset);

    auto som_summary = [&](const SomMap& map, const FeatureMatrix& fm) {
      ordered_json j;
      j["rows"] = map.rows;
      j["cols"] = map.cols;
      j["dim"] = map.dim;
      j["quantization_error"] = quantization_error(map, fm);
      return j;
    };
    ordered_json node_som = som_summary(node_map, node_fm);
    node_som["cluster_count"] = clusters.k;
    {
      ordered_json per_cluster = ordered_json::array();
      std::vector<std::size_t> sizes(static_cast<std::size_t>(clusters.k), 0);
      for (int c : clusters.entity_assignments) ++sizes[static_cast<std::size_t>(c)];
      for (int c = 0; c < clusters.k; ++c) {
        ordered_json jc;
        jc["cluster"] = c + 1;
        jc["size"] = sizes[static_cast<std::size_t>(c)];
        ordered_json centroid;
        for (std::size_t col = 0; col < node_map.dim; ++col) {
          // centroids live in z-space; report them in original units
          centroid[node_map.column_names[col]] = inverse_transform(
              clusters.centroids[static_cast<std::size_t>(c)][col], node_map.transforms[col]);
        }
        jc["centroid"] = std::move(centroid);
        per_cluster.push_back(std::move(jc));
      }
      node_som["clusters"] = std::move(per_cluster);
    }
    doc["node_som"] = std::move(node_som);
    doc["edge_som"] = som_summary(edge_map, edge_fm);

    ordered_json dj;
    dj["counts"] = density.counts;
    dj["p"] = density.p;
    ordered_json empty_rows = ordered_json::array();
    for (int i = 0; i < density.k; ++i) {
      if (density.empty_row[static_cast<std::size_t>(i)]) empty_rows.push_back(i + 1);
    }
    dj["empty_rows"] = std::move(empty_rows);
    doc["density"] = std::move(dj);

    ordered_json ej;
    ej["hits"] = elite_json(elites.first);
    ej["indegree"] = elite_json(elites.second);
    doc["elites"] = std::move(ej);

    ordered_json icj = ordered_json::array();
    std::uint64_t cross_total = 0, emitted_total = 0;
    for (const auto& s : interclique) {
      ordered_json row;
      row["cluster"] = s.cluster + 1;
      row["emitted"] = s.emitted;
      row["cross"] = s.cross;
      row["fraction"] = s.fraction;
      row["has_edges"] = s.has_edges;
      icj.push_back(std::move(row));
      cross_total += s.cross;
      emitted_total += s.emitted;
    }
    ordered_json ic;
    ic["partition_count"] = partition.q;
    ic["per_cluster"] = std::move(icj);
    ic["global_fraction"] =
        emitted_total ? static_cast<double>(cross_total) / static_cast<double>(emitted_total) : 0.0;
    doc["interclique"] = std::move(ic);

    ordered_json prov;
    prov["seed"] = cfg.seed;
    prov["version"] = kVersion;
    prov["config"] = nlohmann::ordered_json::parse(pipeline_config_to_json(cfg));
    doc["provenance"] = std::move(prov);

    return doc.dump(2) + "\n";
  });
  write_artifact(dir, "report.json", report);

  // Table mirrors for spreadsheet inspection.
  {
    std::string s = "metric,value\n";
    s += "total_profiles," + std::to_string(g_whole.node_count()) + "\n";
    s += "artist_profiles," + std::to_string(g_artist.node_count()) + "\n";
    s += "total_links," + std::to_string(g_whole.edge_count()) + "\n";
    s += "artist_links," + std::to_string(g_artist.edge_count()) + "\n";
    s += "reciprocal_rate," + fmt_double(reciprocal_edge_fraction(g_whole)) + "\n";
    write_artifact(dir, "dataset_summary.csv", s);
  }
  {
    std::string s = "cluster,emitted,cross,fraction\n";
    for (const auto& st : interclique) {
      s += std::to_string(st.cluster + 1) + "," + std::to_string(st.emitted) + "," +
           std::to_string(st.cross) + "," + fmt_double(st.fraction) + "\n";
    }
    write_artifact(dir, "interclique.csv", s);
  }

  return {report, (dir / "report.json").string()};
}

}  // namespace netsom
