#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netsom/clustering.hpp"
#include "netsom/layout.hpp"
#include "netsom/som.hpp"
#include "netsom/synth.hpp"

namespace netsom {

// Full run configuration. Exactly one of {node/edge paths, synth} feeds the
// pipeline.
struct PipelineConfig {
  std::string nodes_path;
  std::string edges_path;
  std::optional<SynthConfig> synth;

  double alpha = 0.01;  // log-gate significance level
  SomConfig node_som;
  SomConfig edge_som;
  int cluster_k = 0;  // 0 = auto (EM/BIC over k_range)
  int k_range_min = 2;
  int k_range_max = 10;
  CellClusterMode cell_cluster_mode = CellClusterMode::prototypes;
  double elite_percentile = 0.01;
  LayoutConfig layout;
  int partition_q = 0;  // 0 = silhouette-chosen
  enum class EdgeIndegScope { artist, whole } edge_indeg_scope = EdgeIndegScope::artist;

  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool write_svg = true;
};

PipelineConfig pipeline_config_from_json(const std::string& text);
std::string pipeline_config_to_json(const PipelineConfig& cfg);

struct PipelineResult {
  std::string report_json;
  std::string report_path;
};

/// Runs the whole analysis in order: load/generate, artist subgraph, node
/// features (log-gated, z-scored), node SOM, cell clustering, density matrix,
/// elite distributions, edge features, edge SOM, LinLog layout, spatial
/// partition, inter-clique fractions, report. Every stage's artifacts are
/// written before the next stage begins; a stage failure aborts with the
/// stage name and leaves that stage's outputs with a .partial suffix.
/// Deterministic given cfg.seed.
PipelineResult run_pipeline(const PipelineConfig& cfg);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netsom
