#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "netsom/graph.hpp"

namespace netsom {

struct ColumnTransform {
  enum class Kind { raw, log1p, zscore };
  Kind kind = Kind::raw;
  double mean = 0.0;  // zscore only
  double sd = 1.0;    // zscore only
};

std::string transform_name(ColumnTransform::Kind kind);
ColumnTransform::Kind transform_kind(const std::string& name);

// Entity-indexed rows by named feature columns, dense, with the per-column
// transform chain recorded in application order.
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  std::vector<double> values;  // row-major, ids.size() x columns.size()
  std::vector<std::vector<ColumnTransform>> transforms;

  std::size_t rows() const { return ids.size(); }
  std::size_t cols() const { return columns.size(); }

  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
  std::vector<double> column_values(std::size_t c) const;
  std::size_t column_index(const std::string& name) const;
};

/// Applies a column's transform chain in reverse, recovering original units.
double inverse_transform(double v, const std::vector<ColumnTransform>& chain);

/// "Major" -> 3, "Indie" -> 2, anything else -> 1 (case-insensitive).
int encode_label(const std::string& label);

/// (receiver - emitter) / (receiver + emitter), in [-1, 1]; 0 when both are 0.
double gradient(double receiver_value, double emitter_value);

inline constexpr const char* kNodeFeatureNames[7] = {
    "hits", "comments", "indeg_whole", "indeg_artist", "pagerank", "reciprocity", "label"};

/// One row per artist (in g_artist node order). Columns in fixed order:
/// hits, comments, indeg_whole, indeg_artist, pagerank, reciprocity, label.
/// The four count columns pass through log_gate at alpha; transforms recorded.
FeatureMatrix node_features(const DirectedGraph& g_whole, const DirectedGraph& g_artist,
                            const std::map<std::string, double>& pr, double alpha);

struct EdgeNodeAttrs {
  double hits = 0.0;
  double comments = 0.0;
  double indeg = 0.0;
};

inline constexpr const char* kEdgeFeatureNames[7] = {
    "hits_grad", "comments_grad", "indeg_grad", "common_pred",
    "common_succ", "genre_same", "reciprocal"};

/// One row per directed edge of g, id "emitter->receiver", in edge order.
/// Columns: hits_grad, comments_grad, indeg_grad, common_pred, common_succ,
/// genre_same, reciprocal. Genre comparison is whitespace-trimmed and
/// case-insensitive.
FeatureMatrix edge_features(const DirectedGraph& g,
                            const std::map<std::string, EdgeNodeAttrs>& attrs);

/// Standardizes the selected columns (sample sd) and appends the transform.
/// A constant column is an error naming it.
FeatureMatrix zscore(FeatureMatrix fm, const std::vector<std::string>& columns);
/// Convenience: z-score every column.
FeatureMatrix zscore_all(FeatureMatrix fm);

std::string features_csv_string(const FeatureMatrix& fm);
void write_features_csv(const std::string& path, const FeatureMatrix& fm);
FeatureMatrix read_features_csv(const std::string& path);
/// JSON sidecar describing the applied transforms per column.
std::string transforms_json(const FeatureMatrix& fm);

}  // namespace netsom
