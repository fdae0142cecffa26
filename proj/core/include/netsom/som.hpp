#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netsom/features.hpp"

namespace netsom {

struct SomConfig {
  int rows = 0;  // 0 = size the grid from the data with grid_dims
  int cols = 0;
  int epochs = 100;
  double lr_start = 0.5;
  double lr_end = 0.01;
  double radius_start = 0.0;  // 0 = max(rows, cols) / 2
  double radius_end = 1.0;
  std::uint64_t seed = 1;
  enum class Init { random, data_sample } init = Init::random;
};

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex&) const = default;
};

struct GridDims {
  int rows = 0;
  int cols = 0;
};

// Trained map: an m x p hexagonal grid of prototype vectors plus the column
// metadata of the matrix it was trained on.
struct SomMap {
  SomConfig config;
  int rows = 0;
  int cols = 0;
  std::size_t dim = 0;
  std::vector<double> prototypes;  // row-major cells, dim values each
  bool trained = false;
  std::vector<std::string> column_names;
  std::vector<std::vector<ColumnTransform>> transforms;

  int cell_count() const { return rows * cols; }
  int linear(CellIndex c) const { return c.row * cols + c.col; }
  CellIndex from_linear(int i) const { return {i / cols, i % cols}; }
  std::span<const double> prototype(int cell) const {
    return {prototypes.data() + static_cast<std::size_t>(cell) * dim, dim};
  }
  std::span<double> prototype(int cell) {
    return {prototypes.data() + static_cast<std::size_t>(cell) * dim, dim};
  }
};

struct UMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major, mean distance to hex neighbors

  double at(int r, int c) const { return values[static_cast<std::size_t>(r * cols + c)]; }
};

/// Grid size for a population of k: round(sqrt(k)) cells, factored into the
/// pair (m, p) with m >= p whose aspect ratio is closest to square.
GridDims grid_dims(std::size_t k);

/// In-bounds subset of the six hex-adjacent cells, odd-r offset layout.
std::vector<CellIndex> hex_neighbors(CellIndex c, GridDims dims);

/// Grid distance between cells in axial hex space.
int hex_grid_distance(CellIndex a, CellIndex b);

/// Cell with the nearest prototype (Euclidean); ties break to the smallest
/// row-major linear index.
CellIndex find_winner(const SomMap& map, std::span<const double> v);

/// Sequential (online) Kohonen training: per epoch the rows are visited in a
/// seeded random order; each presented vector pulls every prototype toward it
/// with a Gaussian neighborhood factor exp(-d^2 / (2 r^2)) around the winner.
/// Learning rate and radius decay geometrically over a rough phase (first
/// half of the epochs, radius down to radius_end + 1) and a fine-tune phase
/// (down to radius_end, lr_end). Deterministic given the seed.
SomMap train(const FeatureMatrix& data, SomConfig config);

/// Winner cell per data row.
std::vector<CellIndex> assign(const SomMap& map, const FeatureMatrix& data);

/// Per-cell mean prototype distance to the in-bounds hex neighbors.
UMatrix u_matrix(const SomMap& map);

/// Per-cell prototype value of one column, inverse-transformed to original
/// units through the given chain.
std::vector<double> component_plane(const SomMap& map, std::size_t column,
                                    const std::vector<ColumnTransform>& chain);

/// Mean distance from data rows to their winner prototypes.
double quantization_error(const SomMap& map, const FeatureMatrix& data);

std::string som_to_json(const SomMap& map);
SomMap som_from_json(const std::string& text);

/// Grid CSV: one line per grid row, comma-separated values.
std::string grid_csv_string(int rows, int cols, const std::vector<double>& values);
void write_grid_csv(const std::string& path, int rows, int cols,
                    const std::vector<double>& values);
std::vector<double> read_grid_csv(const std::string& path, int& rows, int& cols);

}  // namespace netsom
