#include "netsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netsom/csv.hpp"
#include "netsom/rng.hpp"

namespace netsom {

GridDims grid_dims(std::size_t k) {
  if (k < 1) throw std::invalid_argument("grid_dims: k must be >= 1");
  const long long cells = std::max<long long>(
      1, std::llround(std::sqrt(static_cast<double>(k))));
  // Largest divisor <= sqrt(cells) gives the factor pair closest to square.
  long long p = 1;
  for (long long d = 1; d * d <= cells; ++d) {
    if (cells % d == 0) p = d;
  }
  return {static_cast<int>(cells / p), static_cast<int>(p)};
}

static void check_in_bounds(CellIndex c, GridDims dims) {
  if (c.row < 0 || c.row >= dims.rows || c.col < 0 || c.col >= dims.cols) {
    throw std::invalid_argument("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                ") outside " + std::to_string(dims.rows) + "x" +
                                std::to_string(dims.cols) + " grid");
  }
}

std::vector<CellIndex> hex_neighbors(CellIndex c, GridDims dims) {
  check_in_bounds(c, dims);
  // odd-r offset: odd rows are shifted half a cell to the right.
  static constexpr int even_row[6][2] = {{0, 1}, {0, -1}, {-1, 0}, {-1, -1}, {1, 0}, {1, -1}};
  static constexpr int odd_row[6][2] = {{0, 1}, {0, -1}, {-1, 0}, {-1, 1}, {1, 0}, {1, 1}};
  const auto& offsets = (c.row % 2 == 0) ? even_row : odd_row;
  std::vector<CellIndex> out;
  out.reserve(6);
  for (const auto& d : offsets) {
    const CellIndex n{c.row + d[0], c.col + d[1]};
    if (n.row >= 0 && n.row < dims.rows && n.col >= 0 && n.col < dims.cols) out.push_back(n);
  }
  return out;
}

// odd-r offset -> axial coordinates.
static void to_axial(CellIndex c, int& q, int& r) {
  q = c.col - (c.row - (c.row & 1)) / 2;
  r = c.row;
}

int hex_grid_distance(CellIndex a, CellIndex b) {
  int aq, ar, bq, br;
  to_axial(a, aq, ar);
  to_axial(b, bq, br);
  const int dq = aq - bq;
  const int dr = ar - br;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

static double sq_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

static int find_winner_linear(const SomMap& map, std::span<const double> v) {
  if (v.size() != map.dim) {
    throw std::invalid_argument("find_winner: vector dimension " + std::to_string(v.size()) +
                                " != map dimension " + std::to_string(map.dim));
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int cell = 0; cell < map.cell_count(); ++cell) {
    const double d = sq_distance(map.prototype(cell), v);
    if (d < best_d) {  // strict: ties keep the smaller linear index
      best_d = d;
      best = cell;
    }
  }
  return best;
}

CellIndex find_winner(const SomMap& map, std::span<const double> v) {
  return map.from_linear(find_winner_linear(map, v));
}

static double geometric_interp(double from, double to, double frac) {
  if (from == to) return from;
  return from * std::pow(to / from, frac);
}

namespace {
// Two-phase schedule: rough ordering then fine tuning.
struct Schedule {
  std::size_t phase1_steps = 0;
  std::size_t phase2_steps = 0;
  double lr_start, lr_mid, lr_end;
  double r_start, r_mid, r_end;

  Schedule(const SomConfig& cfg, std::size_t rows_per_epoch, double radius_start) {
    const int phase1_epochs = cfg.epochs / 2;
    phase1_steps = static_cast<std::size_t>(phase1_epochs) * rows_per_epoch;
    phase2_steps = static_cast<std::size_t>(cfg.epochs - phase1_epochs) * rows_per_epoch;
    lr_start = cfg.lr_start;
    lr_mid = std::max(0.1 * cfg.lr_start, cfg.lr_end);
    lr_end = cfg.lr_end;
    r_start = radius_start;
    r_mid = std::min(radius_start, cfg.radius_end + 1.0);
    // Geometric decay needs a positive endpoint; radius_end = 0 means
    // winner-only updates, which the floor approximates.
    r_end = std::max(cfg.radius_end, 0.01);
  }

  void at(std::size_t step, double& lr, double& radius) const {
    if (step < phase1_steps) {
      const double f = static_cast<double>(step) / static_cast<double>(phase1_steps);
      lr = geometric_interp(lr_start, lr_mid, f);
      radius = geometric_interp(r_start, r_mid, f);
    } else {
      const double f = phase2_steps == 0
                           ? 1.0
                           : static_cast<double>(step - phase1_steps) /
                                 static_cast<double>(phase2_steps);
      lr = geometric_interp(lr_mid, lr_end, f);
      radius = geometric_interp(r_mid, r_end, f);
    }
  }
};
}  // namespace

SomMap train(const FeatureMatrix& data, SomConfig config) {
  if (data.rows() == 0) throw std::invalid_argument("som train: empty data");
  const std::size_t n = data.cols();
  if (n == 0) throw std::invalid_argument("som train: zero-dimensional data");

  if (config.rows <= 0 || config.cols <= 0) {
    const GridDims dims = grid_dims(data.rows());
    config.rows = dims.rows;
    config.cols = dims.cols;
  }
  if (config.radius_start <= 0.0) {
    config.radius_start = std::max(1.0, std::max(config.rows, config.cols) / 2.0);
  }
  if (config.epochs < 1) throw std::invalid_argument("som train: epochs must be >= 1");
  if (!(config.lr_start >= config.lr_end && config.lr_end > 0.0)) {
    throw std::invalid_argument("som train: need lr_start >= lr_end > 0");
  }
  if (!(config.radius_start >= config.radius_end && config.radius_end >= 0.0)) {
    throw std::invalid_argument("som train: need radius_start >= radius_end >= 0");
  }

  SomMap map;
  map.config = config;
  map.rows = config.rows;
  map.cols = config.cols;
  map.dim = n;
  map.column_names = data.columns;
  map.transforms = data.transforms;
  const int cells = map.cell_count();
  map.prototypes.assign(static_cast<std::size_t>(cells) * n, 0.0);

  Rng rng(config.seed);
  if (config.init == SomConfig::Init::random) {
    // Uniform within the per-column data range.
    std::vector<double> lo(n, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < data.rows(); ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        lo[c] = std::min(lo[c], data.at(r, c));
        hi[c] = std::max(hi[c], data.at(r, c));
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (lo[c] == hi[c]) {  // zero-span column: spread the init anyway
        lo[c] -= 0.5;
        hi[c] += 0.5;
      }
    }
    for (int cell = 0; cell < cells; ++cell) {
      auto proto = map.prototype(cell);
      for (std::size_t c = 0; c < n; ++c) proto[c] = rng.uniform(lo[c], hi[c]);
    }
  } else {
    for (int cell = 0; cell < cells; ++cell) {
      const std::size_t pick = rng.below(data.rows());
      auto row = data.row(pick);
      std::copy(row.begin(), row.end(), map.prototype(cell).begin());
    }
  }

  // Precomputed axial coordinates for the grid distance in the hot loop.
  std::vector<int> ax_q(static_cast<std::size_t>(cells)), ax_r(static_cast<std::size_t>(cells));
  for (int cell = 0; cell < cells; ++cell) {
    to_axial(map.from_linear(cell), ax_q[static_cast<std::size_t>(cell)],
             ax_r[static_cast<std::size_t>(cell)]);
  }

  const Schedule sched(config, data.rows(), config.radius_start);
  std::vector<std::size_t> visit(data.rows());
  std::iota(visit.begin(), visit.end(), 0);

  std::size_t step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(visit);
    for (const std::size_t row : visit) {
      double lr, radius;
      sched.at(step++, lr, radius);
      const auto v = data.row(row);
      const int winner = find_winner_linear(map, v);
      const double denom = 2.0 * radius * radius;
      for (int cell = 0; cell < cells; ++cell) {
        const int dq = ax_q[static_cast<std::size_t>(cell)] -
                       ax_q[static_cast<std::size_t>(winner)];
        const int dr = ax_r[static_cast<std::size_t>(cell)] -
                       ax_r[static_cast<std::size_t>(winner)];
        const int d = (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
        const double h = std::exp(-static_cast<double>(d) * d / denom);
        if (h < 1e-12) continue;
        const double pull = lr * h;
        auto proto = map.prototype(cell);
        for (std::size_t c = 0; c < n; ++c) proto[c] += pull * (v[c] - proto[c]);
      }
    }
  }
  map.trained = true;
  return map;
}

std::vector<CellIndex> assign(const SomMap& map, const FeatureMatrix& data) {
  if (!map.trained) throw std::invalid_argument("assign: map not trained");
  std::vector<CellIndex> out;
  out.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) out.push_back(find_winner(map, data.row(r)));
  return out;
}

UMatrix u_matrix(const SomMap& map) {
  UMatrix u;
  u.rows = map.rows;
  u.cols = map.cols;
  u.values.assign(static_cast<std::size_t>(map.cell_count()), 0.0);
  const GridDims dims{map.rows, map.cols};
  for (int cell = 0; cell < map.cell_count(); ++cell) {
    const auto neighbors = hex_neighbors(map.from_linear(cell), dims);
    if (neighbors.empty()) continue;  // 1x1 grid
    double total = 0.0;
    for (const CellIndex nb : neighbors) {
      total += std::sqrt(sq_distance(map.prototype(cell), map.prototype(map.linear(nb))));
    }
    u.values[static_cast<std::size_t>(cell)] = total / static_cast<double>(neighbors.size());
  }
  return u;
}

std::vector<double> component_plane(const SomMap& map, std::size_t column,
                                    const std::vector<ColumnTransform>& chain) {
  if (column >= map.dim) throw std::invalid_argument("component_plane: column out of range");
  std::vector<double> plane(static_cast<std::size_t>(map.cell_count()));
  for (int cell = 0; cell < map.cell_count(); ++cell) {
    plane[static_cast<std::size_t>(cell)] = inverse_transform(map.prototype(cell)[column], chain);
  }
  return plane;
}

double quantization_error(const SomMap& map, const FeatureMatrix& data) {
  if (data.rows() == 0) throw std::invalid_argument("quantization_error: empty data");
  double total = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto v = data.row(r);
    const int winner = find_winner_linear(map, v);
    total += std::sqrt(sq_distance(map.prototype(winner), v));
  }
  return total / static_cast<double>(data.rows());
}

static nlohmann::ordered_json transforms_to_json(
    const std::vector<std::vector<ColumnTransform>>& transforms) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& chain : transforms) {
    nlohmann::ordered_json jchain = nlohmann::ordered_json::array();
    for (const auto& t : chain) {
      nlohmann::ordered_json entry;
      entry["kind"] = transform_name(t.kind);
      if (t.kind == ColumnTransform::Kind::zscore) {
        entry["mean"] = t.mean;
        entry["sd"] = t.sd;
      }
      jchain.push_back(entry);
    }
    arr.push_back(jchain);
  }
  return arr;
}

static std::vector<std::vector<ColumnTransform>> transforms_from_json(const nlohmann::json& arr) {
  std::vector<std::vector<ColumnTransform>> out;
  for (const auto& jchain : arr) {
    std::vector<ColumnTransform> chain;
    for (const auto& entry : jchain) {
      ColumnTransform t;
      t.kind = transform_kind(entry.at("kind").get<std::string>());
      if (t.kind == ColumnTransform::Kind::zscore) {
        t.mean = entry.at("mean").get<double>();
        t.sd = entry.at("sd").get<double>();
      }
      chain.push_back(t);
    }
    out.push_back(std::move(chain));
  }
  return out;
}

std::string som_to_json(const SomMap& map) {
  nlohmann::ordered_json doc;
  doc["rows"] = map.rows;
  doc["cols"] = map.cols;
  doc["n"] = map.dim;
  doc["column_names"] = map.column_names;
  nlohmann::ordered_json protos = nlohmann::ordered_json::array();
  for (int cell = 0; cell < map.cell_count(); ++cell) {
    const auto p = map.prototype(cell);
    protos.push_back(std::vector<double>(p.begin(), p.end()));
  }
  doc["prototypes"] = std::move(protos);
  nlohmann::ordered_json cfg;
  cfg["rows"] = map.config.rows;
  cfg["cols"] = map.config.cols;
  cfg["epochs"] = map.config.epochs;
  cfg["lr_start"] = map.config.lr_start;
  cfg["lr_end"] = map.config.lr_end;
  cfg["radius_start"] = map.config.radius_start;
  cfg["radius_end"] = map.config.radius_end;
  cfg["seed"] = map.config.seed;
  cfg["init"] = map.config.init == SomConfig::Init::random ? "random" : "data_sample";
  doc["config"] = std::move(cfg);
  doc["transforms"] = transforms_to_json(map.transforms);
  doc["trained"] = map.trained;
  return doc.dump(2) + "\n";
}

SomMap som_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  SomMap map;
  map.rows = doc.at("rows").get<int>();
  map.cols = doc.at("cols").get<int>();
  map.dim = doc.at("n").get<std::size_t>();
  map.column_names = doc.at("column_names").get<std::vector<std::string>>();
  map.prototypes.reserve(static_cast<std::size_t>(map.cell_count()) * map.dim);
  for (const auto& proto : doc.at("prototypes")) {
    for (const auto& v : proto) map.prototypes.push_back(v.get<double>());
  }
  if (map.prototypes.size() != static_cast<std::size_t>(map.cell_count()) * map.dim) {
    throw std::runtime_error("som json: prototype count does not match rows*cols*n");
  }
  const auto& cfg = doc.at("config");
  map.config.rows = cfg.at("rows").get<int>();
  map.config.cols = cfg.at("cols").get<int>();
  map.config.epochs = cfg.at("epochs").get<int>();
  map.config.lr_start = cfg.at("lr_start").get<double>();
  map.config.lr_end = cfg.at("lr_end").get<double>();
  map.config.radius_start = cfg.at("radius_start").get<double>();
  map.config.radius_end = cfg.at("radius_end").get<double>();
  map.config.seed = cfg.at("seed").get<std::uint64_t>();
  map.config.init = cfg.at("init").get<std::string>() == "data_sample"
                        ? SomConfig::Init::data_sample
                        : SomConfig::Init::random;
  map.transforms = transforms_from_json(doc.at("transforms"));
  map.trained = doc.at("trained").get<bool>();
  return map;
}

std::string grid_csv_string(int rows, int cols, const std::vector<double>& values) {
  std::string s;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c > 0) s += ',';
      s += fmt_double(values[static_cast<std::size_t>(r * cols + c)]);
    }
    s += '\n';
  }
  return s;
}

void write_grid_csv(const std::string& path, int rows, int cols,
                    const std::vector<double>& values) {
  write_file(path, grid_csv_string(rows, cols, values));
}

std::vector<double> read_grid_csv(const std::string& path, int& rows, int& cols) {
  const std::string text = read_file(path);
  std::vector<double> values;
  rows = 0;
  cols = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      int count = 0;
      std::size_t f = 0;
      while (true) {
        std::size_t comma = line.find(',', f);
        const std::string_view field =
            comma == std::string_view::npos ? line.substr(f) : line.substr(f, comma - f);
        values.push_back(parse_double(field));
        ++count;
        if (comma == std::string_view::npos) break;
        f = comma + 1;
      }
      if (rows == 0) {
        cols = count;
      } else if (count != cols) {
        throw std::runtime_error("grid csv: ragged rows in " + path);
      }
      ++rows;
    }
    start = end + 1;
  }
  if (rows == 0) throw std::runtime_error("grid csv: empty file " + path);
  return values;
}

}  // namespace netsom
