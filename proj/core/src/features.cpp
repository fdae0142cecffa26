#include "netsom/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netsom/csv.hpp"
#include "netsom/stats.hpp"

namespace netsom {

std::string transform_name(ColumnTransform::Kind kind) {
  switch (kind) {
    case ColumnTransform::Kind::raw: return "raw";
    case ColumnTransform::Kind::log1p: return "log1p";
    case ColumnTransform::Kind::zscore: return "zscore";
  }
  throw std::logic_error("unknown transform kind");
}

ColumnTransform::Kind transform_kind(const std::string& name) {
  if (name == "raw") return ColumnTransform::Kind::raw;
  if (name == "log1p") return ColumnTransform::Kind::log1p;
  if (name == "zscore") return ColumnTransform::Kind::zscore;
  throw std::runtime_error("unknown transform name: '" + name + "'");
}

std::vector<double> FeatureMatrix::column_values(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::invalid_argument("unknown feature column: '" + name + "'");
}

double inverse_transform(double v, const std::vector<ColumnTransform>& chain) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    switch (it->kind) {
      case ColumnTransform::Kind::raw: break;
      case ColumnTransform::Kind::zscore: v = v * it->sd + it->mean; break;
      case ColumnTransform::Kind::log1p: v = std::expm1(v); break;
    }
  }
  return v;
}

static std::string lower_trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out = s.substr(b, e - b);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int encode_label(const std::string& label) {
  const std::string l = lower_trim(label);
  if (l == "major") return 3;
  if (l == "indie") return 2;
  return 1;
}

double gradient(double receiver_value, double emitter_value) {
  if (receiver_value < 0.0 || emitter_value < 0.0) {
    throw std::invalid_argument("gradient: negative input");
  }
  const double sum = receiver_value + emitter_value;
  if (sum == 0.0) return 0.0;
  return (receiver_value - emitter_value) / sum;
}

// Gates one raw column through log_gate and stores it with its transform.
static void put_gated_column(FeatureMatrix& fm, std::size_t col, std::vector<double> raw,
                             double alpha) {
  const LogGateResult gated = log_gate(raw, alpha);
  for (std::size_t r = 0; r < fm.rows(); ++r) fm.at(r, col) = gated.values[r];
  fm.transforms[col] = {
      {gated.applied ? ColumnTransform::Kind::log1p : ColumnTransform::Kind::raw}};
}

FeatureMatrix node_features(const DirectedGraph& g_whole, const DirectedGraph& g_artist,
                            const std::map<std::string, double>& pr, double alpha) {
  FeatureMatrix fm;
  fm.columns.assign(std::begin(kNodeFeatureNames), std::end(kNodeFeatureNames));
  const std::size_t n = g_artist.node_count();
  fm.ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) fm.ids.push_back(g_artist.node(static_cast<int>(i)).id);
  fm.values.assign(n * 7, 0.0);
  fm.transforms.assign(7, {{ColumnTransform::Kind::raw}});

  std::vector<double> hits(n), comments(n), indeg_whole(n), indeg_artist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int ai = static_cast<int>(i);
    const NodeRecord& rec = g_artist.node(ai);
    const int wi = g_whole.require(rec.id);
    hits[i] = static_cast<double>(rec.hits);
    comments[i] = static_cast<double>(rec.comments);
    indeg_whole[i] = static_cast<double>(in_degree(g_whole, wi, DegreeScope::whole));
    indeg_artist[i] = static_cast<double>(in_degree(g_artist, ai, DegreeScope::whole));
    auto score = pr.find(rec.id);
    if (score == pr.end()) {
      throw std::invalid_argument("node_features: pagerank missing artist '" + rec.id + "'");
    }
    fm.at(i, 4) = score->second;
    fm.at(i, 5) = reciprocity_rate(g_artist, ai);
    fm.at(i, 6) = static_cast<double>(encode_label(rec.label));
  }
  put_gated_column(fm, 0, std::move(hits), alpha);
  put_gated_column(fm, 1, std::move(comments), alpha);
  put_gated_column(fm, 2, std::move(indeg_whole), alpha);
  put_gated_column(fm, 3, std::move(indeg_artist), alpha);
  return fm;
}

FeatureMatrix edge_features(const DirectedGraph& g,
                            const std::map<std::string, EdgeNodeAttrs>& attrs) {
  // Per-node attribute lookup, validated up front so errors name the node.
  std::vector<const EdgeNodeAttrs*> by_index(g.node_count(), nullptr);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& id = g.node(static_cast<int>(i)).id;
    auto it = attrs.find(id);
    if (it == attrs.end()) {
      // Only an error if the node actually touches an edge.
      if (!g.successors(static_cast<int>(i)).empty() ||
          !g.predecessors(static_cast<int>(i)).empty()) {
        throw std::invalid_argument("edge_features: missing attributes for node '" + id + "'");
      }
      continue;
    }
    by_index[i] = &it->second;
  }

  FeatureMatrix fm;
  fm.columns.assign(std::begin(kEdgeFeatureNames), std::end(kEdgeFeatureNames));
  fm.ids.reserve(g.edge_count());
  fm.values.reserve(g.edge_count() * 7);
  fm.transforms.assign(7, {{ColumnTransform::Kind::raw}});

  g.for_each_edge([&](int u, int v) {
    const NodeRecord& emitter = g.node(u);
    const NodeRecord& receiver = g.node(v);
    const EdgeNodeAttrs& ea = *by_index[static_cast<std::size_t>(u)];
    const EdgeNodeAttrs& ra = *by_index[static_cast<std::size_t>(v)];
    fm.ids.push_back(emitter.id + "->" + receiver.id);
    fm.values.push_back(gradient(ra.hits, ea.hits));
    fm.values.push_back(gradient(ra.comments, ea.comments));
    fm.values.push_back(gradient(ra.indeg, ea.indeg));
    fm.values.push_back(static_cast<double>(common_predecessors(g, u, v)));
    fm.values.push_back(static_cast<double>(common_successors(g, u, v)));
    fm.values.push_back(lower_trim(emitter.genre) == lower_trim(receiver.genre) ? 1.0 : 0.0);
    fm.values.push_back(is_reciprocal(g, u, v) ? 1.0 : 0.0);
  });
  return fm;
}

FeatureMatrix zscore(FeatureMatrix fm, const std::vector<std::string>& columns) {
  for (const auto& name : columns) {
    const std::size_t c = fm.column_index(name);
    std::vector<double> col = fm.column_values(c);
    const double m = mean_of(col);
    const double sd = sample_sd(col);
    if (sd == 0.0) throw std::invalid_argument("zscore: constant column '" + name + "'");
    for (std::size_t r = 0; r < fm.rows(); ++r) fm.at(r, c) = (fm.at(r, c) - m) / sd;
    fm.transforms[c].push_back({ColumnTransform::Kind::zscore, m, sd});
  }
  return fm;
}

FeatureMatrix zscore_all(FeatureMatrix fm) {
  const std::vector<std::string> all = fm.columns;
  return zscore(std::move(fm), all);
}

std::string features_csv_string(const FeatureMatrix& fm) {
  std::string s = "id";
  for (const auto& c : fm.columns) {
    s += ',';
    s += c;
  }
  s += '\n';
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    s += fm.ids[r];
    for (std::size_t c = 0; c < fm.cols(); ++c) {
      s += ',';
      s += fmt_double(fm.at(r, c));
    }
    s += '\n';
  }
  return s;
}

void write_features_csv(const std::string& path, const FeatureMatrix& fm) {
  write_file(path, features_csv_string(fm));
}

FeatureMatrix read_features_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header.front() != "id") {
    throw std::runtime_error("features csv: first column must be 'id'");
  }
  FeatureMatrix fm;
  fm.columns.assign(t.header.begin() + 1, t.header.end());
  fm.transforms.assign(fm.columns.size(), {{ColumnTransform::Kind::raw}});
  fm.ids.reserve(t.rows.size());
  fm.values.reserve(t.rows.size() * fm.columns.size());
  for (const auto& row : t.rows) {
    fm.ids.push_back(row.front());
    for (std::size_t c = 1; c < row.size(); ++c) fm.values.push_back(parse_double(row[c]));
  }
  return fm;
}

std::string transforms_json(const FeatureMatrix& fm) {
  nlohmann::ordered_json doc;
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    nlohmann::ordered_json chain = nlohmann::ordered_json::array();
    for (const auto& t : fm.transforms[c]) {
      nlohmann::ordered_json entry;
      entry["kind"] = transform_name(t.kind);
      if (t.kind == ColumnTransform::Kind::zscore) {
        entry["mean"] = t.mean;
        entry["sd"] = t.sd;
      }
      chain.push_back(entry);
    }
    doc[fm.columns[c]] = chain;
  }
  return doc.dump(2) + "\n";
}

}  // namespace netsom
