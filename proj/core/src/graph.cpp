#include "netsom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "netsom/csv.hpp"

namespace netsom {

int DirectedGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int DirectedGraph::require(const std::string& id) const {
  const int idx = index_of(id);
  if (idx < 0) throw std::invalid_argument("unknown node id: '" + id + "'");
  return idx;
}

bool DirectedGraph::has_edge(int from, int to) const {
  const auto& succ = out_[static_cast<std::size_t>(from)];
  return std::binary_search(succ.begin(), succ.end(), to);
}

struct GraphFactory {
  static DirectedGraph build(std::vector<NodeRecord> nodes,
                             std::vector<std::pair<int, int>> index_edges) {
    DirectedGraph g;
    g.nodes_ = std::move(nodes);
    const std::size_t n = g.nodes_.size();
    g.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = g.index_.emplace(g.nodes_[i].id, static_cast<int>(i));
      if (!inserted) throw std::invalid_argument("duplicate node id: '" + g.nodes_[i].id + "'");
    }
    g.out_.assign(n, {});
    g.in_.assign(n, {});
    for (auto [u, v] : index_edges) {
      g.out_[static_cast<std::size_t>(u)].push_back(v);
      g.in_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& adj : g.out_) std::sort(adj.begin(), adj.end());
    for (auto& adj : g.in_) std::sort(adj.begin(), adj.end());
    g.edge_count_ = index_edges.size();
    return g;
  }
};

FromEdgeListResult from_edge_list(std::vector<NodeRecord> nodes,
                                  const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, int> index;
  index.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [it, inserted] = index.emplace(nodes[i].id, static_cast<int>(i));
    if (!inserted) throw std::invalid_argument("duplicate node id: '" + nodes[i].id + "'");
  }

  std::size_t dropped = 0;
  std::vector<std::vector<int>> out(nodes.size());
  std::vector<std::pair<int, int>> kept;
  kept.reserve(edges.size());
  for (std::size_t row = 0; row < edges.size(); ++row) {
    const auto& [from_id, to_id] = edges[row];
    auto uf = index.find(from_id);
    if (uf == index.end()) {
      throw std::invalid_argument("edge row " + std::to_string(row) +
                                  ": unknown endpoint id: '" + from_id + "'");
    }
    auto ut = index.find(to_id);
    if (ut == index.end()) {
      throw std::invalid_argument("edge row " + std::to_string(row) +
                                  ": unknown endpoint id: '" + to_id + "'");
    }
    const int u = uf->second, v = ut->second;
    if (u == v) {  // self-loop
      ++dropped;
      continue;
    }
    auto& succ = out[static_cast<std::size_t>(u)];
    if (std::find(succ.begin(), succ.end(), v) != succ.end()) {  // duplicate
      ++dropped;
      continue;
    }
    succ.push_back(v);
    kept.emplace_back(u, v);
  }
  return {GraphFactory::build(std::move(nodes), std::move(kept)), dropped};
}

std::size_t in_degree(const DirectedGraph& g, int idx, DegreeScope scope) {
  const auto preds = g.predecessors(idx);
  if (scope == DegreeScope::whole) return preds.size();
  std::size_t n = 0;
  for (int p : preds) {
    if (g.node(p).is_artist) ++n;
  }
  return n;
}

std::size_t in_degree(const DirectedGraph& g, const std::string& id, DegreeScope scope) {
  return in_degree(g, g.require(id), scope);
}

std::size_t out_degree(const DirectedGraph& g, int idx) { return g.successors(idx).size(); }

std::size_t out_degree(const DirectedGraph& g, const std::string& id) {
  return out_degree(g, g.require(id));
}

double reciprocity_rate(const DirectedGraph& g, int idx) {
  const auto succ = g.successors(idx);
  if (succ.empty()) return 0.0;
  std::size_t mutual = 0;
  for (int s : succ) {
    if (g.has_edge(s, idx)) ++mutual;
  }
  return static_cast<double>(mutual) / static_cast<double>(succ.size());
}

double reciprocity_rate(const DirectedGraph& g, const std::string& id) {
  return reciprocity_rate(g, g.require(id));
}

PageRankResult pagerank(const DirectedGraph& g, double damping, double tol, int max_iter) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("pagerank: empty graph");

  PageRankResult res;
  res.scores.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  const double base = (1.0 - damping) / static_cast<double>(n);

  for (int iter = 1; iter <= max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.successors(static_cast<int>(i)).empty()) dangling += res.scores[i];
    }
    const double shared = base + damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), shared);
    for (std::size_t i = 0; i < n; ++i) {
      const auto succ = g.successors(static_cast<int>(i));
      if (succ.empty()) continue;
      const double share = damping * res.scores[i] / static_cast<double>(succ.size());
      for (int v : succ) next[static_cast<std::size_t>(v)] += share;
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(next[i] - res.scores[i]);
    res.scores.swap(next);
    res.iterations = iter;
    if (l1 < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::map<std::string, double> pagerank_by_id(const DirectedGraph& g, const PageRankResult& pr) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out.emplace(g.node(static_cast<int>(i)).id, pr.scores[i]);
  }
  return out;
}

static std::size_t sorted_intersection_size(std::span<const int> xs, std::span<const int> ys,
                                            int skip_a, int skip_b) {
  std::size_t count = 0;
  auto xi = xs.begin();
  auto yi = ys.begin();
  while (xi != xs.end() && yi != ys.end()) {
    if (*xi < *yi) {
      ++xi;
    } else if (*yi < *xi) {
      ++yi;
    } else {
      if (*xi != skip_a && *xi != skip_b) ++count;
      ++xi;
      ++yi;
    }
  }
  return count;
}

std::size_t common_predecessors(const DirectedGraph& g, int a, int b) {
  if (a == b) throw std::invalid_argument("common_predecessors: a == b");
  return sorted_intersection_size(g.predecessors(a), g.predecessors(b), a, b);
}

std::size_t common_predecessors(const DirectedGraph& g, const std::string& a,
                                const std::string& b) {
  return common_predecessors(g, g.require(a), g.require(b));
}

std::size_t common_successors(const DirectedGraph& g, int a, int b) {
  if (a == b) throw std::invalid_argument("common_successors: a == b");
  return sorted_intersection_size(g.successors(a), g.successors(b), a, b);
}

std::size_t common_successors(const DirectedGraph& g, const std::string& a, const std::string& b) {
  return common_successors(g, g.require(a), g.require(b));
}

bool is_reciprocal(const DirectedGraph& g, int emitter, int receiver) {
  if (!g.has_edge(emitter, receiver)) {
    throw std::invalid_argument("is_reciprocal: edge " + g.node(emitter).id + "->" +
                                g.node(receiver).id + " not in graph");
  }
  return g.has_edge(receiver, emitter);
}

bool is_reciprocal(const DirectedGraph& g, const std::string& emitter,
                   const std::string& receiver) {
  return is_reciprocal(g, g.require(emitter), g.require(receiver));
}

double reciprocal_edge_fraction(const DirectedGraph& g) {
  if (g.edge_count() == 0) return 0.0;
  std::size_t mutual = 0;
  g.for_each_edge([&](int u, int v) {
    if (g.has_edge(v, u)) ++mutual;
  });
  return static_cast<double>(mutual) / static_cast<double>(g.edge_count());
}

DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<int>& keep) {
  std::vector<int> remap(g.node_count(), -1);
  std::vector<NodeRecord> nodes;
  nodes.reserve(keep.size());
  for (int idx : keep) {
    if (idx < 0 || idx >= static_cast<int>(g.node_count())) {
      throw std::invalid_argument("induced_subgraph: node index out of range");
    }
    if (remap[static_cast<std::size_t>(idx)] != -1) continue;
    remap[static_cast<std::size_t>(idx)] = static_cast<int>(nodes.size());
    nodes.push_back(g.node(idx));
  }
  std::vector<std::pair<int, int>> edges;
  g.for_each_edge([&](int u, int v) {
    const int nu = remap[static_cast<std::size_t>(u)];
    const int nv = remap[static_cast<std::size_t>(v)];
    if (nu >= 0 && nv >= 0) edges.emplace_back(nu, nv);
  });
  return GraphFactory::build(std::move(nodes), std::move(edges));
}

DirectedGraph induced_artist_subgraph(const DirectedGraph& g) {
  std::vector<int> keep;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.node(static_cast<int>(i)).is_artist) keep.push_back(static_cast<int>(i));
  }
  return induced_subgraph(g, keep);
}

DirectedGraph bfs_crawl(const DirectedGraph& g, const CrawlConfig& cfg) {
  if (cfg.depth < 0) throw std::invalid_argument("bfs_crawl: negative depth");
  if (cfg.max_out_degree < 1 || cfg.max_out_degree > 40) {
    throw std::invalid_argument("bfs_crawl: max_out_degree must be in [1, 40]");
  }

  std::vector<char> visited(g.node_count(), 0);
  std::vector<int> order;  // discovery order, seeds first
  std::vector<int> frontier;
  for (const auto& id : cfg.seeds) {
    const int idx = g.require(id);
    if (!visited[static_cast<std::size_t>(idx)]) {
      visited[static_cast<std::size_t>(idx)] = 1;
      order.push_back(idx);
      frontier.push_back(idx);
    }
  }

  for (int level = 0; level < cfg.depth && !frontier.empty(); ++level) {
    std::vector<int> next;
    for (int u : frontier) {
      const auto succ = g.successors(u);
      const std::size_t cap = std::min<std::size_t>(succ.size(),
                                                    static_cast<std::size_t>(cfg.max_out_degree));
      for (std::size_t i = 0; i < cap; ++i) {
        const int v = succ[i];
        if (!visited[static_cast<std::size_t>(v)]) {
          visited[static_cast<std::size_t>(v)] = 1;
          order.push_back(v);
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return induced_subgraph(g, order);
}

std::vector<NodeRecord> read_nodes_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_id = t.column("id");
  const std::size_t c_artist = t.column("is_artist");
  const std::size_t c_hits = t.column("hits");
  const std::size_t c_comments = t.column("comments");
  const std::size_t c_label = t.column("label");
  const std::size_t c_genre = t.column("genre");
  std::vector<NodeRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    NodeRecord r;
    r.id = row[c_id];
    const long long artist = parse_int(row[c_artist]);
    if (artist != 0 && artist != 1) {
      throw std::runtime_error("nodes csv: is_artist must be 0 or 1 for id '" + r.id + "'");
    }
    r.is_artist = artist == 1;
    const long long hits = parse_int(row[c_hits]);
    const long long comments = parse_int(row[c_comments]);
    if (hits < 0 || comments < 0) {
      throw std::runtime_error("nodes csv: negative count for id '" + r.id + "'");
    }
    r.hits = static_cast<std::uint64_t>(hits);
    r.comments = static_cast<std::uint64_t>(comments);
    r.label = row[c_label];
    r.genre = row[c_genre];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_edges_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_from = t.column("emitter");
  const std::size_t c_to = t.column("receiver");
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.emplace_back(row[c_from], row[c_to]);
  return out;
}

std::string nodes_csv_string(const DirectedGraph& g) {
  std::string s = "id,is_artist,hits,comments,label,genre\n";
  for (const auto& n : g.nodes()) {
    s += n.id;
    s += n.is_artist ? ",1," : ",0,";
    s += std::to_string(n.hits);
    s += ',';
    s += std::to_string(n.comments);
    s += ',';
    s += n.label;
    s += ',';
    s += n.genre;
    s += '\n';
  }
  return s;
}

std::string edges_csv_string(const DirectedGraph& g) {
  std::string s = "emitter,receiver\n";
  g.for_each_edge([&](int u, int v) {
    s += g.node(u).id;
    s += ',';
    s += g.node(v).id;
    s += '\n';
  });
  return s;
}

void write_nodes_csv(const std::string& path, const DirectedGraph& g) {
  write_file(path, nodes_csv_string(g));
}

void write_edges_csv(const std::string& path, const DirectedGraph& g) {
  write_file(path, edges_csv_string(g));
}

}  // namespace netsom
