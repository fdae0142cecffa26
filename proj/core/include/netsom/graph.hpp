#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netsom {

struct NodeRecord {
  std::string id;
  bool is_artist = false;
  std::uint64_t hits = 0;
  std::uint64_t comments = 0;
  std::string label;  // "Major" / "Indie" / anything else
  std::string genre;
};

enum class DegreeScope { whole, artist_only };

struct CrawlConfig {
  std::vector<std::string> seeds;
  int depth = 3;
  int max_out_degree = 40;  // cap on followed out-links per node
};

// Directed "best friend" graph. Immutable once built; no self-loops, no
// duplicate edges; forward and reverse adjacency kept sorted by node index.
class DirectedGraph {
 public:
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const NodeRecord& node(int idx) const { return nodes_[static_cast<std::size_t>(idx)]; }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }

  /// Index of an id, or -1 when absent.
  int index_of(const std::string& id) const;
  /// Index of an id; throws naming the id when absent.
  int require(const std::string& id) const;

  std::span<const int> successors(int idx) const { return out_[static_cast<std::size_t>(idx)]; }
  std::span<const int> predecessors(int idx) const { return in_[static_cast<std::size_t>(idx)]; }

  bool has_edge(int from, int to) const;

  /// Visits edges in (emitter index, receiver index) lexicographic order.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (int u = 0; u < static_cast<int>(nodes_.size()); ++u) {
      for (int v : successors(u)) fn(u, v);
    }
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::size_t edge_count_ = 0;

  friend struct GraphFactory;
};

struct FromEdgeListResult {
  DirectedGraph graph;
  std::size_t dropped_rows = 0;  // self-loops + duplicate edges
};

/// Builds a graph from node records and (emitter, receiver) id pairs.
/// Self-loops and duplicate edges are dropped and counted; an edge endpoint
/// that is not a declared node id is an error naming the offending row.
FromEdgeListResult from_edge_list(std::vector<NodeRecord> nodes,
                                  const std::vector<std::pair<std::string, std::string>>& edges);

std::size_t in_degree(const DirectedGraph& g, int idx, DegreeScope scope = DegreeScope::whole);
std::size_t in_degree(const DirectedGraph& g, const std::string& id,
                      DegreeScope scope = DegreeScope::whole);
std::size_t out_degree(const DirectedGraph& g, int idx);
std::size_t out_degree(const DirectedGraph& g, const std::string& id);

/// Fraction of a node's out-links whose reverse edge exists; 0 when the node
/// has no out-links.
double reciprocity_rate(const DirectedGraph& g, int idx);
double reciprocity_rate(const DirectedGraph& g, const std::string& id);

struct PageRankResult {
  std::vector<double> scores;  // node-index order, sums to 1
  bool converged = false;
  int iterations = 0;
};

/// Power iteration with uniform dangling-mass redistribution. Stops when the
/// L1 change drops below tol; a max_iter exhaustion is flagged, not thrown.
PageRankResult pagerank(const DirectedGraph& g, double damping = 0.85, double tol = 1e-10,
                        int max_iter = 200);
std::map<std::string, double> pagerank_by_id(const DirectedGraph& g, const PageRankResult& pr);

std::size_t common_predecessors(const DirectedGraph& g, int a, int b);
std::size_t common_predecessors(const DirectedGraph& g, const std::string& a,
                                const std::string& b);
std::size_t common_successors(const DirectedGraph& g, int a, int b);
std::size_t common_successors(const DirectedGraph& g, const std::string& a, const std::string& b);

/// 1 iff the reverse edge also exists; the queried edge must exist.
bool is_reciprocal(const DirectedGraph& g, int emitter, int receiver);
bool is_reciprocal(const DirectedGraph& g, const std::string& emitter,
                   const std::string& receiver);

/// Fraction of edges whose reverse edge exists (0 for an edgeless graph).
double reciprocal_edge_fraction(const DirectedGraph& g);

/// Subgraph on the given node indices with all edges of g between them.
DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<int>& keep);

/// Subgraph on is_artist nodes; callers keep the parent graph for
/// whole-network in-degrees.
DirectedGraph induced_artist_subgraph(const DirectedGraph& g);

/// Breadth-first expansion along out-edges from the seeds for cfg.depth
/// iterations, following at most cfg.max_out_degree out-links per node
/// (lowest node index first). Returns the subgraph induced on visited nodes.
DirectedGraph bfs_crawl(const DirectedGraph& g, const CrawlConfig& cfg);

// Flat-file interface. Node file header: id,is_artist,hits,comments,label,genre
// (is_artist in {0,1}); edge file header: emitter,receiver.
std::vector<NodeRecord> read_nodes_csv(const std::string& path);
std::vector<std::pair<std::string, std::string>> read_edges_csv(const std::string& path);
std::string nodes_csv_string(const DirectedGraph& g);
std::string edges_csv_string(const DirectedGraph& g);
void write_nodes_csv(const std::string& path, const DirectedGraph& g);
void write_edges_csv(const std::string& path, const DirectedGraph& g);

}  // namespace netsom
