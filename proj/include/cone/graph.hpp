#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cone {

using NodeIndex = std::uint32_t;

/// One line of an edge-list file before reindexing.
struct EdgeRecord {
  std::string src;
  std::string dst;
  double weight = 1.0;
  std::size_t line = 0;  // 0 when the record did not come from a file
};

struct Edge {
  NodeIndex src;
  NodeIndex dst;
  double weight;

  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeIndex node;
  double weight;
};

/// Immutable weighted graph over contiguous node indices [0, n).
///
/// Undirected graphs keep each edge once in edges() but expose both directions
/// through out_neighbors(). Self-loops and zero-weight edges never make it in.
class Graph {
 public:
  Graph() = default;

  /// Reindexes external IDs in order of first appearance. Nodes in `nodes` come
  /// first (in the given order) and are the only way to declare isolated nodes.
  static Graph build(std::span<const EdgeRecord> records, bool directed,
                     std::span<const std::string> nodes = {});

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool directed() const { return directed_; }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> out_neighbors(NodeIndex i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }

  /// Weighted out-degree d_i = sum_j w_ij.
  double degree(NodeIndex i) const { return degree_[i]; }
  std::size_t neighbor_count(NodeIndex i) const { return offsets_[i + 1] - offsets_[i]; }

  /// True if an edge i->j exists (either direction for undirected graphs).
  bool has_edge(NodeIndex i, NodeIndex j) const;

  const std::string& id(NodeIndex i) const { return ids_[i]; }
  std::span<const std::string> ids() const { return ids_; }
  std::optional<NodeIndex> index_of(const std::string& id) const;

  /// Same node IDs in the same order, same edges, same directedness.
  bool operator==(const Graph& other) const {
    return directed_ == other.directed_ && ids_ == other.ids_ && edges_ == other.edges_;
  }

 private:
  void finalize();

  bool directed_ = false;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adj_;  // sorted by node within each row
  std::vector<double> degree_;
};

/// Parses `src dst [weight]` lines; `#` lines and blank lines are skipped.
/// Throws ParseError naming the line for malformed records or negative weights.
std::vector<EdgeRecord> read_edge_list(std::istream& in, const std::string& source = "<edges>");
std::vector<EdgeRecord> read_edge_list_file(const std::string& path);

/// Adds the reverse of every directed edge and returns an undirected graph.
/// When both directions exist the larger weight is kept.
Graph symmetrize(const Graph& g);

}  // namespace cone
