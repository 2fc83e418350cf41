#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace graphstab {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Node signal; one value per node, validated against the graph at the
// operations that consume it.
using Signal = std::vector<double>;

// Simple undirected graph without self loops. Immutable value type: edge
// edits return a new graph, so perturbed copies never alias the original.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_nodes) : adj_(num_nodes) {}

  std::size_t num_nodes() const noexcept { return adj_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::size_t degree(NodeId u) const;
  bool has_edge(NodeId u, NodeId v) const;

  // Sorted ascending.
  std::span<const NodeId> neighbors(NodeId u) const;

  // Lexicographically sorted list with u < v in every entry.
  std::vector<Edge> edges() const;

  std::vector<std::size_t> degree_sequence() const;

 private:
  friend Graph add_edge(const Graph& g, NodeId u, NodeId v);
  friend Graph delete_edge(const Graph& g, NodeId u, NodeId v);
  friend Graph graph_from_edge_list(std::size_t num_nodes, std::span<const Edge> list);

  void check_node(NodeId u) const;
  void insert_unchecked(NodeId u, NodeId v);
  void erase_unchecked(NodeId u, NodeId v);

  std::vector<std::vector<NodeId>> adj_;
  std::size_t num_edges_ = 0;
};

// Builds a graph from (u, v) pairs. Rejects self loops, out-of-range
// endpoints and duplicate edges, naming the offending list entry.
Graph graph_from_edge_list(std::size_t num_nodes, std::span<const Edge> list);

// Returns a copy with the edge added; the edge must not already exist.
Graph add_edge(const Graph& g, NodeId u, NodeId v);

// Returns a copy with the edge removed; the edge must exist.
Graph delete_edge(const Graph& g, NodeId u, NodeId v);

// Text format: header line "n m", then one "u v" line per edge. '#' starts a
// comment that runs to the end of the line. The writer emits edges sorted
// lexicographically, so write(read(x)) is byte stable.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

Graph read_edge_list_file(const std::string& path);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace graphstab
