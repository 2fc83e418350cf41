#include "graphstab/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace graphstab {

void Graph::check_node(NodeId u) const {
  if (u >= adj_.size())
    throw std::out_of_range("graph: node " + std::to_string(u) + " out of range (n = " +
                            std::to_string(adj_.size()) + ")");
}

std::size_t Graph::degree(NodeId u) const {
  check_node(u);
  return adj_[u].size();
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  check_node(u);
  return adj_[u];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (NodeId u = 0; u < adj_.size(); ++u)
    for (NodeId v : adj_[u])
      if (u < v) out.push_back({u, v});
  return out;  // already lexicographic: u ascending, neighbors sorted
}

std::vector<std::size_t> Graph::degree_sequence() const {
  std::vector<std::size_t> deg(adj_.size());
  for (std::size_t u = 0; u < adj_.size(); ++u) deg[u] = adj_[u].size();
  return deg;
}

void Graph::insert_unchecked(NodeId u, NodeId v) {
  auto& nu = adj_[u];
  nu.insert(std::lower_bound(nu.begin(), nu.end(), v), v);
  auto& nv = adj_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++num_edges_;
}

void Graph::erase_unchecked(NodeId u, NodeId v) {
  auto& nu = adj_[u];
  nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
  auto& nv = adj_[v];
  nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
  --num_edges_;
}

Graph graph_from_edge_list(std::size_t num_nodes, std::span<const Edge> list) {
  Graph g(num_nodes);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto [u, v] = list[i];
    if (u >= num_nodes || v >= num_nodes)
      throw std::out_of_range("edge list entry " + std::to_string(i) + ": endpoint (" +
                              std::to_string(u) + ", " + std::to_string(v) +
                              ") out of range (n = " + std::to_string(num_nodes) + ")");
    if (u == v)
      throw std::invalid_argument("edge list entry " + std::to_string(i) +
                                  ": self loop at node " + std::to_string(u));
    if (g.has_edge(u, v))
      throw std::invalid_argument("edge list entry " + std::to_string(i) + ": duplicate edge (" +
                                  std::to_string(u) + ", " + std::to_string(v) + ")");
    g.insert_unchecked(u, v);
  }
  return g;
}

Graph add_edge(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  if (u == v)
    throw std::invalid_argument("add_edge: self loop at node " + std::to_string(u));
  if (g.has_edge(u, v))
    throw std::invalid_argument("add_edge: edge (" + std::to_string(u) + ", " +
                                std::to_string(v) + ") already present");
  Graph out = g;
  out.insert_unchecked(u, v);
  return out;
}

Graph delete_edge(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  if (u == v)
    throw std::invalid_argument("delete_edge: self loop at node " + std::to_string(u));
  if (!g.has_edge(u, v))
    throw std::invalid_argument("delete_edge: edge (" + std::to_string(u) + ", " +
                                std::to_string(v) + ") not present");
  Graph out = g;
  out.erase_unchecked(u, v);
  return out;
}

namespace {

// Strips '#' comments, splits everything else into whitespace tokens.
std::vector<long long> read_integers(std::istream& in) {
  std::vector<long long> values;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("edge list: unparseable token '" + token + "'");
      }
    }
  }
  return values;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  const auto values = read_integers(in);
  if (values.size() < 2)
    throw std::invalid_argument("edge list: missing 'n m' header");
  const long long n = values[0];
  const long long m = values[1];
  if (n < 0 || m < 0)
    throw std::invalid_argument("edge list: negative count in header");
  if (static_cast<long long>(values.size()) != 2 + 2 * m)
    throw std::invalid_argument("edge list: header promises " + std::to_string(m) +
                                " edges, found " + std::to_string((values.size() - 2) / 2) +
                                " endpoint pairs plus " +
                                std::to_string((values.size() - 2) % 2) + " stray tokens");
  std::vector<Edge> list;
  list.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    const long long u = values[2 + 2 * i];
    const long long v = values[3 + 2 * i];
    if (u < 0 || v < 0)
      throw std::out_of_range("edge list entry " + std::to_string(i) + ": negative endpoint");
    list.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return graph_from_edge_list(static_cast<std::size_t>(n), list);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open graph file '" + path + "' for writing");
  write_edge_list(g, out);
}

}  // namespace graphstab
