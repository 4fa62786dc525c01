#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace failover {

using NodeId = std::int32_t;

// Marks "no node": the packet-origination in-port, an absent target, a dropped node.
inline constexpr NodeId kNoNode = -1;

// Bit k set = the k-th neighbor (ascending id order) of a node is cut off.
using PortMask = std::uint64_t;
inline constexpr int kMaxDegree = 64;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Orders the endpoints so that u < v.
Edge make_edge(NodeId a, NodeId b);
std::string to_string(const Edge& e);

using Rotation = std::vector<std::vector<NodeId>>;

class Graph {
 public:
  Graph() = default;
  explicit Graph(int node_count);
  Graph(int node_count, const std::vector<Edge>& edges);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }

  bool contains_node(NodeId v) const { return v >= 0 && v < node_count(); }
  void check_node(NodeId v) const;

  std::span<const NodeId> neighbors(NodeId v) const;
  // Edge indices aligned with neighbors(v).
  std::span<const std::size_t> incident_edges(NodeId v) const;
  int degree(NodeId v) const;
  // Index of u in neighbors(v), or -1.
  int port_index(NodeId v, NodeId u) const;
  bool adjacent(NodeId u, NodeId v) const { return port_index(u, v) >= 0; }
  std::optional<std::size_t> edge_index(NodeId u, NodeId v) const;
  std::size_t require_edge(NodeId u, NodeId v) const;

  bool has_rotation() const { return rotation_.has_value(); }
  const Rotation& rotation() const;
  const std::vector<NodeId>& rotation(NodeId v) const;
  // Throws unless every list is a permutation of that node's neighbors.
  void set_rotation(Rotation rotation);
  void clear_rotation() { rotation_.reset(); }

  std::optional<NodeId> target() const { return target_; }
  std::optional<NodeId> source() const { return source_; }
  void set_target(std::optional<NodeId> t);
  void set_source(std::optional<NodeId> s);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void build(const std::vector<Edge>& edges);

  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<std::size_t>> incident_;
  std::optional<Rotation> rotation_;
  std::optional<NodeId> target_;
  std::optional<NodeId> source_;
};

// Subset of a graph's edges, stored as a bitset over edge indices.
class FailureSet {
 public:
  FailureSet() = default;
  explicit FailureSet(std::size_t edge_count);
  static FailureSet from_edges(const Graph& g, const std::vector<Edge>& edges);
  static FailureSet from_mask(std::size_t edge_count, std::uint64_t mask);

  std::size_t edge_count() const { return edge_count_; }
  bool contains(std::size_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1U;
  }
  void insert(std::size_t index);
  void erase(std::size_t index);
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<std::size_t> indices() const;
  std::vector<Edge> edges(const Graph& g) const;
  FailureSet& operator|=(const FailureSet& other);
  bool is_subset_of(const FailureSet& other) const;

  friend bool operator==(const FailureSet&, const FailureSet&) = default;
  friend bool operator<(const FailureSet& a, const FailureSet& b);

 private:
  std::size_t edge_count_ = 0;
  std::vector<std::uint64_t> words_;
};

FailureSet operator|(FailureSet a, const FailureSet& b);

// F ∩ E(v).
FailureSet local_failures(const Graph& g, const FailureSet& f, NodeId v);
// The same set in port form: bit k = (v, neighbors(v)[k]) failed.
PortMask local_mask(const Graph& g, const FailureSet& f, NodeId v);
PortMask full_mask(int degree);

bool connected(const Graph& g, const FailureSet& f, NodeId u, NodeId v);
// Component label per node in g \ f (labels are the smallest node id of the component).
std::vector<NodeId> components(const Graph& g, const FailureSet& f);
std::vector<int> bfs_distances(const Graph& g, const FailureSet& f, NodeId from);
bool is_connected(const Graph& g);

struct NodeMap {
  std::vector<NodeId> old_of_new;
  std::vector<NodeId> new_of_old;  // kNoNode for removed nodes
};

struct Subdivision {
  Graph graph;
  // Per original edge index: index of its middle link in graph.
  std::vector<std::size_t> middle_edge;
  int original_nodes = 0;
};

// Edge e=(u,v), u<v, gets new nodes n+2e (next to u) and n+2e+1 (next to v).
Subdivision subdivide3(const Graph& g);
NodeId subdivision_node(const Graph& g, NodeId from, NodeId to);
FailureSet lift_to_subdivision(const Subdivision& s, const FailureSet& f);

struct Contraction {
  Graph graph;
  std::vector<Edge> redundant;  // R, in g's ids
  NodeMap map;
};

// Merges j into i. Ids above j shift down by one.
Contraction contract_edge(const Graph& g, NodeId i, NodeId j);

struct Removal {
  Graph graph;
  NodeMap map;
};

Removal induced_remove(const Graph& g, const std::vector<Edge>& drop_edges,
                       const std::vector<NodeId>& drop_nodes);

}  // namespace failover
