#include "failover/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>

namespace failover {

Edge make_edge(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

std::string to_string(const Edge& e) {
  return std::to_string(e.u) + "-" + std::to_string(e.v);
}

Graph::Graph(int node_count) {
  if (node_count < 0) throw GraphError("negative node count");
  adjacency_.resize(static_cast<std::size_t>(node_count));
  incident_.resize(static_cast<std::size_t>(node_count));
}

Graph::Graph(int node_count, const std::vector<Edge>& edges) : Graph(node_count) {
  build(edges);
}

void Graph::build(const std::vector<Edge>& edges) {
  edges_.clear();
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    check_node(e.u);
    check_node(e.v);
    if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u));
    edges_.push_back(make_edge(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) throw GraphError("duplicate edge " + to_string(*dup));

  for (auto& a : adjacency_) a.clear();
  for (auto& a : incident_) a.clear();
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    adjacency_[edges_[k].u].push_back(edges_[k].v);
    adjacency_[edges_[k].v].push_back(edges_[k].u);
  }
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    auto& adj = adjacency_[v];
    std::sort(adj.begin(), adj.end());
    if (adj.size() > static_cast<std::size_t>(kMaxDegree)) {
      throw GraphError("node " + std::to_string(v) + " exceeds the maximum degree");
    }
    incident_[v].reserve(adj.size());
    for (NodeId u : adj) {
      Edge key = make_edge(static_cast<NodeId>(v), u);
      auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
      incident_[v].push_back(static_cast<std::size_t>(it - edges_.begin()));
    }
  }
}

void Graph::check_node(NodeId v) const {
  if (!contains_node(v)) throw GraphError("invalid node id " + std::to_string(v));
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  return adjacency_[v];
}

std::span<const std::size_t> Graph::incident_edges(NodeId v) const {
  check_node(v);
  return incident_[v];
}

int Graph::degree(NodeId v) const {
  check_node(v);
  return static_cast<int>(adjacency_[v].size());
}

int Graph::port_index(NodeId v, NodeId u) const {
  check_node(v);
  const auto& adj = adjacency_[v];
  auto it = std::lower_bound(adj.begin(), adj.end(), u);
  if (it == adj.end() || *it != u) return -1;
  return static_cast<int>(it - adj.begin());
}

std::optional<std::size_t> Graph::edge_index(NodeId u, NodeId v) const {
  if (!contains_node(u) || !contains_node(v)) return std::nullopt;
  int k = port_index(u, v);
  if (k < 0) return std::nullopt;
  return incident_[u][k];
}

std::size_t Graph::require_edge(NodeId u, NodeId v) const {
  auto idx = edge_index(u, v);
  if (!idx) throw GraphError("not an edge: " + to_string(make_edge(u, v)));
  return *idx;
}

const Rotation& Graph::rotation() const {
  if (!rotation_) throw GraphError("graph has no rotation system");
  return *rotation_;
}

const std::vector<NodeId>& Graph::rotation(NodeId v) const {
  check_node(v);
  return rotation().at(v);
}

void Graph::set_rotation(Rotation rotation) {
  if (rotation.size() != adjacency_.size()) {
    throw GraphError("rotation must list every node");
  }
  for (std::size_t v = 0; v < rotation.size(); ++v) {
    std::vector<NodeId> sorted = rotation[v];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != adjacency_[v]) {
      throw GraphError("rotation of node " + std::to_string(v) +
                       " is not a permutation of its neighbors");
    }
  }
  rotation_ = std::move(rotation);
}

void Graph::set_target(std::optional<NodeId> t) {
  if (t) {
    check_node(*t);
    if (source_ && *source_ == *t) throw GraphError("target equals source");
  }
  target_ = t;
}

void Graph::set_source(std::optional<NodeId> s) {
  if (s) {
    check_node(*s);
    if (target_ && *target_ == *s) throw GraphError("source equals target");
  }
  source_ = s;
}

FailureSet::FailureSet(std::size_t edge_count)
    : edge_count_(edge_count), words_((edge_count + 63) / 64, 0) {
  if (words_.empty()) words_.push_back(0);
}

FailureSet FailureSet::from_edges(const Graph& g, const std::vector<Edge>& edges) {
  FailureSet f(g.edge_count());
  for (const Edge& e : edges) f.insert(g.require_edge(e.u, e.v));
  return f;
}

FailureSet FailureSet::from_mask(std::size_t edge_count, std::uint64_t mask) {
  FailureSet f(edge_count);
  if (edge_count < 64 && (mask >> edge_count) != 0) {
    throw GraphError("failure mask references missing edges");
  }
  f.words_[0] = mask;
  return f;
}

void FailureSet::insert(std::size_t index) {
  if (index >= edge_count_) throw GraphError("failure index out of range");
  words_[index >> 6] |= std::uint64_t{1} << (index & 63);
}

void FailureSet::erase(std::size_t index) {
  if (index >= edge_count_) throw GraphError("failure index out of range");
  words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63));
}

std::size_t FailureSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> FailureSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < edge_count_; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::vector<Edge> FailureSet::edges(const Graph& g) const {
  std::vector<Edge> out;
  for (std::size_t k : indices()) out.push_back(g.edge(k));
  return out;
}

FailureSet& FailureSet::operator|=(const FailureSet& other) {
  if (other.edge_count_ != edge_count_) throw GraphError("failure sets of different graphs");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  return *this;
}

bool FailureSet::is_subset_of(const FailureSet& other) const {
  if (other.edge_count_ != edge_count_) return false;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & ~other.words_[k]) != 0) return false;
  }
  return true;
}

bool operator<(const FailureSet& a, const FailureSet& b) {
  if (a.edge_count_ != b.edge_count_) return a.edge_count_ < b.edge_count_;
  return std::lexicographical_compare(a.words_.rbegin(), a.words_.rend(), b.words_.rbegin(),
                                      b.words_.rend());
}

FailureSet operator|(FailureSet a, const FailureSet& b) {
  a |= b;
  return a;
}

FailureSet local_failures(const Graph& g, const FailureSet& f, NodeId v) {
  FailureSet out(g.edge_count());
  for (std::size_t e : g.incident_edges(v)) {
    if (f.contains(e)) out.insert(e);
  }
  return out;
}

PortMask local_mask(const Graph& g, const FailureSet& f, NodeId v) {
  PortMask mask = 0;
  auto inc = g.incident_edges(v);
  for (std::size_t k = 0; k < inc.size(); ++k) {
    if (f.contains(inc[k])) mask |= PortMask{1} << k;
  }
  return mask;
}

PortMask full_mask(int degree) {
  return degree >= 64 ? ~PortMask{0} : (PortMask{1} << degree) - 1;
}

std::vector<int> bfs_distances(const Graph& g, const FailureSet& f, NodeId from) {
  g.check_node(from);
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::deque<NodeId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    auto nb = g.neighbors(v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (f.contains(inc[k]) || dist[nb[k]] >= 0) continue;
      dist[nb[k]] = dist[v] + 1;
      queue.push_back(nb[k]);
    }
  }
  return dist;
}

bool connected(const Graph& g, const FailureSet& f, NodeId u, NodeId v) {
  g.check_node(v);
  if (u == v) {
    g.check_node(u);
    return true;
  }
  return bfs_distances(g, f, u)[v] >= 0;
}

std::vector<NodeId> components(const Graph& g, const FailureSet& f) {
  std::vector<NodeId> label(static_cast<std::size_t>(g.node_count()), kNoNode);
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] != kNoNode) continue;
    std::vector<NodeId> stack{s};
    label[s] = s;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      auto nb = g.neighbors(v);
      auto inc = g.incident_edges(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (f.contains(inc[k]) || label[nb[k]] != kNoNode) continue;
        label[nb[k]] = s;
        stack.push_back(nb[k]);
      }
    }
  }
  return label;
}

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  auto label = components(g, FailureSet(g.edge_count()));
  return std::all_of(label.begin(), label.end(), [](NodeId l) { return l == 0; });
}

NodeId subdivision_node(const Graph& g, NodeId from, NodeId to) {
  std::size_t e = g.require_edge(from, to);
  NodeId base = g.node_count() + 2 * static_cast<NodeId>(e);
  return from < to ? base : base + 1;
}

Subdivision subdivide3(const Graph& g) {
  const int n = g.node_count();
  const int m = static_cast<int>(g.edge_count());
  std::vector<Edge> edges;
  edges.reserve(3 * static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Edge& e = g.edge(k);
    NodeId uv = n + 2 * k;
    NodeId vu = uv + 1;
    edges.push_back({e.u, uv});
    edges.push_back({uv, vu});
    edges.push_back({vu, e.v});
  }
  Subdivision s;
  s.original_nodes = n;
  s.graph = Graph(n + 2 * m, edges);
  s.middle_edge.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    s.middle_edge[k] = s.graph.require_edge(n + 2 * k, n + 2 * k + 1);
  }
  if (g.has_rotation()) {
    Rotation rot(static_cast<std::size_t>(n + 2 * m));
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : g.rotation(v)) rot[v].push_back(subdivision_node(g, v, u));
    }
    for (int k = 0; k < m; ++k) {
      const Edge& e = g.edge(k);
      rot[n + 2 * k] = {e.u, n + 2 * k + 1};
      rot[n + 2 * k + 1] = {n + 2 * k, e.v};
    }
    s.graph.set_rotation(std::move(rot));
  }
  s.graph.set_target(g.target());
  s.graph.set_source(g.source());
  return s;
}

FailureSet lift_to_subdivision(const Subdivision& s, const FailureSet& f) {
  FailureSet out(s.graph.edge_count());
  for (std::size_t k : f.indices()) out.insert(s.middle_edge.at(k));
  return out;
}

namespace {

std::optional<NodeId> map_optional(const std::optional<NodeId>& v, const NodeMap& map) {
  if (!v) return std::nullopt;
  NodeId mapped = map.new_of_old[*v];
  if (mapped == kNoNode) return std::nullopt;
  return mapped;
}

}  // namespace

Contraction contract_edge(const Graph& g, NodeId i, NodeId j) {
  g.require_edge(i, j);
  const int n = g.node_count();
  Contraction c;
  c.map.new_of_old.assign(static_cast<std::size_t>(n), kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    if (v == j) continue;
    c.map.new_of_old[v] = static_cast<NodeId>(c.map.old_of_new.size());
    c.map.old_of_new.push_back(v);
  }
  for (NodeId r : g.neighbors(j)) {
    if (r != i && g.adjacent(i, r)) c.redundant.push_back(make_edge(j, r));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    NodeId a = e.u == j ? i : e.u;
    NodeId b = e.v == j ? i : e.v;
    if (a == b) continue;
    edges.push_back(make_edge(c.map.new_of_old[a], c.map.new_of_old[b]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  c.graph = Graph(n - 1, edges);

  // Splice j's rotation into i's at the position of j when no parallels collapse.
  if (g.has_rotation() && c.redundant.empty()) {
    Rotation rot(static_cast<std::size_t>(n - 1));
    for (NodeId v = 0; v < n; ++v) {
      if (v == j) continue;
      auto& out = rot[c.map.new_of_old[v]];
      for (NodeId u : g.rotation(v)) {
        if (v == i && u == j) {
          const auto& rj = g.rotation(j);
          auto at = std::find(rj.begin(), rj.end(), i) - rj.begin();
          for (std::size_t k = 1; k < rj.size(); ++k) {
            out.push_back(c.map.new_of_old[rj[(at + k) % rj.size()]]);
          }
        } else {
          out.push_back(c.map.new_of_old[u == j ? i : u]);
        }
      }
    }
    c.graph.set_rotation(std::move(rot));
  }
  c.graph.set_target(map_optional(g.target(), c.map));
  c.graph.set_source(map_optional(g.source(), c.map));
  return c;
}

Removal induced_remove(const Graph& g, const std::vector<Edge>& drop_edges,
                       const std::vector<NodeId>& drop_nodes) {
  const int n = g.node_count();
  std::vector<bool> node_dropped(static_cast<std::size_t>(n), false);
  for (NodeId v : drop_nodes) {
    g.check_node(v);
    node_dropped[v] = true;
  }
  std::vector<bool> edge_dropped(g.edge_count(), false);
  for (const Edge& e : drop_edges) edge_dropped[g.require_edge(e.u, e.v)] = true;

  Removal r;
  r.map.new_of_old.assign(static_cast<std::size_t>(n), kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    if (node_dropped[v]) continue;
    r.map.new_of_old[v] = static_cast<NodeId>(r.map.old_of_new.size());
    r.map.old_of_new.push_back(v);
  }
  auto keep = [&](NodeId a, NodeId b) {
    auto idx = g.edge_index(a, b);
    return idx && !edge_dropped[*idx] && !node_dropped[a] && !node_dropped[b];
  };
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (keep(e.u, e.v)) edges.push_back({r.map.new_of_old[e.u], r.map.new_of_old[e.v]});
  }
  r.graph = Graph(static_cast<int>(r.map.old_of_new.size()), edges);
  if (g.has_rotation()) {
    Rotation rot(r.map.old_of_new.size());
    for (std::size_t nv = 0; nv < r.map.old_of_new.size(); ++nv) {
      NodeId v = r.map.old_of_new[nv];
      for (NodeId u : g.rotation(v)) {
        if (keep(v, u)) rot[nv].push_back(r.map.new_of_old[u]);
      }
    }
    r.graph.set_rotation(std::move(rot));
  }
  r.graph.set_target(map_optional(g.target(), r.map));
  r.graph.set_source(map_optional(g.source(), r.map));
  return r;
}

}  // namespace failover
