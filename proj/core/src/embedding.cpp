#include "failover/embedding.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace failover {

std::vector<NodeId> FaceWalk::nodes() const {
  std::vector<NodeId> out;
  for (const Dart& d : hops) {
    if (std::find(out.begin(), out.end(), d.from) == out.end()) out.push_back(d.from);
  }
  return out;
}

NodeId rotation_successor(const Graph& g, const FailureSet& f, NodeId v, NodeId from) {
  const auto& rot = g.rotation(v);
  auto it = std::find(rot.begin(), rot.end(), from);
  if (it == rot.end()) throw GraphError("not a neighbor in rotation");
  const std::size_t at = static_cast<std::size_t>(it - rot.begin());
  for (std::size_t k = 1; k <= rot.size(); ++k) {
    NodeId x = rot[(at + k) % rot.size()];
    if (!f.contains(g.require_edge(v, x))) return x;
  }
  return from;
}

FaceWalk outer_face_walk(const Graph& g, const FailureSet& f, NodeId start, NodeId first_out) {
  if (!g.has_rotation()) throw GraphError("face walk needs a rotation system");
  g.check_node(start);
  if (local_mask(g, f, start) == full_mask(g.degree(start))) {
    throw GraphError("start node " + std::to_string(start) + " is isolated");
  }
  auto idx = g.edge_index(start, first_out);
  if (!idx || f.contains(*idx)) throw GraphError("first hop is not a live link");

  FaceWalk walk;
  const Dart first{start, first_out};
  Dart cur = first;
  const std::size_t cap = 2 * g.edge_count() + 1;
  do {
    walk.hops.push_back(cur);
    cur = Dart{cur.to, rotation_successor(g, f, cur.to, cur.from)};
    if (walk.hops.size() > cap) throw std::logic_error("face walk did not close");
  } while (cur != first);
  return walk;
}

std::vector<FaceWalk> faces(const Graph& g, const FailureSet& f) {
  if (!g.has_rotation()) throw GraphError("faces need a rotation system");
  std::set<Dart> seen;
  std::vector<FaceWalk> out;
  for (const Edge& e : g.edges()) {
    if (f.contains(g.require_edge(e.u, e.v))) continue;
    for (Dart d : {Dart{e.u, e.v}, Dart{e.v, e.u}}) {
      if (seen.count(d)) continue;
      FaceWalk w = outer_face_walk(g, f, d.from, d.to);
      for (const Dart& h : w.hops) seen.insert(h);
      out.push_back(std::move(w));
    }
  }
  auto least = [](const FaceWalk& w) { return *std::min_element(w.hops.begin(), w.hops.end()); };
  std::sort(out.begin(), out.end(),
            [&](const FaceWalk& a, const FaceWalk& b) { return least(a) < least(b); });
  return out;
}

std::vector<FaceWalk> faces(const Graph& g) {
  return faces(g, FailureSet(g.edge_count()));
}

std::optional<Dart> canonical_dart(const Graph& g, const FailureSet& f) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId u : g.rotation(v)) {
      if (!f.contains(g.require_edge(v, u))) return Dart{v, u};
    }
  }
  return std::nullopt;
}

bool is_planar_embedding(const Graph& g) {
  const FailureSet none(g.edge_count());
  const auto label = components(g, none);
  std::map<NodeId, long> balance;  // V - E + F per component
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 0) balance[label[v]] += 1;
  }
  for (const Edge& e : g.edges()) balance[label[e.u]] -= 1;
  for (const FaceWalk& w : faces(g)) balance[label[w.hops.front().from]] += 1;
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 2; });
}

bool validate_outerplanar(const Graph& g) {
  if (!g.has_rotation()) throw GraphError("outerplanarity check needs a rotation system");
  if (!is_connected(g)) return false;
  if (g.node_count() <= 1) return true;
  if (!is_planar_embedding(g)) return false;
  const FailureSet none(g.edge_count());
  auto start = canonical_dart(g, none);
  FaceWalk walk = outer_face_walk(g, none, start->from, start->to);
  return static_cast<int>(walk.nodes().size()) == g.node_count();
}

namespace {

// Edge sets of the biconnected blocks, in discovery order.
std::vector<std::vector<Edge>> blocks(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<Edge> stack;
  std::vector<std::vector<Edge>> out;
  int clock = 0;
  std::function<void(NodeId, NodeId)> dfs = [&](NodeId v, NodeId parent) {
    disc[v] = low[v] = clock++;
    for (NodeId w : g.neighbors(v)) {
      if (w == parent) continue;
      if (disc[w] < 0) {
        stack.push_back(make_edge(v, w));
        dfs(w, v);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= disc[v]) {
          std::vector<Edge> block;
          Edge top;
          do {
            top = stack.back();
            stack.pop_back();
            block.push_back(top);
          } while (top != make_edge(v, w));
          std::sort(block.begin(), block.end());
          out.push_back(std::move(block));
        }
      } else if (disc[w] < disc[v]) {
        stack.push_back(make_edge(v, w));
        low[v] = std::min(low[v], disc[w]);
      }
    }
  };
  for (NodeId v = 0; v < n; ++v) {
    if (disc[v] < 0) dfs(v, kNoNode);
  }
  return out;
}

bool chords_cross(int a, int b, int c, int d) {
  if (a > b) std::swap(a, b);
  if (a == c || a == d || b == c || b == d) return false;
  bool c_in = a < c && c < b;
  bool d_in = a < d && d < b;
  return c_in != d_in;
}

// A Hamiltonian cycle of the block along which no two chords cross.
std::optional<std::vector<NodeId>> outer_cycle(const std::vector<Edge>& block) {
  std::vector<NodeId> verts;
  for (const Edge& e : block) {
    verts.push_back(e.u);
    verts.push_back(e.v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const std::size_t k = verts.size();
  if (k == 2) return verts;
  if (block.size() > 2 * k - 3) return std::nullopt;

  auto local = [&](NodeId v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<std::vector<int>> adj(k);
  std::vector<std::vector<bool>> is_edge(k, std::vector<bool>(k, false));
  for (const Edge& e : block) {
    int a = local(e.u), b = local(e.v);
    adj[a].push_back(b);
    adj[b].push_back(a);
    is_edge[a][b] = is_edge[b][a] = true;
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<int> path{0};
  std::vector<bool> used(k, false);
  used[0] = true;
  std::vector<int> pos(k, -1);
  std::optional<std::vector<NodeId>> found;

  std::function<bool()> extend = [&]() -> bool {
    if (path.size() == k) {
      if (!is_edge[path.back()][0]) return false;
      // Skip the mirror image of every cycle.
      if (path[1] > path.back()) return false;
      for (std::size_t p = 0; p < k; ++p) pos[path[p]] = static_cast<int>(p);
      std::vector<std::pair<int, int>> chords;
      for (const Edge& e : block) {
        int a = pos[local(e.u)], b = pos[local(e.v)];
        int gap = std::abs(a - b);
        if (gap != 1 && gap != static_cast<int>(k) - 1) chords.emplace_back(a, b);
      }
      for (std::size_t x = 0; x < chords.size(); ++x) {
        for (std::size_t y = x + 1; y < chords.size(); ++y) {
          if (chords_cross(chords[x].first, chords[x].second, chords[y].first, chords[y].second)) {
            return false;
          }
        }
      }
      std::vector<NodeId> cycle;
      for (int p : path) cycle.push_back(verts[p]);
      found = std::move(cycle);
      return true;
    }
    for (int w : adj[path.back()]) {
      if (used[w]) continue;
      used[w] = true;
      path.push_back(w);
      if (extend()) return true;
      path.pop_back();
      used[w] = false;
    }
    return false;
  };
  extend();
  return found;
}

}  // namespace

std::optional<Rotation> find_outerplanar_rotation(const Graph& g, EmbeddingLimits limits) {
  if (g.node_count() > limits.max_nodes) {
    throw LimitError("outerplanar rotation search is limited to " +
                     std::to_string(limits.max_nodes) + " nodes");
  }
  if (!is_connected(g)) throw GraphError("outerplanar rotation search needs a connected graph");
  Rotation rot(static_cast<std::size_t>(g.node_count()));
  for (const auto& block : blocks(g)) {
    auto cycle = outer_cycle(block);
    if (!cycle) return std::nullopt;
    const int k = static_cast<int>(cycle->size());
    std::map<NodeId, int> pos;
    for (int p = 0; p < k; ++p) pos[(*cycle)[p]] = p;
    std::map<NodeId, std::vector<NodeId>> local;
    for (const Edge& e : block) {
      local[e.u].push_back(e.v);
      local[e.v].push_back(e.u);
    }
    for (auto& [v, nbrs] : local) {
      const int pv = pos[v];
      std::sort(nbrs.begin(), nbrs.end(), [&](NodeId a, NodeId b) {
        return (pos[a] - pv + k) % k < (pos[b] - pv + k) % k;
      });
      rot[v].insert(rot[v].end(), nbrs.begin(), nbrs.end());
    }
  }
  Graph candidate = g;
  candidate.set_rotation(rot);
  if (!validate_outerplanar(candidate)) {
    throw std::logic_error("assembled outerplanar rotation failed validation");
  }
  return rot;
}

}  // namespace failover
