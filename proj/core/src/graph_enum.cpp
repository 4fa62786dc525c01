#include "failover/graph_enum.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace failover {

namespace {

using Cells = std::vector<std::vector<int>>;

struct Dense {
  int n = 0;
  std::vector<std::uint32_t> adj;  // bitmask rows

  explicit Dense(const Graph& g) : n(g.node_count()), adj(static_cast<std::size_t>(n), 0) {
    for (const Edge& e : g.edges()) {
      adj[e.u] |= 1U << e.v;
      adj[e.v] |= 1U << e.u;
    }
  }
  bool has(int u, int v) const { return (adj[u] >> v) & 1U; }
};

// Splits cells until every vertex of a cell has the same number of
// neighbors in every other cell.
void refine(const Dense& d, Cells& cells) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < cells.size() && !changed; ++s) {
      std::uint32_t splitter = 0;
      for (int v : cells[s]) splitter |= 1U << v;
      for (std::size_t x = 0; x < cells.size(); ++x) {
        if (cells[x].size() < 2) continue;
        std::map<int, std::vector<int>> by_count;
        for (int v : cells[x]) {
          by_count[__builtin_popcount(d.adj[v] & splitter)].push_back(v);
        }
        if (by_count.size() < 2) continue;
        Cells parts;
        for (auto& [count, vs] : by_count) parts.push_back(std::move(vs));
        cells.erase(cells.begin() + static_cast<long>(x));
        cells.insert(cells.begin() + static_cast<long>(x), parts.begin(), parts.end());
        changed = true;
        break;
      }
    }
  }
}

std::uint64_t code_of(const Dense& d, const Cells& cells) {
  std::vector<int> vertex_at(static_cast<std::size_t>(d.n));
  for (std::size_t p = 0; p < cells.size(); ++p) vertex_at[p] = cells[p][0];
  std::uint64_t code = 0;
  int bit = 63;
  for (int i = 0; i < d.n; ++i) {
    for (int j = i + 1; j < d.n; ++j, --bit) {
      if (d.has(vertex_at[i], vertex_at[j])) code |= std::uint64_t{1} << bit;
    }
  }
  return code;
}

bool twins(const Dense& d, int u, int v) {
  std::uint32_t mu = d.adj[u] & ~(1U << v);
  std::uint32_t mv = d.adj[v] & ~(1U << u);
  return mu == mv;
}

void search(const Dense& d, Cells cells, std::uint64_t& best, Cells& best_cells) {
  refine(d, cells);
  auto it = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.size() > 1; });
  if (it == cells.end()) {
    std::uint64_t code = code_of(d, cells);
    if (code < best) {
      best = code;
      best_cells = cells;
    }
    return;
  }
  const std::size_t at = static_cast<std::size_t>(it - cells.begin());
  const std::vector<int> cell = cells[at];
  for (std::size_t k = 0; k < cell.size(); ++k) {
    bool redundant = false;
    for (std::size_t q = 0; q < k && !redundant; ++q) redundant = twins(d, cell[q], cell[k]);
    if (redundant) continue;
    Cells next = cells;
    std::vector<int> rest;
    for (int v : cell) {
      if (v != cell[k]) rest.push_back(v);
    }
    next[at] = {cell[k]};
    next.insert(next.begin() + static_cast<long>(at) + 1, rest);
    search(d, std::move(next), best, best_cells);
  }
}

Cells canonical_cells(const Graph& g, std::uint64_t& code) {
  if (g.node_count() > 11) throw GraphError("canonical form is limited to 11 nodes");
  Dense d(g);
  Cells start;
  if (d.n > 0) {
    std::map<int, std::vector<int>> by_degree;
    for (int v = 0; v < d.n; ++v) by_degree[__builtin_popcount(d.adj[v])].push_back(v);
    for (auto& [deg, vs] : by_degree) start.push_back(std::move(vs));
  }
  code = ~std::uint64_t{0};
  Cells best_cells;
  if (d.n == 0) {
    code = 0;
    return best_cells;
  }
  search(d, start, code, best_cells);
  return best_cells;
}

}  // namespace

std::uint64_t canonical_code(const Graph& g) {
  std::uint64_t code = 0;
  canonical_cells(g, code);
  return code;
}

Graph canonical_form(const Graph& g) {
  std::uint64_t code = 0;
  Cells cells = canonical_cells(g, code);
  std::vector<NodeId> pos(static_cast<std::size_t>(g.node_count()));
  for (std::size_t p = 0; p < cells.size(); ++p) pos[cells[p][0]] = static_cast<NodeId>(p);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back(make_edge(pos[e.u], pos[e.v]));
  return Graph(g.node_count(), edges);
}

std::vector<Graph> enumerate_graphs(const EnumerationFilter& filter) {
  const int n = filter.nodes;
  const int max_pairs = n * (n - 1) / 2;
  const int max_edges = filter.max_edges < 0 ? max_pairs : std::min(filter.max_edges, max_pairs);
  std::vector<Graph> out;
  std::map<std::uint64_t, Graph> level{{0, Graph(n)}};
  for (int m = 0;; ++m) {
    for (auto& [code, g] : level) {
      if (!filter.connected_only || is_connected(g)) out.push_back(g);
    }
    if (m == max_edges) break;
    std::map<std::uint64_t, Graph> next;
    for (auto& [code, g] : level) {
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
          if (g.adjacent(u, v)) continue;
          std::vector<Edge> edges = g.edges();
          edges.push_back({u, v});
          Graph h(n, edges);
          std::uint64_t c = canonical_code(h);
          if (!next.count(c)) next.emplace(c, canonical_form(h));
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

std::vector<Graph> connected_graphs_up_to(int max_nodes, int max_edges) {
  // Grow connected graphs by pendant vertices and extra edges.
  std::vector<Graph> out;
  std::map<std::pair<int, int>, std::map<std::uint64_t, Graph>> layers;
  layers[{1, 0}].emplace(0, Graph(1));
  for (int n = 1; n <= max_nodes; ++n) {
    for (int m = n - 1; m <= std::min(max_edges, n * (n - 1) / 2); ++m) {
      auto found = layers.find({n, m});
      if (found == layers.end()) continue;
      for (auto& [code, g] : found->second) {
        out.push_back(g);
        if (m + 1 <= max_edges) {
          for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
              if (g.adjacent(u, v)) continue;
              std::vector<Edge> edges = g.edges();
              edges.push_back({u, v});
              Graph h(n, edges);
              auto& bucket = layers[{n, m + 1}];
              std::uint64_t c = canonical_code(h);
              if (!bucket.count(c)) bucket.emplace(c, canonical_form(h));
            }
          }
        }
        if (n + 1 <= max_nodes && m + 1 <= max_edges) {
          for (NodeId u = 0; u < n; ++u) {
            std::vector<Edge> edges = g.edges();
            edges.push_back({u, n});
            Graph h(n + 1, edges);
            auto& bucket = layers[{n + 1, m + 1}];
            std::uint64_t c = canonical_code(h);
            if (!bucket.count(c)) bucket.emplace(c, canonical_form(h));
          }
        }
      }
      layers.erase(found);
    }
  }
  return out;
}

}  // namespace failover
