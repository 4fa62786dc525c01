#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "failover/routing.hpp"

namespace oracle {

using failover::kNoNode;
using failover::PortMask;

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

PortMask mask_at(const Graph& g, const FailureSet& f, NodeId v) {
  PortMask m = 0;
  auto nb = g.neighbors(v);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (f.contains(*g.edge_index(v, nb[k]))) m |= PortMask{1} << k;
  }
  return m;
}

std::vector<NodeId> default_sources(const Graph& g, NodeId tgt) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v != tgt) out.push_back(v);
  }
  return out;
}

}  // namespace

bool connected(const Graph& g, const FailureSet& f, NodeId u, NodeId v) {
  UnionFind uf(g.node_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!f.contains(e)) uf.unite(g.edge(e).u, g.edge(e).v);
  }
  return uf.find(u) == uf.find(v);
}

Walk walk(const Graph& g, const FailureSet& f, const Pattern& p, NodeId src, NodeId tgt) {
  const NodeId key_src = p.source_matching() ? src : kNoNode;
  std::set<std::pair<NodeId, NodeId>> seen;
  Walk w;
  NodeId v = src;
  NodeId in = kNoNode;
  w.nodes.push_back(v);
  while (v != tgt) {
    if (!seen.insert({v, in}).second) {
      w.end = WalkEnd::Loop;
      return w;
    }
    auto r = failover::eval(p, g, v, in, f, key_src);
    if (!r.ok()) {
      w.end = WalkEnd::Dead;
      return w;
    }
    in = v;
    v = r.out;
    w.nodes.push_back(v);
    ++w.hops;
  }
  w.end = WalkEnd::Delivered;
  return w;
}

HarnessTotals& totals() {
  static HarnessTotals t;
  return t;
}

void record(const Graph& g, const failover::RouteTrace& t) {
  HarnessTotals& tot = totals();
  ++tot.traces;
  tot.max_hops = std::max(tot.max_hops, t.hops.size());
  if (t.hops.size() > 2 * g.edge_count() + 2) ++tot.over_bound;
  if (t.delivered() && t.node_sequence().back() != t.target) ++tot.misdelivered;
}

HarnessResult exhaustive(const Graph& g, const Pattern& p, NodeId tgt,
                         const std::vector<FailureSet>& sets, const std::vector<NodeId>& sources) {
  const auto srcs = sources.empty() ? default_sources(g, tgt) : sources;
  HarnessTotals& tot = totals();
  HarnessResult res;
  for (const FailureSet& f : sets) {
    for (NodeId s : srcs) {
      ++res.checked;
      bool delivered = false;
      try {
        auto t = failover::route(g, f, p, s, tgt);
        record(g, t);
        delivered = t.delivered();
        Walk w = walk(g, f, p, s, tgt);
        if ((w.end == WalkEnd::Delivered) != delivered || (delivered && w.nodes != t.node_sequence())) {
          ++tot.exceptions;
        }
      } catch (const std::exception&) {
        ++tot.exceptions;
      }
      if (delivered != oracle::connected(g, f, s, tgt)) {
        if (!res.first_violation) {
          res.first_violation = f;
          res.violating_source = s;
        }
        ++res.violations;
      }
    }
  }
  return res;
}

std::vector<FailureSet> all_subsets(const Graph& g) {
  const std::size_t m = g.edge_count();
  std::vector<FailureSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    out.push_back(FailureSet::from_mask(m, mask));
  }
  return out;
}

std::vector<FailureSet> subsets_up_to(const Graph& g, int k) {
  const std::size_t m = g.edge_count();
  std::vector<FailureSet> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    FailureSet f(m);
    for (std::size_t e : pick) f.insert(e);
    out.push_back(f);
    if (static_cast<int>(pick.size()) == k) return;
    for (std::size_t e = from; e < m; ++e) {
      pick.push_back(e);
      self(self, e + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<NodeId> perm(static_cast<std::size_t>(a.node_count()));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : a.edges()) {
      if (!b.adjacent(perm[e.u], perm[e.v])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Graph random_connected(std::mt19937& rng, int n, int extra_edges) {
  std::set<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v) {
    NodeId u = std::uniform_int_distribution<NodeId>(0, v - 1)(rng);
    edges.insert({u, v});
  }
  const std::size_t cap = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  for (int k = 0; k < extra_edges && edges.size() < cap;) {
    NodeId a = pick(rng);
    NodeId b = pick(rng);
    if (a == b) continue;
    if (edges.insert({std::min(a, b), std::max(a, b)}).second) ++k;
  }
  std::vector<failover::Edge> list;
  for (auto [u, v] : edges) list.push_back({u, v});
  return Graph(n, list);
}

namespace {

struct BruteForce {
  const Graph& g;
  NodeId tgt;
  const std::vector<FailureSet>& sets;
  bool source_matching;
  std::vector<NodeId> sources;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::map<failover::TableKey, NodeId> table;

  // Returns the first undefined key met, or std::nullopt when everything delivers.
  // Sets `failed` when some pair loops.
  std::optional<failover::TableKey> scan(bool& failed) {
    for (const FailureSet& f : sets) {
      for (NodeId s : sources) {
        if (!oracle::connected(g, f, s, tgt)) continue;
        std::set<std::pair<NodeId, NodeId>> seen;
        NodeId v = s;
        NodeId in = kNoNode;
        while (v != tgt) {
          if (!seen.insert({v, in}).second) {
            failed = true;
            return std::nullopt;
          }
          failover::TableKey key{v, mask_at(g, f, v), in, source_matching ? s : kNoNode};
          auto it = table.find(key);
          if (it == table.end()) return key;
          in = v;
          v = it->second;
        }
      }
    }
    return std::nullopt;
  }

  bool solve() {
    bool failed = false;
    auto key = scan(failed);
    if (failed) return false;
    if (!key) return true;
    auto nb = g.neighbors(key->node);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if ((key->failed >> k) & 1U) continue;
      if (++nodes > budget) {
        exhausted = true;
        return false;
      }
      table[*key] = nb[k];
      if (solve()) return true;
      table.erase(*key);
      if (exhausted) return false;
    }
    return false;
  }
};

}  // namespace

std::optional<bool> brute_force_solvable(const Graph& g, NodeId tgt, const std::vector<FailureSet>& sets,
                                         bool source_matching, std::optional<NodeId> src,
                                         std::uint64_t budget) {
  BruteForce bf{g, tgt, sets, source_matching, src ? std::vector<NodeId>{*src} : default_sources(g, tgt),
                budget, 0, false, {}};
  bool ok = bf.solve();
  if (bf.exhausted) return std::nullopt;
  return ok;
}

bool table_survives(const Graph& g, const failover::PatternTable& table, NodeId tgt,
                    const std::vector<FailureSet>& sets, std::optional<NodeId> src) {
  const auto sources = src ? std::vector<NodeId>{*src} : default_sources(g, tgt);
  for (const FailureSet& f : sets) {
    for (NodeId s : sources) {
      if (!oracle::connected(g, f, s, tgt)) continue;
      std::set<std::pair<NodeId, NodeId>> seen;
      NodeId v = s;
      NodeId in = kNoNode;
      while (v != tgt) {
        if (!seen.insert({v, in}).second) return false;
        auto out = table.lookup({v, mask_at(g, f, v), in, table.source_matching() ? s : kNoNode});
        if (!out) return false;
        in = v;
        v = *out;
      }
    }
  }
  return true;
}

}  // namespace oracle
