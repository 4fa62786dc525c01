#include "failover/transforms.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace failover {

namespace {

bool bit(PortMask m, int k) { return (m >> k) & 1U; }

using LocalEval = std::function<EvalResult(NodeId v, NodeId in, PortMask failed, NodeId src)>;

// Expands `fn` into a table over every key of gp; undefined keys are left out.
PatternTable tabulate(const Graph& gp, NodeId tgt, bool source_matching, std::optional<NodeId> src,
                      const LocalEval& fn) {
  PatternTable table(source_matching);
  std::vector<NodeId> sources;
  if (!source_matching) {
    sources.push_back(kNoNode);
  } else if (src) {
    sources.push_back(*src);
  } else {
    for (NodeId s = 0; s < gp.node_count(); ++s) {
      if (s != tgt) sources.push_back(s);
    }
  }
  for (NodeId v = 0; v < gp.node_count(); ++v) {
    if (v == tgt) continue;
    const int deg = gp.degree(v);
    if (deg == 0) continue;
    if (deg > 20) throw TransferError("node degree too large to tabulate");
    const auto nb = gp.neighbors(v);
    for (PortMask failed = 0; failed < full_mask(deg); ++failed) {
      for (int in_pos = -1; in_pos < deg; ++in_pos) {
        if (in_pos >= 0 && bit(failed, in_pos)) continue;
        const NodeId in = in_pos < 0 ? kNoNode : nb[in_pos];
        for (NodeId s : sources) {
          EvalResult r = fn(v, in, failed, s);
          if (r.ok()) table.set(gp, {v, failed, in, s}, r.out);
        }
      }
    }
  }
  return table;
}

NodeId old_id(NodeId v, const NodeMap& map) { return v == kNoNode ? kNoNode : map.old_of_new[v]; }

// Owner of the merged node's port towards old neighbor r.
NodeId owner(const Graph& g, NodeId i, NodeId j, NodeId r) { return g.adjacent(i, r) ? i : j; }

FailureSet lift_contracted_impl(const Graph& g, const Graph& gp, const std::vector<NodeId>& old_of_new,
                                const std::vector<Edge>& redundant, NodeId i, NodeId j,
                                const FailureSet& f_prime) {
  if (f_prime.edge_count() != gp.edge_count()) throw TransferError("failure set belongs to another graph");
  FailureSet out(g.edge_count());
  for (const Edge& e : redundant) out.insert(g.require_edge(e.u, e.v));
  for (std::size_t k : f_prime.indices()) {
    const Edge& e = gp.edge(k);
    NodeId a = old_of_new[e.u];
    NodeId b = old_of_new[e.v];
    if (a == i) a = owner(g, i, j, b);
    if (b == i) b = owner(g, i, j, a);
    out.insert(g.require_edge(a, b));
  }
  return out;
}

void require_kept(const NodeMap& map, NodeId v, const char* what) {
  if (map.new_of_old[v] == kNoNode) throw TransferError(std::string(what) + " is not part of the subgraph");
}

}  // namespace

Transfer subgraph_transfer(const Pattern& a, const Graph& g, const std::vector<Edge>& drop_edges,
                           const std::vector<NodeId>& drop_nodes, NodeId tgt,
                           std::optional<NodeId> src) {
  g.check_node(tgt);
  Removal r = [&] {
    try {
      return induced_remove(g, drop_edges, drop_nodes);
    } catch (const GraphError& e) {
      throw TransferError(e.what());
    }
  }();
  require_kept(r.map, tgt, "target");
  if (src) require_kept(r.map, *src, "source");

  Transfer t;
  t.graph = r.graph;
  t.map = r.map;
  t.target = r.map.new_of_old[tgt];
  if (src) t.source = r.map.new_of_old[*src];
  const bool sm = a.source_matching();
  const Graph& gp = t.graph;
  const NodeMap& map = t.map;
  t.pattern = tabulate(gp, t.target, sm, sm ? t.source : std::nullopt,
                       [&](NodeId v, NodeId in, PortMask failed, NodeId s) -> EvalResult {
                         const NodeId ov = map.old_of_new[v];
                         PortMask mask = 0;
                         const auto nb = g.neighbors(ov);
                         for (std::size_t k = 0; k < nb.size(); ++k) {
                           const NodeId u = map.new_of_old[nb[k]];
                           const int p = u == kNoNode ? -1 : gp.port_index(v, u);
                           if (p < 0 || bit(failed, p)) mask |= PortMask{1} << k;
                         }
                         const NodeId oin = in == kNoNode ? kNoNode : map.old_of_new[in];
                         EvalResult res = eval(a, g, ov, oin, mask, old_id(s, map));
                         if (res.ok()) res.out = map.new_of_old[res.out];
                         return res;
                       });
  return t;
}

Transfer subgraph_transfer(const Pattern& a, const Graph& g, const Graph& gp, NodeId tgt,
                           std::optional<NodeId> src) {
  if (gp.node_count() > g.node_count()) throw TransferError("not a subgraph: too many nodes");
  std::vector<NodeId> drop_nodes;
  for (NodeId v = gp.node_count(); v < g.node_count(); ++v) drop_nodes.push_back(v);
  for (const Edge& e : gp.edges()) {
    if (!g.adjacent(e.u, e.v)) throw TransferError("not a subgraph: missing edge " + to_string(e));
  }
  std::vector<Edge> drop_edges;
  for (const Edge& e : g.edges()) {
    if (e.v < gp.node_count() && !gp.adjacent(e.u, e.v)) drop_edges.push_back(e);
  }
  return subgraph_transfer(a, g, drop_edges, drop_nodes, tgt, src);
}

Transfer contract_pattern(const Pattern& a, const Graph& g, NodeId i, NodeId j, NodeId tgt,
                          std::optional<NodeId> src) {
  g.check_node(tgt);
  if (!g.contains_node(i) || !g.contains_node(j) || !g.adjacent(i, j)) {
    throw TransferError("contraction needs an edge");
  }
  Contraction c = contract_edge(g, i, j);
  c.map.new_of_old[j] = c.map.new_of_old[i];

  Transfer t;
  t.graph = c.graph;
  t.map = c.map;
  t.target = c.map.new_of_old[tgt];
  if (src) t.source = c.map.new_of_old[*src];
  const NodeId merged = c.map.new_of_old[i];
  const Graph& gp = t.graph;
  const NodeMap& map = t.map;
  std::vector<bool> in_r(g.edge_count(), false);
  for (const Edge& e : c.redundant) in_r[g.require_edge(e.u, e.v)] = true;
  const std::size_t cap = static_cast<std::size_t>(g.degree(i) + g.degree(j));

  // G-side mask of an unmerged node (or of i / j) given the contracted mask at v'.
  auto g_mask = [&](NodeId ov, NodeId v, PortMask failed) {
    PortMask mask = 0;
    const auto nb = g.neighbors(ov);
    const auto inc = g.incident_edges(ov);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeId u = nb[k];
      if (in_r[inc[k]]) {
        mask |= PortMask{1} << k;
        continue;
      }
      if ((ov == i && u == j) || (ov == j && u == i)) continue;
      const int p = gp.port_index(v, map.new_of_old[u]);
      if (bit(failed, p)) mask |= PortMask{1} << k;
    }
    return mask;
  };

  t.pattern = tabulate(
      gp, t.target, a.source_matching(), a.source_matching() ? t.source : std::nullopt,
      [&](NodeId v, NodeId in, PortMask failed, NodeId s) -> EvalResult {
        const NodeId os = s == kNoNode ? kNoNode : map.old_of_new[s];
        if (v != merged) {
          const NodeId ov = map.old_of_new[v];
          NodeId oin = kNoNode;
          if (in != kNoNode) oin = in == merged ? owner(g, i, j, ov) : map.old_of_new[in];
          EvalResult res = eval(a, g, ov, oin, g_mask(ov, v, failed), os);
          if (res.ok()) res.out = map.new_of_old[res.out];
          return res;
        }
        NodeId x = i;
        NodeId oin = kNoNode;
        if (in != kNoNode) {
          oin = map.old_of_new[in];
          x = owner(g, i, j, oin);
        }
        const PortMask mask_i = g_mask(i, v, failed);
        const PortMask mask_j = g_mask(j, v, failed);
        for (std::size_t step = 0; step <= cap; ++step) {
          EvalResult res = eval(a, g, x, oin, x == i ? mask_i : mask_j, os);
          if (!res.ok()) return res;
          if (res.out != i && res.out != j) {
            res.out = map.new_of_old[res.out];
            return res;
          }
          oin = x;
          x = res.out;
        }
        return {EvalStatus::Undefined, kNoNode};
      });
  return t;
}

FailureSet lift_contracted(const Graph& g, const Contraction& c, NodeId i, NodeId j,
                           const FailureSet& f_prime) {
  return lift_contracted_impl(g, c.graph, c.map.old_of_new, c.redundant, i, j, f_prime);
}

namespace {

std::vector<NodeId> collapse(std::vector<NodeId> seq) {
  seq.erase(std::unique(seq.begin(), seq.end()), seq.end());
  return seq;
}

bool prefix_related(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  return std::equal(a.begin(), a.begin() + static_cast<long>(n), b.begin());
}

}  // namespace

bool path_correspondence(const Pattern& a, const Graph& g, NodeId i, NodeId j,
                         const FailureSet& f_prime, NodeId src, NodeId tgt,
                         const Pattern* contracted) {
  Contraction c = contract_edge(g, i, j);
  c.map.new_of_old[j] = c.map.new_of_old[i];
  g.check_node(tgt);
  const NodeId osrc = c.map.old_of_new.at(src);
  const NodeId ctgt = c.map.new_of_old[tgt];
  if (src == ctgt) throw GraphError("source equals target");
  std::optional<Pattern> own;
  if (!contracted) {
    own.emplace(contract_pattern(a, g, i, j, tgt).pattern);
    contracted = &*own;
  }
  RouteTrace p = route(g, lift_contracted(g, c, i, j, f_prime), a, osrc, tgt);
  RouteTrace q = route(c.graph, f_prime, *contracted, src, ctgt);
  std::vector<NodeId> rewritten;
  for (NodeId v : p.node_sequence()) rewritten.push_back(c.map.new_of_old[v]);
  rewritten = collapse(std::move(rewritten));
  const std::vector<NodeId> other = q.node_sequence();
  if (p.delivered() != q.delivered()) return false;
  if (p.delivered()) return rewritten == other;
  return prefix_related(rewritten, other);
}

TransferStep TransferStep::subgraph(std::vector<Edge> edges, std::vector<NodeId> nodes) {
  TransferStep s;
  s.kind = Kind::Subgraph;
  s.drop_edges = std::move(edges);
  s.drop_nodes = std::move(nodes);
  return s;
}

TransferStep TransferStep::contraction(NodeId i, NodeId j) {
  TransferStep s;
  s.kind = Kind::Contraction;
  s.i = i;
  s.j = j;
  return s;
}

std::vector<AppliedStep> apply_steps(const Graph& g, const std::vector<TransferStep>& steps) {
  std::vector<AppliedStep> out;
  Graph cur = g;
  for (const TransferStep& s : steps) {
    AppliedStep a;
    a.step = s;
    a.before = cur;
    try {
      if (s.kind == TransferStep::Kind::Subgraph) {
        Removal r = induced_remove(cur, s.drop_edges, s.drop_nodes);
        a.after = std::move(r.graph);
        a.map = std::move(r.map);
      } else {
        if (!cur.contains_node(s.i) || !cur.contains_node(s.j) || !cur.adjacent(s.i, s.j)) {
          throw TransferError("contraction step needs an edge");
        }
        Contraction c = contract_edge(cur, s.i, s.j);
        c.map.new_of_old[s.j] = c.map.new_of_old[s.i];
        a.after = std::move(c.graph);
        a.map = std::move(c.map);
        a.redundant = std::move(c.redundant);
      }
    } catch (const GraphError& e) {
      throw TransferError(std::string("invalid transfer step: ") + e.what());
    }
    cur = a.after;
    out.push_back(std::move(a));
  }
  return out;
}

MinorTransfer minor_transfer(const Pattern& a, const Graph& g, const std::vector<TransferStep>& steps,
                             NodeId tgt, std::optional<NodeId> src) {
  g.check_node(tgt);
  MinorTransfer out;
  out.graph = g;
  out.target = tgt;
  out.source = src;
  for (NodeId v = 0; v < g.node_count(); ++v) out.original_of.push_back(v);
  std::optional<Pattern> current;
  for (const TransferStep& s : steps) {
    const Pattern& p = current ? *current : a;
    Transfer t = s.kind == TransferStep::Kind::Subgraph
                     ? subgraph_transfer(p, out.graph, s.drop_edges, s.drop_nodes, out.target, out.source)
                     : contract_pattern(p, out.graph, s.i, s.j, out.target, out.source);
    std::vector<NodeId> original;
    for (NodeId v : t.map.old_of_new) original.push_back(out.original_of[v]);
    out.original_of = std::move(original);
    out.graph = std::move(t.graph);
    out.target = t.target;
    out.source = t.source;
    current.emplace(std::move(t.pattern));
  }
  out.pattern = current ? std::get<PatternTable>(current->body())
                        : compile_to_table(a, g, true);
  return out;
}

FailureSet lift_failure_set(const std::vector<AppliedStep>& steps, const FailureSet& f_final) {
  FailureSet f = f_final;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const AppliedStep& s = *it;
    if (s.step.kind == TransferStep::Kind::Contraction) {
      f = lift_contracted_impl(s.before, s.after, s.map.old_of_new, s.redundant, s.step.i, s.step.j, f);
      continue;
    }
    if (f.edge_count() != s.after.edge_count()) throw TransferError("failure set belongs to another graph");
    FailureSet lifted(s.before.edge_count());
    for (std::size_t k = 0; k < s.before.edge_count(); ++k) {
      const Edge& e = s.before.edge(k);
      const NodeId a = s.map.new_of_old[e.u];
      const NodeId b = s.map.new_of_old[e.v];
      auto idx = (a == kNoNode || b == kNoNode) ? std::nullopt : s.after.edge_index(a, b);
      if (!idx || f.contains(*idx)) lifted.insert(k);
    }
    f = std::move(lifted);
  }
  return f;
}

MinorSteps minor_steps(const Graph& g, const Graph& h, const std::vector<NodeId>& branch,
                       const std::vector<NodeId>& keep) {
  const int n = g.node_count();
  if (static_cast<int>(branch.size()) != n) throw TransferError("branch map size mismatch");
  const int k = h.node_count();
  std::vector<std::vector<NodeId>> sets(static_cast<std::size_t>(k));
  std::vector<NodeId> drop_nodes;
  for (NodeId v = 0; v < n; ++v) {
    if (branch[v] == kNoNode) {
      drop_nodes.push_back(v);
    } else {
      sets.at(branch[v]).push_back(v);
    }
  }
  MinorSteps out;
  out.representative.assign(static_cast<std::size_t>(k), kNoNode);
  for (int b = 0; b < k; ++b) {
    if (sets[b].empty()) throw TransferError("empty branch set");
    out.representative[b] = sets[b].front();
    for (NodeId v : keep) {
      if (std::find(sets[b].begin(), sets[b].end(), v) != sets[b].end()) out.representative[b] = v;
    }
  }
  // BFS trees inside each branch set; parent links are contracted leaves first.
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoNode);
  std::vector<std::pair<NodeId, NodeId>> tree_edges;  // (parent, child) in BFS order
  std::vector<bool> keep_edge(g.edge_count(), false);
  for (int b = 0; b < k; ++b) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<NodeId> q;
    q.push(out.representative[b]);
    seen[out.representative[b]] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (NodeId u : g.neighbors(v)) {
        if (seen[u] || branch[u] != b) continue;
        seen[u] = true;
        ++reached;
        parent[u] = v;
        tree_edges.emplace_back(v, u);
        keep_edge[*g.edge_index(v, u)] = true;
        q.push(u);
      }
    }
    if (reached != sets[b].size()) throw TransferError("branch set is not connected");
  }
  for (const Edge& he : h.edges()) {
    std::optional<std::size_t> pick;
    for (std::size_t idx = 0; idx < g.edge_count() && !pick; ++idx) {
      const Edge& e = g.edge(idx);
      if (branch[e.u] == kNoNode || branch[e.v] == kNoNode) continue;
      if (make_edge(branch[e.u], branch[e.v]) == he) pick = idx;
    }
    if (!pick) throw TransferError("branch sets miss the edge " + to_string(he));
    keep_edge[*pick] = true;
  }
  std::vector<Edge> drop_edges;
  for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
    const Edge& e = g.edge(idx);
    if (branch[e.u] == kNoNode || branch[e.v] == kNoNode) continue;
    if (!keep_edge[idx]) drop_edges.push_back(e);
  }
  std::vector<NodeId> cur(static_cast<std::size_t>(n), kNoNode);
  NodeId next_id = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (branch[v] != kNoNode) cur[v] = next_id++;
  }
  if (!drop_edges.empty() || !drop_nodes.empty()) {
    out.steps.push_back(TransferStep::subgraph(drop_edges, drop_nodes));
  }
  for (auto it = tree_edges.rbegin(); it != tree_edges.rend(); ++it) {
    const auto [p, c] = *it;
    const NodeId ci = cur[p];
    const NodeId cj = cur[c];
    out.steps.push_back(TransferStep::contraction(ci, cj));
    for (NodeId v = 0; v < n; ++v) {
      if (cur[v] == kNoNode) continue;
      if (cur[v] == cj) {
        cur[v] = ci > cj ? ci - 1 : ci;
      } else if (cur[v] > cj) {
        --cur[v];
      }
    }
  }
  out.relabel.resize(static_cast<std::size_t>(k));
  for (int b = 0; b < k; ++b) out.relabel[b] = cur[out.representative[b]];
  return out;
}

SkippingPattern subdivide_skipping(const Graph& g, const SkippingPattern& p) {
  const Graph h = subdivide3(g).graph;
  SkippingPattern out(h);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const SkippingRule& rule = p.rule(v);
    const auto nb = g.neighbors(v);
    if (rule.next.empty()) continue;
    std::vector<std::pair<NodeId, NodeId>> perm;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (rule.next[k] >= 0) {
        perm.emplace_back(subdivision_node(g, v, nb[k]), subdivision_node(g, v, nb[rule.next[k]]));
      }
    }
    const NodeId start = rule.start >= 0 ? subdivision_node(g, v, nb[rule.start]) : kNoNode;
    out.set_rule(h, v, perm, start);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeId vx = subdivision_node(g, v, nb[k]);
      const NodeId xv = subdivision_node(g, nb[k], v);
      std::vector<NodeId> blocked;
      if (bit(rule.blocked, static_cast<int>(k))) blocked.push_back(xv);
      out.set_rule(h, vx, {{v, xv}, {xv, v}}, xv, blocked);
    }
  }
  return out;
}

DerivedSkipping derive_skipping(const Pattern& phi, const Graph& g, NodeId tgt) {
  g.check_node(tgt);
  const Graph h = subdivide3(g).graph;
  DerivedSkipping out;
  out.pattern = SkippingPattern(g);
  auto step = [&](NodeId v, NodeId in) { return eval(phi, h, v, in, PortMask{0}); };

  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    const int deg = static_cast<int>(nb.size());
    if (deg == 0) continue;
    auto g_port = [&](NodeId h_node) {
      for (int k = 0; k < deg; ++k) {
        if (subdivision_node(g, v, nb[k]) == h_node) return k;
      }
      return -1;
    };
    PortMask blocked = 0;
    for (int k = 0; k < deg; ++k) {
      const NodeId vx = subdivision_node(g, v, nb[k]);
      const NodeId xv = subdivision_node(g, nb[k], v);
      EvalResult r1 = step(vx, v);
      bool cut = false;
      if (r1.ok() && r1.out == v) {
        cut = true;
      } else if (r1.ok()) {
        EvalResult r2 = step(xv, vx);
        if (r2.ok() && r2.out == vx) cut = true;
      }
      if (cut) {
        blocked |= PortMask{1} << k;
        out.cut.emplace_back(v, nb[k]);
      }
    }
    if (v == tgt) {
      std::vector<NodeId> order(nb.begin(), nb.end());
      out.pattern.set_cycle(g, v, order, order.front());
      continue;
    }
    std::vector<int> f(static_cast<std::size_t>(deg), -1);
    for (int k = 0; k < deg; ++k) {
      EvalResult r = step(v, subdivision_node(g, v, nb[k]));
      if (r.ok()) f[k] = g_port(r.out);
    }
    EvalResult r0 = step(v, kNoNode);
    int start = r0.ok() ? g_port(r0.out) : -1;

    std::vector<std::vector<NodeId>> pre(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k) {
      if (f[k] >= 0) pre[f[k]].push_back(nb[k]);
    }
    for (int q = 0; q < deg && out.status == DerivedSkipping::Status::Ok; ++q) {
      if (pre[q].size() > 1) {
        out.status = DerivedSkipping::Status::NonBijective;
        out.witness_node = v;
        out.witness_ports = pre[q];
        out.reason = "node " + std::to_string(v) + " sends several in-ports to " + std::to_string(nb[q]);
      }
    }
    if (out.status != DerivedSkipping::Status::Ok) return out;
    // Undefined entries take the unused images in ascending order.
    int free = 0;
    for (int k = 0; k < deg; ++k) {
      if (f[k] >= 0) continue;
      while (!pre[free].empty()) ++free;
      f[k] = free;
      pre[free].push_back(nb[k]);
    }
    if (start < 0) {
      start = 0;
      while (start + 1 < deg && bit(blocked, start)) ++start;
    }
    std::vector<std::pair<NodeId, NodeId>> perm;
    std::vector<NodeId> blocked_ids;
    for (int k = 0; k < deg; ++k) {
      perm.emplace_back(nb[k], nb[f[k]]);
      if (bit(blocked, k)) blocked_ids.push_back(nb[k]);
    }
    out.pattern.set_rule(g, v, perm, nb[start], blocked_ids);
  }
  return out;
}

std::vector<NodeId> old_node_sequence(const RouteTrace& t, int original_nodes) {
  std::vector<NodeId> seq;
  for (NodeId v : t.node_sequence()) {
    if (v < original_nodes) seq.push_back(v);
  }
  return collapse(std::move(seq));
}

}  // namespace failover
