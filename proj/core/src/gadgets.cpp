#include "failover/gadgets.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "failover/embedding.hpp"
#include "failover/minor.hpp"
#include "failover/resilience.hpp"

namespace failover {

const std::vector<FailureSet>& Gadget::family(const std::string& family_name) const {
  auto it = families.find(family_name);
  if (it == families.end()) throw std::invalid_argument("gadget " + name + " has no family " + family_name);
  return it->second;
}

namespace {

std::vector<FailureSet> dedup(std::vector<FailureSet> sets) {
  std::vector<FailureSet> out;
  std::set<FailureSet> seen;
  for (auto& f : sets) {
    if (seen.insert(f).second) out.push_back(std::move(f));
  }
  return out;
}

FailureSet fail_edges(const Graph& g, const std::vector<Edge>& edges) {
  FailureSet f(g.edge_count());
  for (const Edge& e : edges) f.insert(g.require_edge(e.u, e.v));
  return f;
}

// Fails every edge of g except `keep` and the edges in `always`.
FailureSet keep_only(const Graph& g, const std::vector<Edge>& keep, const std::vector<bool>& always) {
  FailureSet f(g.edge_count());
  std::vector<bool> kept = always;
  for (const Edge& e : keep) kept[g.require_edge(e.u, e.v)] = true;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (!kept[k]) f.insert(k);
  }
  return f;
}

Gadget finish(Gadget g) {
  g.expected_nodes = g.graph.node_count();
  g.expected_edges = g.graph.edge_count();
  return g;
}

void attach_outerplanar_rotation(Graph& g) {
  if (auto rot = find_outerplanar_rotation(g)) g.set_rotation(*rot);
}

}  // namespace

std::vector<FailureSet> with_orbit_witnesses(const Graph& g, NodeId tgt, std::vector<FailureSet> sets) {
  std::vector<FailureSet> out = sets;
  for (const FailureSet& f : sets) {
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (i == tgt) continue;
      const PortMask mask = local_mask(g, f, i);
      if (mask == full_mask(g.degree(i))) continue;
      for (FailureSet& w : orbit_witness_family(g, mask, i, tgt)) out.push_back(std::move(w));
    }
  }
  return dedup(std::move(out));
}

std::vector<FailureSet> unique_path_sets(const Graph& g, NodeId src, NodeId tgt) {
  std::vector<FailureSet> out;
  std::vector<bool> on_path(static_cast<std::size_t>(g.node_count()), false);
  std::vector<NodeId> path{src};
  on_path[src] = true;
  std::function<void(NodeId)> extend = [&](NodeId v) {
    if (v == tgt) {
      std::vector<Edge> keep;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) keep.push_back(make_edge(path[k], path[k + 1]));
      out.push_back(keep_only(g, keep, std::vector<bool>(g.edge_count(), false)));
      return;
    }
    for (NodeId u : g.neighbors(v)) {
      if (on_path[u]) continue;
      on_path[u] = true;
      path.push_back(u);
      extend(u);
      path.pop_back();
      on_path[u] = false;
    }
  };
  extend(src);
  return out;
}

Gadget k5() {
  Gadget out;
  out.name = "k5";
  out.graph = complete_graph(5);
  out.graph.set_target(4);
  const Graph& g = out.graph;
  const NodeId t = 4;
  for (int k = 0; k < 4; ++k) out.legend["v" + std::to_string(k + 1)] = k;
  out.legend["t"] = t;
  // F = {(v1,t)} and F_∅ = F ∪ F_t ∪ F_v2 ∪ F_v3 over every labeling of v1..v4.
  std::vector<FailureSet> raw;
  for (NodeId v1 = 0; v1 < 4; ++v1) raw.push_back(fail_edges(g, {make_edge(v1, t)}));
  for (NodeId v1 = 0; v1 < 4; ++v1) {
    for (NodeId v4 = 0; v4 < 4; ++v4) {
      if (v4 == v1) continue;
      std::vector<NodeId> rest;
      for (NodeId x = 0; x < 4; ++x) {
        if (x != v1 && x != v4) rest.push_back(x);
      }
      const NodeId v2 = rest[0];
      const NodeId v3 = rest[1];
      raw.push_back(fail_edges(g, {make_edge(v1, t), make_edge(v2, t), make_edge(v3, t),
                                   make_edge(v2, v4), make_edge(v3, v4)}));
    }
  }
  out.families["nok5"] = dedup(raw);
  out.families["nok5-witnessed"] = with_orbit_witnesses(g, t, raw);
  return finish(std::move(out));
}

Gadget k33() {
  Gadget out;
  out.name = "k33";
  out.graph = complete_bipartite(3, 3);
  out.graph.set_target(2);
  out.graph.set_source(0);
  const Graph& g = out.graph;
  const NodeId a = 0, b = 1, t = 2;
  out.legend = {{"a", a}, {"b", b}, {"t", t}, {"v1", 3}, {"v2", 4}, {"v3", 5}};
  std::vector<FailureSet> raw{FailureSet(g.edge_count())};
  out.families["nok33-raw"] = {FailureSet(g.edge_count()),
                               fail_edges(g, {make_edge(t, 3), make_edge(t, 4), make_edge(b, 5)})};
  for (NodeId v3 = 3; v3 <= 5; ++v3) {
    std::vector<Edge> f{make_edge(b, v3)};
    for (NodeId v = 3; v <= 5; ++v) {
      if (v != v3) f.push_back(make_edge(t, v));
    }
    raw.push_back(fail_edges(g, f));
  }
  out.families["nok33"] = raw;
  out.families["nok33-witnessed"] = with_orbit_witnesses(g, t, raw);
  return finish(std::move(out));
}

Gadget k4() {
  Gadget out;
  out.name = "k4";
  out.graph = complete_graph(4);
  out.graph.set_rotation({{1, 3, 2}, {2, 3, 0}, {0, 3, 1}, {0, 1, 2}});
  out.graph.set_target(3);
  return finish(std::move(out));
}

Gadget cycle(int n) {
  if (n < 3) throw GraphError("cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) edges.push_back(make_edge(v, (v + 1) % n));
  Gadget out;
  out.name = "cycle";
  out.graph = Graph(n, edges);
  attach_outerplanar_rotation(out.graph);
  out.graph.set_target(0);
  return finish(std::move(out));
}

Gadget path(int n) {
  if (n < 2) throw GraphError("path needs at least 2 nodes");
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  Gadget out;
  out.name = "path";
  out.graph = Graph(n, edges);
  attach_outerplanar_rotation(out.graph);
  out.graph.set_target(0);
  return finish(std::move(out));
}

Gadget star(int leaves) {
  if (leaves < 1) throw GraphError("star needs a leaf");
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  Gadget out;
  out.name = "star";
  out.graph = Graph(leaves + 1, edges);
  attach_outerplanar_rotation(out.graph);
  out.graph.set_target(0);
  return finish(std::move(out));
}

Gadget fan(int n) {
  if (n < 3) throw GraphError("fan needs at least 3 nodes");
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    edges.push_back({0, v});
    if (v + 1 < n) edges.push_back({v, v + 1});
  }
  Gadget out;
  out.name = "fan";
  out.graph = Graph(n, edges);
  attach_outerplanar_rotation(out.graph);
  out.graph.set_target(0);
  return finish(std::move(out));
}

Gadget wheel(int rim) {
  if (rim < 3) throw GraphError("wheel needs at least 3 rim nodes");
  std::vector<Edge> edges;
  Rotation rot(static_cast<std::size_t>(rim) + 1);
  auto next = [rim](NodeId v) { return v % rim + 1; };
  auto prev = [rim](NodeId v) { return (v + rim - 2) % rim + 1; };
  for (NodeId v = 1; v <= rim; ++v) {
    edges.push_back({0, v});
    edges.push_back(make_edge(v, next(v)));
    rot[0].push_back(v);
    rot[v] = {next(v), 0, prev(v)};
  }
  Gadget out;
  out.name = "wheel";
  out.graph = Graph(rim + 1, edges);
  out.graph.set_rotation(rot);
  out.graph.set_target(1);
  out.graph.set_source(0);
  return finish(std::move(out));
}

namespace {

// Layout of one Feigenbaum gadget inside a larger graph.
struct FeigenbaumLayout {
  std::vector<NodeId> level_one;       // 4 nodes
  NodeId center = kNoNode;
  std::vector<std::vector<NodeId>> pair;  // pair[a][b] for a != b
  NodeId target = kNoNode;
  NodeId attach = kNoNode;  // the node adjacent to the four level-one nodes
};

FeigenbaumLayout standard_layout() {
  FeigenbaumLayout l;
  l.level_one = {0, 1, 2, 3};
  l.center = 4;
  l.pair.assign(4, std::vector<NodeId>(4, kNoNode));
  NodeId next = 5;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      l.pair[a][b] = l.pair[b][a] = next++;
    }
  }
  l.target = 11;
  l.attach = 12;
  return l;
}

std::vector<Edge> gadget_edges(const FeigenbaumLayout& l) {
  std::vector<Edge> edges;
  for (int a = 0; a < 4; ++a) edges.push_back(make_edge(l.level_one[a], l.center));
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      edges.push_back(make_edge(l.pair[a][b], l.level_one[a]));
      edges.push_back(make_edge(l.pair[a][b], l.level_one[b]));
      edges.push_back(make_edge(l.pair[a][b], l.target));
    }
  }
  for (int a = 0; a < 4; ++a) edges.push_back(make_edge(l.attach, l.level_one[a]));
  return edges;
}

// Loop-forcing sets of one gadget; edges outside `inside` are never failed.
std::map<std::string, std::vector<FailureSet>> loop_sets(const Graph& g, const FeigenbaumLayout& l,
                                                         const std::vector<bool>& outside) {
  std::map<std::string, std::vector<FailureSet>> fam;
  const auto& one = l.level_one;
  auto s_link = [&](int a) { return make_edge(l.attach, one[a]); };
  auto pair_links = [&](int a) {
    std::vector<Edge> e;
    for (int b = 0; b < 4; ++b) {
      if (b != a) e.push_back(make_edge(one[a], l.pair[a][b]));
    }
    return e;
  };
  auto t_links_of = [&](int a) {
    std::vector<Edge> e;
    for (int b = 0; b < 4; ++b) {
      if (b != a) e.push_back(make_edge(l.pair[a][b], l.target));
    }
    return e;
  };
  auto center_links = [&] {
    std::vector<Edge> e;
    for (int a = 0; a < 4; ++a) e.push_back(make_edge(one[a], l.center));
    return e;
  };
  auto append = [](std::vector<Edge>& to, const std::vector<Edge>& from) {
    to.insert(to.end(), from.begin(), from.end());
  };
  // π_c(i) = i fails when s reaches only i and i reaches only c.
  for (int i = 0; i < 4; ++i) {
    std::vector<Edge> f = pair_links(i);
    for (int j = 0; j < 4; ++j) {
      if (j != i) f.push_back(s_link(j));
    }
    fam["self"].push_back(fail_edges(g, f));
  }
  // π_c(i) = j and π_c(j) = i loop when j hangs off c alone.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      std::vector<Edge> f = pair_links(i);
      append(f, pair_links(j));
      for (int k = 0; k < 4; ++k) {
        if (k != i) f.push_back(s_link(k));
      }
      fam["swap"].push_back(fail_edges(g, f));
    }
  }
  // π_c a 4-cycle d -> a -> b -> e -> d: the packet runs s,d,c,a,ae,e,c,d while
  // only b leads to t.
  std::vector<int> perm{0, 1, 2, 3};
  do {
    const int d = perm[0], a = perm[1], b = perm[2], e = perm[3];
    std::vector<Edge> keep{s_link(d), make_edge(one[a], l.pair[a][e]), make_edge(one[e], l.pair[a][e])};
    append(keep, center_links());
    append(keep, pair_links(b));
    append(keep, t_links_of(b));
    fam["cycle"].push_back(keep_only(g, keep, outside));
  } while (std::next_permutation(perm.begin(), perm.end()));
  // The orbit of d under π_c avoids y, the only level-one node leading to t.
  for (int d = 0; d < 4; ++d) {
    for (int y = 0; y < 4; ++y) {
      if (y == d) continue;
      std::vector<Edge> keep{s_link(d)};
      append(keep, center_links());
      append(keep, pair_links(y));
      append(keep, t_links_of(y));
      fam["skip"].push_back(keep_only(g, keep, outside));
    }
  }
  for (const char* name : {"self", "swap", "cycle", "skip"}) {
    auto& v = fam[name];
    v = dedup(std::move(v));
    fam["loops"].insert(fam["loops"].end(), v.begin(), v.end());
  }
  return fam;
}

std::vector<bool> mark(const Graph& g, const std::vector<Edge>& edges) {
  std::vector<bool> out(g.edge_count(), false);
  for (const Edge& e : edges) out[g.require_edge(e.u, e.v)] = true;
  return out;
}

void add_feigenbaum_legend(Gadget& out, const FeigenbaumLayout& l, const std::string& prefix) {
  for (int a = 0; a < 4; ++a) out.legend[prefix + std::to_string(a + 1)] = l.level_one[a];
  out.legend[prefix + "c"] = l.center;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      out.legend[prefix + std::to_string(a + 1) + std::to_string(b + 1)] = l.pair[a][b];
    }
  }
  out.legend[prefix + "t"] = l.target;
}

}  // namespace

Gadget padded_gk(int k) {
  if (k < 0) throw GraphError("padding must be nonnegative");
  const FeigenbaumLayout l = standard_layout();
  std::vector<Edge> edges = gadget_edges(l);
  std::vector<Edge> padding;
  NodeId prev = l.attach;
  for (int step = 1; step <= k; ++step) {
    const NodeId node = 12 + step;
    padding.push_back(make_edge(prev, node));
    prev = node;
  }
  edges.insert(edges.end(), padding.begin(), padding.end());
  Gadget out;
  out.name = k == 0 ? "feigenbaum13" : "padded";
  out.graph = Graph(13 + k, edges);
  out.graph.set_target(l.target);
  out.graph.set_source(prev);
  out.source_matching = true;
  add_feigenbaum_legend(out, l, "");
  if (k == 0) {
    out.legend["s"] = l.attach;
  } else {
    for (int step = 0; step <= k; ++step) out.legend["s" + std::to_string(k - step)] = 12 + step;
  }
  const Graph& g = out.graph;
  out.families = loop_sets(g, l, mark(g, padding));
  out.families["paths"] = unique_path_sets(g, prev, l.target);
  auto& all = out.families["feigenbaum"];
  all = out.families["paths"];
  all.insert(all.end(), out.families["loops"].begin(), out.families["loops"].end());
  all = dedup(std::move(all));
  if (k == 0) {
    out.note =
        "26 links as built from the textual construction; a count of 22 matches the same gadget "
        "without the four source links";
  }
  return finish(std::move(out));
}

Gadget feigenbaum13() { return padded_gk(0); }

Gadget replicated(int copies, int pad) {
  if (copies < 1) throw GraphError("need at least one copy");
  const Gadget base = padded_gk(pad);
  const Graph& bg = base.graph;
  const NodeId base_source = *bg.source();
  const int width = 12 + pad;
  const NodeId shared = copies * width;
  const NodeId top = shared + 1;
  // Node of copy q for a node of the padded gadget.
  auto at = [&](int q, NodeId v) -> NodeId {
    if (v == base_source) return shared;
    const NodeId local = v < base_source ? v : v - 1;
    return q * width + local;
  };
  std::vector<Edge> edges;
  for (int q = 0; q < copies; ++q) {
    for (const Edge& e : bg.edges()) edges.push_back(make_edge(at(q, e.u), at(q, e.v)));
    edges.push_back(make_edge(at(q, base.target()), top));
  }
  Gadget out;
  out.name = "replicated";
  out.graph = Graph(top + 1, edges);
  out.graph.set_target(top);
  out.graph.set_source(shared);
  out.source_matching = true;
  out.legend = {{"s", shared}, {"t", top}};
  const Graph& g = out.graph;

  auto lift = [&](int q, const FailureSet& f) {
    FailureSet lifted(g.edge_count());
    for (std::size_t idx : f.indices()) {
      const Edge& e = bg.edge(idx);
      lifted.insert(g.require_edge(at(q, e.u), at(q, e.v)));
    }
    return lifted;
  };
  // Cuts the shared source off copy q.
  auto kill = [&](int q) {
    FailureSet f(g.edge_count());
    for (NodeId u : bg.neighbors(base_source)) f.insert(g.require_edge(shared, at(q, u)));
    return f;
  };
  std::vector<FailureSet> joint;
  const auto& own = base.family("feigenbaum");
  for (int q = 0; q < copies; ++q) {
    FailureSet others(g.edge_count());
    for (int p = 0; p < copies; ++p) {
      if (p != q) others |= kill(p);
    }
    for (const FailureSet& f : own) joint.push_back(lift(q, f) | others);
  }
  const auto& loops = base.family("loops");
  if (copies == 2) {
    for (const FailureSet& f0 : loops) {
      for (const FailureSet& f1 : loops) joint.push_back(lift(0, f0) | lift(1, f1));
    }
  } else {
    for (const FailureSet& f : loops) {
      FailureSet all(g.edge_count());
      for (int q = 0; q < copies; ++q) all |= lift(q, f);
      joint.push_back(all);
    }
  }
  out.families["joint"] = dedup(std::move(joint));
  return finish(std::move(out));
}

Gadget relevance_fig() {
  Gadget out;
  out.name = "relevance";
  out.graph = Graph(6, {{0, 1}, {0, 2}, {0, 3}, {2, 5}, {3, 5}, {1, 3}, {1, 2}, {0, 4}});
  out.graph.set_target(5);
  out.graph.set_source(4);
  out.legend = {{"i", 0}, {"v1", 1}, {"v2", 2}, {"v3", 3}, {"s", 4}, {"t", 5}};
  return finish(std::move(out));
}

Gadget counter_fig() {
  Gadget out;
  out.name = "counter";
  out.graph = Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 3}, {2, 4}});
  out.graph.set_target(0);
  out.graph.set_source(2);
  out.legend = {{"t", 0}, {"x", 1}, {"u", 2}, {"v", 3}, {"w", 4}};
  out.families["counter"] = {fail_edges(out.graph, {{0, 3}})};
  return finish(std::move(out));
}

SkippingPattern counter_bounce_pattern(const Graph& g) {
  const NodeId t = 0, x = 1, u = 2, v = 3, w = 4;
  SkippingPattern p(g);
  p.set_cycle(g, t, {x, v}, x);
  p.set_cycle(g, x, {u, t}, t);
  p.set_cycle(g, u, {v, x, w}, v);
  p.set_rule(g, v, {{u, t}, {t, u}, {w, w}}, t);
  p.set_cycle(g, w, {u, v}, u);
  return p;
}

Gadget planar7() {
  Gadget out;
  out.name = "planar7";
  out.graph = Graph(7, {{0, 4}, {0, 5}, {0, 6}, {1, 3}, {1, 5}, {1, 6}, {2, 3},
                        {2, 4}, {2, 5}, {2, 6}, {3, 5}, {3, 6}, {4, 5}, {4, 6}});
  out.graph.set_target(0);
  out.families["upto4"] = FailureFamily::up_to(out.graph, 4).materialize();
  return finish(std::move(out));
}

std::vector<std::string> gadget_names() {
  return {"k5",      "k33",      "k4",        "cycle",     "path",    "star",   "fan",
          "wheel",   "feigenbaum13", "padded", "replicated", "relevance", "counter", "planar7"};
}

Gadget make_gadget(const std::string& name, const std::vector<int>& params) {
  auto param = [&](std::size_t k, int fallback) { return k < params.size() ? params[k] : fallback; };
  if (name == "k5") return k5();
  if (name == "k33") return k33();
  if (name == "k4") return k4();
  if (name == "cycle") return cycle(param(0, 5));
  if (name == "path") return path(param(0, 5));
  if (name == "star") return star(param(0, 4));
  if (name == "fan") return fan(param(0, 5));
  if (name == "wheel") return wheel(param(0, 5));
  if (name == "feigenbaum13") return feigenbaum13();
  if (name == "padded") return padded_gk(param(0, 1));
  if (name == "replicated") return replicated(param(0, 2), param(1, 0));
  if (name == "relevance") return relevance_fig();
  if (name == "counter") return counter_fig();
  if (name == "planar7") return planar7();
  throw std::invalid_argument("unknown gadget: " + name);
}

}  // namespace failover
