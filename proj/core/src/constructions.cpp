#include "failover/constructions.hpp"

#include <algorithm>

#include "failover/embedding.hpp"

namespace failover {

namespace {

// First out-neighbor of every node along the outer face of a connected embedding.
std::vector<NodeId> outer_starts(const Graph& g) {
  std::vector<NodeId> start(static_cast<std::size_t>(g.node_count()), kNoNode);
  const FailureSet none(g.edge_count());
  auto dart = canonical_dart(g, none);
  if (!dart) return start;
  for (const Dart& d : outer_face_walk(g, none, dart->from, dart->to).hops) {
    if (start[d.from] == kNoNode) start[d.from] = d.to;
  }
  return start;
}

}  // namespace

SkippingPattern outerplanar_pattern(const Graph& g, NodeId tgt) {
  g.check_node(tgt);
  if (!g.has_rotation()) throw ConstructionError("outerplanar pattern needs a rotation");
  if (!validate_outerplanar(g)) throw ConstructionError("rotation is not an outerplanar embedding");
  SkippingPattern p(g);
  const auto start = outer_starts(g);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 0) p.set_cycle(g, v, g.rotation(v), start[v]);
  }
  return p;
}

SameFacePattern sameface_pattern(const Graph& g, NodeId tgt, const std::map<NodeId, std::size_t>& selection) {
  g.check_node(tgt);
  if (!g.has_rotation()) throw ConstructionError("same-face pattern needs a rotation");
  if (!is_planar_embedding(g)) throw ConstructionError("rotation is not a planar embedding");
  const auto walks = faces(g);
  auto on_face = [](const FaceWalk& w, NodeId v) {
    return std::any_of(w.hops.begin(), w.hops.end(), [v](const Dart& d) { return d.from == v; });
  };
  SameFacePattern out;
  out.pattern = SkippingPattern(g);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) continue;
    std::optional<std::size_t> face;
    if (auto it = selection.find(v); it != selection.end()) {
      if (it->second >= walks.size()) throw ConstructionError("face index out of range");
      if (on_face(walks[it->second], v) && on_face(walks[it->second], tgt)) face = it->second;
    } else {
      for (std::size_t k = 0; k < walks.size() && !face; ++k) {
        if (on_face(walks[k], v) && on_face(walks[k], tgt)) face = k;
      }
    }
    NodeId start = g.rotation(v).front();
    if (face) {
      for (const Dart& d : walks[*face].hops) {
        if (d.from == v) {
          start = d.to;
          break;
        }
      }
      if (v != tgt) out.covered.push_back(v);
    } else if (v != tgt) {
      out.uncovered.push_back(v);
    }
    out.pattern.set_cycle(g, v, g.rotation(v), start);
  }
  return out;
}

Pattern target_removal_pattern(const Graph& g, NodeId tgt) {
  g.check_node(tgt);
  const Removal rest = induced_remove(g, {}, {tgt});
  const auto label = components(rest.graph, FailureSet(rest.graph.edge_count()));
  TargetRemovalRule rule;
  rule.target = tgt;
  rule.inner = SkippingPattern(g);
  for (NodeId c = 0; c < rest.graph.node_count(); ++c) {
    if (label[c] != c) continue;
    std::vector<NodeId> others;
    for (NodeId v = 0; v < rest.graph.node_count(); ++v) {
      if (label[v] != c) others.push_back(v);
    }
    Removal comp = induced_remove(rest.graph, {}, others);
    Graph& h = comp.graph;
    if (h.edge_count() == 0) continue;
    if (!h.has_rotation() || !validate_outerplanar(h)) {
      auto rot = find_outerplanar_rotation(h);
      if (!rot) throw ConstructionError("graph minus the target is not outerplanar");
      h.set_rotation(*rot);
    }
    const auto start = outer_starts(h);
    for (NodeId w = 0; w < h.node_count(); ++w) {
      auto to_g = [&](NodeId x) { return rest.map.old_of_new[comp.map.old_of_new[x]]; };
      std::vector<NodeId> order;
      for (NodeId x : h.rotation(w)) order.push_back(to_g(x));
      rule.inner.set_cycle(g, to_g(w), order, to_g(start[w]));
    }
  }
  return Pattern(ProceduralRule(std::move(rule)));
}

Pattern two_hop_source_pattern(const Graph& g, NodeId src, NodeId tgt) {
  g.check_node(src);
  g.check_node(tgt);
  if (src == tgt) throw GraphError("source equals target");
  TwoHopSourceRule rule;
  rule.source = src;
  rule.target = tgt;
  if (g.adjacent(src, tgt)) rule.order.push_back(tgt);
  for (NodeId u : g.neighbors(src)) {
    if (u != tgt) rule.order.push_back(u);
  }
  return Pattern(ProceduralRule(std::move(rule)));
}

Pattern two_hop_id_pattern(const Graph& g, NodeId tgt) {
  g.check_node(tgt);
  return Pattern(ProceduralRule(TwoHopIdRule{tgt}));
}

}  // namespace failover
