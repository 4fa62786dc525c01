#include "failover/routing.hpp"

#include <sstream>

namespace failover {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Delivered: return "Delivered";
    case Outcome::Loop: return "Loop";
    case Outcome::Dead: return "Dead";
    case Outcome::NotApplicable: return "NotApplicable";
  }
  return "?";
}

std::string to_string(DeadReason r) {
  switch (r) {
    case DeadReason::None: return "None";
    case DeadReason::Isolated: return "Isolated";
    case DeadReason::Undefined: return "Undefined";
  }
  return "?";
}

std::vector<NodeId> RouteTrace::node_sequence() const {
  std::vector<NodeId> out;
  if (hops.empty()) {
    if (source != kNoNode) out.push_back(source);
    return out;
  }
  for (const Hop& h : hops) out.push_back(h.node);
  out.push_back(hops.back().out);
  return out;
}

std::size_t hop_bound(const Graph& g) { return 2 * g.edge_count() + 2; }

RouteTrace route(const Graph& g, const FailureSet& f, const Pattern& p, NodeId src, NodeId tgt) {
  g.check_node(src);
  g.check_node(tgt);
  if (src == tgt) throw GraphError("source equals target");
  const NodeId key_src = p.source_matching() ? src : kNoNode;

  RouteTrace trace;
  trace.source = src;
  trace.target = tgt;

  // Slot of state (v, in): one per incident port plus one for origination.
  std::vector<std::size_t> offset(static_cast<std::size_t>(g.node_count()) + 1, 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    offset[v + 1] = offset[v] + static_cast<std::size_t>(g.degree(v)) + 1;
  }
  std::vector<long> seen(offset.back(), -1);

  NodeId v = src;
  NodeId in = kNoNode;
  while (true) {
    if (v == tgt) {
      trace.outcome = Outcome::Delivered;
      break;
    }
    const std::size_t slot = offset[v] + static_cast<std::size_t>(in == kNoNode ? 0 : g.port_index(v, in) + 1);
    if (seen[slot] >= 0) {
      trace.outcome = Outcome::Loop;
      trace.loop_index = static_cast<std::size_t>(seen[slot]);
      break;
    }
    seen[slot] = static_cast<long>(trace.hops.size());
    EvalResult r = eval(p, g, v, in, local_mask(g, f, v), key_src);
    if (!r.ok()) {
      trace.outcome = Outcome::Dead;
      trace.dead_reason =
          r.status == EvalStatus::Isolated ? DeadReason::Isolated : DeadReason::Undefined;
      break;
    }
    trace.hops.push_back({v, in, r.out});
    if (trace.hops.size() > hop_bound(g)) throw std::logic_error("route exceeded the hop bound");
    in = v;
    v = r.out;
  }
  return trace;
}

std::vector<RouteTrace> route_all_sources(const Graph& g, const FailureSet& f, const Pattern& p,
                                          NodeId tgt) {
  if (p.source_matching()) throw PatternError("route_all_sources needs a pattern without source matching");
  g.check_node(tgt);
  const auto label = components(g, f);
  std::vector<RouteTrace> out;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (s == tgt) continue;
    if (label[s] != label[tgt]) {
      RouteTrace t;
      t.source = s;
      t.target = tgt;
      t.outcome = Outcome::NotApplicable;
      out.push_back(std::move(t));
      continue;
    }
    out.push_back(route(g, f, p, s, tgt));
  }
  return out;
}

std::vector<NodeId> walk(const Graph& g, const FailureSet& f, const Pattern& p, NodeId src,
                         NodeId tgt, std::size_t max_hops) {
  const NodeId key_src = p.source_matching() ? src : kNoNode;
  std::vector<NodeId> nodes{src};
  NodeId v = src;
  NodeId in = kNoNode;
  for (std::size_t k = 0; k < max_hops && v != tgt; ++k) {
    EvalResult r = eval(p, g, v, in, local_mask(g, f, v), key_src);
    if (!r.ok()) break;
    in = v;
    v = r.out;
    nodes.push_back(v);
  }
  return nodes;
}

std::string render(const RouteTrace& t) {
  std::ostringstream os;
  auto seq = t.node_sequence();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (k) os << " -> ";
    os << seq[k];
  }
  os << " : " << to_string(t.outcome);
  if (t.outcome == Outcome::Loop) os << " (repeats hop " << t.loop_index << ")";
  if (t.outcome == Outcome::Dead) os << " (" << to_string(t.dead_reason) << ")";
  return os.str();
}

}  // namespace failover
