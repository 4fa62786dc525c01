#include "failover/forwarding.hpp"

#include <algorithm>
#include <set>

namespace failover {

namespace {

bool bit(PortMask m, int k) { return (m >> k) & 1U; }

int require_port(const Graph& g, NodeId v, NodeId u) {
  int k = g.port_index(v, u);
  if (k < 0) {
    throw PatternError(std::to_string(u) + " is not a neighbor of " + std::to_string(v));
  }
  return k;
}

// First element of `order`'s cyclic tail after `in` (or from order[0] for
// kNoNode) whose port is live; `in` itself when nothing else is.
NodeId cyclic_tail(const Graph& g, NodeId v, const std::vector<NodeId>& order, NodeId in,
                   PortMask failed) {
  if (order.empty()) return kNoNode;
  std::size_t at = 0;
  std::size_t first = 0;
  if (in != kNoNode) {
    auto it = std::find(order.begin(), order.end(), in);
    if (it != order.end()) {
      at = static_cast<std::size_t>(it - order.begin());
      first = 1;
    }
  }
  for (std::size_t k = first; k < first + order.size(); ++k) {
    NodeId x = order[(at + k) % order.size()];
    if (!bit(failed, g.port_index(v, x))) return x;
  }
  return in;
}

NodeId lowest_live(const Graph& g, NodeId v, PortMask failed) {
  auto nb = g.neighbors(v);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (!bit(failed, static_cast<int>(k))) return nb[k];
  }
  return kNoNode;
}

EvalResult ok(NodeId out) { return {EvalStatus::Ok, out}; }
const EvalResult kUndefined{EvalStatus::Undefined, kNoNode};

struct ProceduralEval {
  const Graph& g;
  NodeId v;
  NodeId in;
  int in_pos;
  PortMask failed;
  NodeId src;

  EvalResult operator()(const TargetRemovalRule& r) const {
    int t = g.port_index(v, r.target);
    if (t >= 0 && !bit(failed, t)) return ok(r.target);
    if (static_cast<std::size_t>(v) >= r.inner.node_count()) return kUndefined;
    int pos = eval_skipping(r.inner.rule(v), in_pos, failed, g.degree(v));
    if (pos < 0) return kUndefined;
    return ok(g.neighbors(v)[pos]);
  }

  EvalResult operator()(const TwoHopSourceRule& r) const {
    if (src == kNoNode) throw PatternError("source-matching rule evaluated without a source");
    if (src != r.source) return kUndefined;
    if (v == r.source) return ok(cyclic_tail(g, v, r.order, in, failed));
    int t = g.port_index(v, r.target);
    bool t_live = t >= 0 && !bit(failed, t);
    if (in == r.source) return ok(t_live ? r.target : r.source);
    if (in == kNoNode) return ok(t_live ? r.target : lowest_live(g, v, failed));
    return ok(in);
  }

  EvalResult operator()(const TwoHopIdRule& r) const {
    int t = g.port_index(v, r.target);
    if (t >= 0 && !bit(failed, t)) return ok(r.target);
    NodeId lowest = lowest_live(g, v, failed);
    if (lowest < v) return ok(lowest);
    auto nb = g.neighbors(v);
    std::vector<NodeId> ascending(nb.begin(), nb.end());
    return ok(cyclic_tail(g, v, ascending, in, failed));
  }
};

}  // namespace

std::string procedural_name(const ProceduralRule& rule) {
  struct {
    std::string operator()(const TargetRemovalRule&) const { return "target-removal"; }
    std::string operator()(const TwoHopSourceRule&) const { return "two-hop-source"; }
    std::string operator()(const TwoHopIdRule&) const { return "two-hop-id"; }
  } name;
  return std::visit(name, rule);
}

void PatternTable::set(const Graph& g, const TableKey& key, NodeId out) {
  g.check_node(key.node);
  const int deg = g.degree(key.node);
  if ((key.failed & ~full_mask(deg)) != 0) throw PatternError("failure mask exceeds node degree");
  if (key.in != kNoNode && bit(key.failed, require_port(g, key.node, key.in))) {
    throw PatternError("in-port is failed");
  }
  if (bit(key.failed, require_port(g, key.node, out))) throw PatternError("out-port is failed");
  if (source_matching_) {
    if (key.src == kNoNode) throw PatternError("source-matching entry needs a source");
    g.check_node(key.src);
  } else if (key.src != kNoNode) {
    throw PatternError("source given for a pattern without source matching");
  }
  entries_[key] = out;
}

std::optional<NodeId> PatternTable::lookup(const TableKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

SkippingPattern::SkippingPattern(const Graph& g) {
  rules_.resize(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    rules_[v].next.assign(static_cast<std::size_t>(g.degree(v)), -1);
  }
}

void SkippingPattern::set_rule(const Graph& g, NodeId v,
                               const std::vector<std::pair<NodeId, NodeId>>& perm, NodeId start,
                               const std::vector<NodeId>& blocked) {
  g.check_node(v);
  if (rules_.size() != static_cast<std::size_t>(g.node_count())) {
    throw PatternError("skipping pattern built for a different graph");
  }
  SkippingRule rule;
  rule.next.assign(static_cast<std::size_t>(g.degree(v)), -1);
  std::set<int> images;
  for (const auto& [from, to] : perm) {
    int a = require_port(g, v, from);
    int b = require_port(g, v, to);
    if (rule.next[a] >= 0) throw PatternError("port listed twice in permutation");
    rule.next[a] = b;
    images.insert(b);
  }
  for (int b : images) {
    if (rule.next[b] < 0) throw PatternError("permutation is not a bijection on its ports");
  }
  if (images.size() != perm.size()) throw PatternError("permutation is not injective");
  if (start == kNoNode) {
    if (!perm.empty()) throw PatternError("missing start port");
  } else {
    rule.start = require_port(g, v, start);
    if (rule.next[rule.start] < 0) throw PatternError("start port outside the permutation");
  }
  for (NodeId b : blocked) rule.blocked |= PortMask{1} << require_port(g, v, b);
  rules_[v] = std::move(rule);
}

void SkippingPattern::set_cycle(const Graph& g, NodeId v, const std::vector<NodeId>& order,
                                NodeId start) {
  std::vector<std::pair<NodeId, NodeId>> perm;
  for (std::size_t k = 0; k < order.size(); ++k) {
    perm.emplace_back(order[k], order[(k + 1) % order.size()]);
  }
  set_rule(g, v, perm, start);
}

void SkippingPattern::require_total(const Graph& g) const {
  if (rules_.size() != static_cast<std::size_t>(g.node_count())) {
    throw PatternError("skipping pattern built for a different graph");
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& r = rules_[v];
    if (r.next.size() != static_cast<std::size_t>(g.degree(v))) {
      throw PatternError("skipping rule size mismatch at node " + std::to_string(v));
    }
    if (std::any_of(r.next.begin(), r.next.end(), [](int x) { return x < 0; })) {
      throw PatternError("skipping rule of node " + std::to_string(v) + " is partial");
    }
  }
}

bool Pattern::source_matching() const {
  if (auto* t = std::get_if<PatternTable>(&body_)) return t->source_matching();
  if (auto* r = std::get_if<ProceduralRule>(&body_)) {
    return std::holds_alternative<TwoHopSourceRule>(*r);
  }
  return false;
}

std::optional<NodeId> Pattern::fixed_source() const {
  if (auto* r = std::get_if<ProceduralRule>(&body_)) {
    if (auto* s = std::get_if<TwoHopSourceRule>(r)) return s->source;
  }
  return std::nullopt;
}

std::optional<NodeId> Pattern::fixed_target() const {
  if (auto* r = std::get_if<ProceduralRule>(&body_)) {
    return std::visit([](const auto& rule) -> std::optional<NodeId> { return rule.target; }, *r);
  }
  return std::nullopt;
}

std::string Pattern::kind() const {
  switch (body_.index()) {
    case 0: return "table";
    case 1: return "skipping";
    default: return "procedural";
  }
}

int eval_skipping(const SkippingRule& rule, int in_pos, PortMask failed, int degree) {
  if (rule.next.empty() || rule.start < 0) return -1;
  const PortMask avoid = failed | rule.blocked;
  const bool from_start = in_pos < 0 || rule.next[in_pos] < 0;
  int cur = from_start ? rule.start : rule.next[in_pos];
  for (int k = 0; k <= degree && cur >= 0; ++k) {
    if (!bit(avoid, cur)) return cur;
    cur = rule.next[cur];
  }
  if (in_pos >= 0) return in_pos;
  cur = rule.start;
  for (int k = 0; k <= degree && cur >= 0; ++k) {
    if (!bit(failed, cur)) return cur;
    cur = rule.next[cur];
  }
  for (int k = 0; k < degree; ++k) {
    if (!bit(failed, k)) return k;
  }
  return -1;
}

EvalResult eval(const Pattern& p, const Graph& g, NodeId v, NodeId in, PortMask failed,
                NodeId src) {
  g.check_node(v);
  const int deg = g.degree(v);
  if ((failed & ~full_mask(deg)) != 0) throw PatternError("failure mask exceeds node degree");
  int in_pos = -1;
  if (in != kNoNode) {
    in_pos = require_port(g, v, in);
    if (bit(failed, in_pos)) throw PatternError("in-port is failed");
  }
  if (failed == full_mask(deg)) return {EvalStatus::Isolated, kNoNode};

  const auto& body = p.body();
  if (auto* table = std::get_if<PatternTable>(&body)) {
    if (table->source_matching() && src == kNoNode) {
      throw PatternError("source-matching table evaluated without a source");
    }
    auto out = table->lookup({v, failed, in, table->source_matching() ? src : kNoNode});
    return out ? ok(*out) : kUndefined;
  }
  if (auto* skip = std::get_if<SkippingPattern>(&body)) {
    if (static_cast<std::size_t>(v) >= skip->node_count()) return kUndefined;
    int pos = eval_skipping(skip->rule(v), in_pos, failed, deg);
    if (pos < 0) return kUndefined;
    return ok(g.neighbors(v)[pos]);
  }
  const auto& rule = std::get<ProceduralRule>(body);
  return std::visit(ProceduralEval{g, v, in, in_pos, failed, src}, rule);
}

EvalResult eval(const Pattern& p, const Graph& g, NodeId v, NodeId in, const FailureSet& f,
                NodeId src) {
  return eval(p, g, v, in, local_mask(g, f, v), src);
}

OrbitResult orbits(const Pattern& p, const Graph& g, NodeId v, PortMask failed, NodeId src) {
  OrbitResult result;
  const auto nb = g.neighbors(v);
  std::vector<NodeId> live;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (!bit(failed, static_cast<int>(k))) live.push_back(nb[k]);
  }
  if (live.empty()) {
    result.status = EvalStatus::Isolated;
    return result;
  }
  std::vector<int> image(live.size());
  for (std::size_t k = 0; k < live.size(); ++k) {
    EvalResult r = eval(p, g, v, live[k], failed, src);
    if (!r.ok()) {
      result.status = r.status;
      return result;
    }
    image[k] = static_cast<int>(std::find(live.begin(), live.end(), r.out) - live.begin());
  }
  std::vector<int> cls(live.size(), -1);
  int next_class = 0;
  for (std::size_t k = 0; k < live.size(); ++k) {
    if (cls[k] >= 0) continue;
    int cur = image[k];
    bool on_cycle = false;
    for (std::size_t step = 0; step < live.size(); ++step) {
      if (cur == static_cast<int>(k)) {
        on_cycle = true;
        break;
      }
      cur = image[cur];
    }
    if (!on_cycle) {
      cls[k] = next_class++;
      continue;
    }
    cur = static_cast<int>(k);
    do {
      cls[cur] = next_class;
      cur = image[cur];
    } while (cur != static_cast<int>(k));
    ++next_class;
  }
  result.orbits.resize(static_cast<std::size_t>(next_class));
  for (std::size_t k = 0; k < live.size(); ++k) result.orbits[cls[k]].push_back(live[k]);
  std::sort(result.orbits.begin(), result.orbits.end());
  return result;
}

PatternTable compile_to_table(const Pattern& p, const Graph& g, bool skip_undefined) {
  const bool sm = p.source_matching();
  PatternTable table(sm);
  std::vector<NodeId> sources;
  if (!sm) {
    sources.push_back(kNoNode);
  } else if (auto s = p.fixed_source()) {
    sources.push_back(*s);
  } else {
    for (NodeId s = 0; s < g.node_count(); ++s) sources.push_back(s);
  }
  const auto target = p.fixed_target();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (target && v == *target) continue;
    const int deg = g.degree(v);
    if (deg > 20) throw PatternError("node degree too large to expand into a table");
    const auto nb = g.neighbors(v);
    for (PortMask failed = 0; failed < full_mask(deg); ++failed) {
      if (deg == 0) break;
      for (int in_pos = -1; in_pos < deg; ++in_pos) {
        if (in_pos >= 0 && bit(failed, in_pos)) continue;
        NodeId in = in_pos < 0 ? kNoNode : nb[in_pos];
        for (NodeId src : sources) {
          if (target && src == *target) continue;
          EvalResult r = eval(p, g, v, in, failed, src);
          if (!r.ok()) {
            if (skip_undefined) continue;
            throw PatternError("pattern undefined at node " + std::to_string(v));
          }
          table.set(g, {v, failed, in, src}, r.out);
        }
      }
    }
  }
  return table;
}

PortMask mask_of(const Graph& g, NodeId v, const std::vector<NodeId>& failed_neighbors) {
  PortMask m = 0;
  for (NodeId u : failed_neighbors) m |= PortMask{1} << require_port(g, v, u);
  return m;
}

std::vector<NodeId> neighbors_in_mask(const Graph& g, NodeId v, PortMask mask) {
  std::vector<NodeId> out;
  auto nb = g.neighbors(v);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (bit(mask, static_cast<int>(k))) out.push_back(nb[k]);
  }
  return out;
}

}  // namespace failover
