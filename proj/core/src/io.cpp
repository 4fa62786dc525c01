#include "failover/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace failover {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DocumentError("field '" + where + "': " + what);
}

// Object accessor that records which keys were read so leftovers can be rejected.
class Reader {
 public:
  Reader(const Json& doc, std::string where, ParseOptions options)
      : doc_(doc), where_(std::move(where)), options_(options) {
    if (!doc_.is_object()) fail(where_.empty() ? "<root>" : where_, "expected an object");
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  const Json& required(const std::string& key) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) fail(path(key), "missing");
    return *it;
  }

  const Json* optional(const std::string& key) {
    used_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() || it->is_null() ? nullptr : &*it;
  }

  void finish() const {
    if (options_.permissive) return;
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!used_.count(it.key())) fail(path(it.key()), "unknown field");
    }
  }

 private:
  const Json& doc_;
  std::string where_;
  ParseOptions options_;
  std::set<std::string> used_;
};

long long as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

bool as_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

NodeId as_node(const Json& j, int n, const std::string& where) {
  long long v = as_int(j, where);
  if (v < 0 || v >= n) fail(where, "node " + std::to_string(v) + " out of range");
  return static_cast<NodeId>(v);
}

NodeId as_port(const Json& j, int n, const std::string& where) {
  return j.is_null() ? kNoNode : as_node(j, n, where);
}

Json node_or_null(NodeId v) { return v == kNoNode ? Json(nullptr) : Json(v); }

Json edge_list(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back({e.u, e.v});
  return out;
}

std::vector<Edge> edges_from(const Json& j, int n, const std::string& where) {
  std::vector<Edge> out;
  const Json& arr = as_array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (!arr[k].is_array() || arr[k].size() != 2) fail(at, "expected a pair of node ids");
    out.push_back({as_node(arr[k][0], n, at), as_node(arr[k][1], n, at)});
  }
  return out;
}

std::vector<NodeId> nodes_from(const Json& j, int n, const std::string& where) {
  std::vector<NodeId> out;
  const Json& arr = as_array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(as_node(arr[k], n, where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

template <typename F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DocumentError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

Json rule_to_json(const Graph& g, NodeId v, const SkippingRule& rule) {
  const auto nb = g.neighbors(v);
  Json perm = Json::array();
  for (std::size_t k = 0; k < rule.next.size(); ++k) {
    if (rule.next[k] >= 0) perm.push_back({nb[k], nb[rule.next[k]]});
  }
  Json blocked = Json::array();
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if ((rule.blocked >> k) & 1U) blocked.push_back(nb[k]);
  }
  return {{"node", v},
          {"perm", perm},
          {"start", rule.start >= 0 ? Json(nb[rule.start]) : Json(nullptr)},
          {"blocked", blocked}};
}

Json skipping_to_json(const Graph& g, const SkippingPattern& p) {
  Json rules = Json::array();
  for (NodeId v = 0; v < static_cast<NodeId>(p.node_count()); ++v) {
    const SkippingRule& r = p.rule(v);
    bool used = r.blocked != 0 || r.start >= 0;
    for (int x : r.next) used = used || x >= 0;
    if (used) rules.push_back(rule_to_json(g, v, r));
  }
  return rules;
}

SkippingPattern skipping_from_json(const Json& j, const Graph& g, const std::string& where,
                                   ParseOptions options) {
  SkippingPattern p(g);
  const Json& arr = as_array(j, where);
  const int n = g.node_count();
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    Reader r(arr[k], at, options);
    const NodeId v = as_node(r.required("node"), n, r.path("node"));
    std::vector<std::pair<NodeId, NodeId>> perm;
    for (const Edge& e : edges_from(r.required("perm"), n, r.path("perm"))) perm.emplace_back(e.u, e.v);
    const Json* start = r.optional("start");
    const NodeId s = start ? as_node(*start, n, r.path("start")) : kNoNode;
    std::vector<NodeId> blocked;
    if (const Json* b = r.optional("blocked")) blocked = nodes_from(*b, n, r.path("blocked"));
    r.finish();
    wrap(at, [&] {
      p.set_rule(g, v, perm, s, blocked);
      return 0;
    });
  }
  return p;
}

Json entry_to_json(const Graph& g, const TableKey& key, NodeId out, bool source_matching) {
  Json e = {{"node", key.node},
            {"failed", neighbors_in_mask(g, key.node, key.failed)},
            {"in", node_or_null(key.in)},
            {"out", out}};
  if (source_matching) e["src"] = key.src;
  return e;
}

std::pair<TableKey, NodeId> entry_from_json(const Json& j, const Graph& g, bool source_matching,
                                            const std::string& where, ParseOptions options) {
  Reader r(j, where, options);
  const int n = g.node_count();
  TableKey key;
  key.node = as_node(r.required("node"), n, r.path("node"));
  const auto failed = nodes_from(r.required("failed"), n, r.path("failed"));
  key.failed = wrap(r.path("failed"), [&] { return mask_of(g, key.node, failed); });
  key.in = as_port(r.required("in"), n, r.path("in"));
  if (source_matching) key.src = as_node(r.required("src"), n, r.path("src"));
  const NodeId out = as_node(r.required("out"), n, r.path("out"));
  r.finish();
  return {key, out};
}

Outcome outcome_from(const std::string& s, const std::string& where) {
  for (Outcome o : {Outcome::Delivered, Outcome::Loop, Outcome::Dead, Outcome::NotApplicable}) {
    if (to_string(o) == s) return o;
  }
  fail(where, "unknown outcome " + s);
}

DeadReason dead_reason_from(const std::string& s, const std::string& where) {
  for (DeadReason d : {DeadReason::None, DeadReason::Isolated, DeadReason::Undefined}) {
    if (to_string(d) == s) return d;
  }
  fail(where, "unknown dead reason " + s);
}

std::string variant_name(OrbitVariant v) {
  switch (v) {
    case OrbitVariant::Plain: return "plain";
    case OrbitVariant::SourceAdjacent: return "source-adjacent";
    case OrbitVariant::DisjointPaths: return "disjoint-paths";
  }
  return "?";
}

OrbitVariant variant_from(const std::string& s, const std::string& where) {
  for (OrbitVariant v : {OrbitVariant::Plain, OrbitVariant::SourceAdjacent, OrbitVariant::DisjointPaths}) {
    if (variant_name(v) == s) return v;
  }
  fail(where, "unknown orbit variant " + s);
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DocumentError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": malformed JSON");
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DocumentError("cannot write " + path);
  out << content;
}

Json graph_to_json(const Graph& g, const FamilyMap& families) {
  Json doc = {{"n", g.node_count()}, {"edges", edge_list(g.edges())}};
  if (g.has_rotation()) doc["rotation"] = g.rotation();
  if (g.target()) doc["target"] = *g.target();
  if (g.source()) doc["source"] = *g.source();
  if (!families.empty()) {
    Json fam = Json::object();
    for (const auto& [name, sets] : families) {
      Json list = Json::array();
      for (const FailureSet& f : sets) list.push_back(failure_set_to_json(g, f));
      fam[name] = list;
    }
    doc["families"] = fam;
  }
  return doc;
}

GraphDocument graph_from_json(const Json& doc, ParseOptions options) {
  Reader r(doc, "", options);
  const long long n = as_int(r.required("n"), "n");
  if (n < 0 || n > 1'000'000) fail("n", "node count out of range");
  const int nodes = static_cast<int>(n);
  const auto edges = edges_from(r.required("edges"), nodes, "edges");
  GraphDocument out;
  out.graph = wrap("edges", [&] { return Graph(nodes, edges); });
  if (const Json* rot = r.optional("rotation")) {
    const Json& arr = as_array(*rot, "rotation");
    if (arr.size() != static_cast<std::size_t>(nodes)) fail("rotation", "needs one list per node");
    Rotation rotation;
    for (std::size_t v = 0; v < arr.size(); ++v) {
      rotation.push_back(nodes_from(arr[v], nodes, "rotation[" + std::to_string(v) + "]"));
    }
    wrap("rotation", [&] {
      out.graph.set_rotation(rotation);
      return 0;
    });
  }
  if (const Json* t = r.optional("target")) out.graph.set_target(as_node(*t, nodes, "target"));
  if (const Json* s = r.optional("source")) {
    const NodeId src = as_node(*s, nodes, "source");
    wrap("source", [&] {
      out.graph.set_source(src);
      return 0;
    });
  }
  if (const Json* fam = r.optional("families")) {
    if (!fam->is_object()) fail("families", "expected an object");
    for (auto it = fam->begin(); it != fam->end(); ++it) {
      const std::string at = "families." + it.key();
      const Json& arr = as_array(it.value(), at);
      auto& sets = out.families[it.key()];
      for (std::size_t k = 0; k < arr.size(); ++k) {
        sets.push_back(failure_set_from_json(out.graph, arr[k], at + "[" + std::to_string(k) + "]"));
      }
    }
  }
  r.finish();
  return out;
}

Json failure_set_to_json(const Graph& g, const FailureSet& f) { return edge_list(f.edges(g)); }

FailureSet failure_set_from_json(const Graph& g, const Json& doc, const std::string& where) {
  const auto edges = edges_from(doc, g.node_count(), where);
  return wrap(where, [&] { return FailureSet::from_edges(g, edges); });
}

Json pattern_to_json(const Pattern& p, const Graph& g) {
  Json doc = {{"mode", p.kind()}, {"source_matching", p.source_matching()}};
  const auto& body = p.body();
  if (auto* table = std::get_if<PatternTable>(&body)) {
    Json entries = Json::array();
    for (const auto& [key, out] : table->entries()) {
      entries.push_back(entry_to_json(g, key, out, table->source_matching()));
    }
    doc["entries"] = entries;
  } else if (auto* skip = std::get_if<SkippingPattern>(&body)) {
    doc["rules"] = skipping_to_json(g, *skip);
  } else {
    const auto& rule = std::get<ProceduralRule>(body);
    doc["name"] = procedural_name(rule);
    Json params = Json::object();
    if (auto* r = std::get_if<TargetRemovalRule>(&rule)) {
      params["target"] = r->target;
      params["inner"] = skipping_to_json(g, r->inner);
    } else if (auto* r = std::get_if<TwoHopSourceRule>(&rule)) {
      params["target"] = r->target;
      params["source"] = r->source;
      params["order"] = r->order;
    } else if (auto* r = std::get_if<TwoHopIdRule>(&rule)) {
      params["target"] = r->target;
    }
    doc["params"] = params;
  }
  return doc;
}

Pattern pattern_from_json(const Json& doc, const Graph& g, ParseOptions options) {
  Reader r(doc, "", options);
  const std::string mode = as_string(r.required("mode"), "mode");
  const bool sm = as_bool(r.required("source_matching"), "source_matching");
  const int n = g.node_count();
  if (mode == "table") {
    PatternTable table(sm);
    const Json& arr = as_array(r.required("entries"), "entries");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string at = "entries[" + std::to_string(k) + "]";
      auto [key, out] = entry_from_json(arr[k], g, sm, at, options);
      if (table.lookup(key)) fail(at, "duplicate entry");
      wrap(at, [&] {
        table.set(g, key, out);
        return 0;
      });
    }
    r.finish();
    return Pattern(std::move(table));
  }
  if (mode == "skipping") {
    if (sm) fail("source_matching", "skipping patterns do not match sources");
    SkippingPattern p = skipping_from_json(r.required("rules"), g, "rules", options);
    r.finish();
    return Pattern(std::move(p));
  }
  if (mode != "procedural") fail("mode", "expected table, skipping or procedural");
  const std::string name = as_string(r.required("name"), "name");
  Reader params(r.required("params"), "params", options);
  const NodeId target = as_node(params.required("target"), n, "params.target");
  ProceduralRule rule = TwoHopIdRule{target};
  if (name == "target-removal") {
    rule = TargetRemovalRule{target, skipping_from_json(params.required("inner"), g, "params.inner", options)};
  } else if (name == "two-hop-source") {
    TwoHopSourceRule two;
    two.target = target;
    two.source = as_node(params.required("source"), n, "params.source");
    two.order = nodes_from(params.required("order"), n, "params.order");
    for (NodeId u : two.order) {
      if (!g.adjacent(two.source, u)) fail("params.order", "node " + std::to_string(u) + " is not a neighbor of the source");
    }
    rule = std::move(two);
  } else if (name != "two-hop-id") {
    fail("name", "unknown procedural pattern " + name);
  }
  params.finish();
  r.finish();
  Pattern p(std::move(rule));
  if (p.source_matching() != sm) fail("source_matching", "does not match the procedural pattern");
  return p;
}

Json trace_to_json(const RouteTrace& t) {
  Json hops = Json::array();
  for (const Hop& h : t.hops) hops.push_back({h.node, node_or_null(h.in), h.out});
  Json doc = {{"source", t.source},
              {"target", t.target},
              {"hops", hops},
              {"nodes", t.node_sequence()},
              {"outcome", to_string(t.outcome)}};
  if (t.outcome == Outcome::Loop) doc["loop_index"] = t.loop_index;
  if (t.outcome == Outcome::Dead) doc["dead_reason"] = to_string(t.dead_reason);
  return doc;
}

RouteTrace trace_from_json(const Json& doc, ParseOptions options) {
  Reader r(doc, "trace", options);
  RouteTrace t;
  t.source = static_cast<NodeId>(as_int(r.required("source"), r.path("source")));
  t.target = static_cast<NodeId>(as_int(r.required("target"), r.path("target")));
  const Json& hops = as_array(r.required("hops"), r.path("hops"));
  for (std::size_t k = 0; k < hops.size(); ++k) {
    const std::string at = r.path("hops") + "[" + std::to_string(k) + "]";
    if (!hops[k].is_array() || hops[k].size() != 3) fail(at, "expected [node, in, out]");
    Hop h;
    h.node = static_cast<NodeId>(as_int(hops[k][0], at));
    h.in = hops[k][1].is_null() ? kNoNode : static_cast<NodeId>(as_int(hops[k][1], at));
    h.out = static_cast<NodeId>(as_int(hops[k][2], at));
    t.hops.push_back(h);
  }
  r.optional("nodes");
  t.outcome = outcome_from(as_string(r.required("outcome"), r.path("outcome")), r.path("outcome"));
  if (const Json* li = r.optional("loop_index")) t.loop_index = static_cast<std::size_t>(as_int(*li, r.path("loop_index")));
  if (const Json* dr = r.optional("dead_reason")) {
    t.dead_reason = dead_reason_from(as_string(*dr, r.path("dead_reason")), r.path("dead_reason"));
  }
  r.finish();
  return t;
}

Json report_to_json(const ResilienceReport& r, const Graph& g) {
  Json doc = {{"mode", to_string(r.mode)},
              {"verdict", r.verdict},
              {"stats", {{"failure_sets", r.stats.failure_sets}, {"traces", r.stats.traces}}}};
  if (r.k >= 0) doc["k"] = r.k;
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    doc["counterexample"] = {{"failures", failure_set_to_json(g, c.failures)},
                             {"family_index", c.family_index},
                             {"source", c.source},
                             {"trace", trace_to_json(c.trace)}};
  }
  return doc;
}

Json stats_to_json(const SynthesisStats& s) {
  return {{"search_nodes", s.search_nodes}, {"entries_branched", s.entries_branched},
          {"simulations", s.simulations},   {"pruned", s.pruned},
          {"backjumps", s.backjumps},       {"refutations", s.refutations},
          {"pairs", s.pairs}};
}

Json synthesis_to_json(const SynthesisResult& r) {
  Json doc = {{"verdict", to_string(r.verdict)},
              {"family", r.family_name},
              {"pruning", to_string(r.config.pruning)},
              {"source_matching", r.config.source_matching},
              {"stats", stats_to_json(r.stats)}};
  if (r.config.source) doc["source"] = *r.config.source;
  if (r.pattern) doc["pattern_entries"] = r.pattern->size();
  return doc;
}

Json certificate_to_json(const UnsatCertificate& c) {
  const Graph& g = c.graph;
  Json family = Json::array();
  for (const FailureSet& f : c.family) family.push_back(failure_set_to_json(g, f));
  Json refutations = Json::array();
  for (const Refutation& r : c.refutations) {
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back(entry_to_json(g, e.key, e.out, c.source_matching));
    Json doc = {{"kind", r.kind == Refutation::Kind::Trace ? "trace" : "orbit"}, {"entries", entries}};
    if (r.kind == Refutation::Kind::Trace) {
      doc["family_index"] = r.family_index;
      doc["source"] = r.source;
      doc["trace"] = trace_to_json(r.trace);
    } else {
      doc["variant"] = variant_name(r.variant);
    }
    refutations.push_back(doc);
  }
  Json doc = {{"version", c.version},
              {"graph", graph_to_json(g)},
              {"target", c.target},
              {"source_matching", c.source_matching},
              {"source", c.source ? Json(*c.source) : Json(nullptr)},
              {"pruning", to_string(c.pruning)},
              {"family_name", c.family_name},
              {"family", family},
              {"stats", stats_to_json(c.stats)},
              {"complete", c.complete},
              {"refutations", refutations}};
  return doc;
}

UnsatCertificate certificate_from_json(const Json& doc, ParseOptions options) {
  Reader r(doc, "", options);
  UnsatCertificate c;
  c.version = static_cast<int>(as_int(r.required("version"), "version"));
  c.graph = graph_from_json(r.required("graph"), options).graph;
  const Graph& g = c.graph;
  const int n = g.node_count();
  c.target = as_node(r.required("target"), n, "target");
  c.source_matching = as_bool(r.required("source_matching"), "source_matching");
  if (const Json* s = r.optional("source")) c.source = as_node(*s, n, "source");
  c.pruning = wrap("pruning", [&] { return parse_pruning(as_string(r.required("pruning"), "pruning")); });
  c.family_name = as_string(r.required("family_name"), "family_name");
  const Json& fam = as_array(r.required("family"), "family");
  for (std::size_t k = 0; k < fam.size(); ++k) {
    c.family.push_back(failure_set_from_json(g, fam[k], "family[" + std::to_string(k) + "]"));
  }
  Reader st(r.required("stats"), "stats", options);
  auto stat = [&](const char* key) { return static_cast<std::uint64_t>(as_int(st.required(key), st.path(key))); };
  c.stats.search_nodes = stat("search_nodes");
  c.stats.entries_branched = stat("entries_branched");
  c.stats.simulations = stat("simulations");
  c.stats.pruned = stat("pruned");
  c.stats.backjumps = stat("backjumps");
  c.stats.refutations = stat("refutations");
  c.stats.pairs = stat("pairs");
  st.finish();
  c.complete = as_bool(r.required("complete"), "complete");
  const Json& refs = as_array(r.required("refutations"), "refutations");
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const std::string at = "refutations[" + std::to_string(k) + "]";
    Reader rr(refs[k], at, options);
    Refutation ref;
    const std::string kind = as_string(rr.required("kind"), rr.path("kind"));
    if (kind != "trace" && kind != "orbit") fail(rr.path("kind"), "expected trace or orbit");
    ref.kind = kind == "trace" ? Refutation::Kind::Trace : Refutation::Kind::Orbit;
    const Json& entries = as_array(rr.required("entries"), rr.path("entries"));
    for (std::size_t e = 0; e < entries.size(); ++e) {
      auto [key, out] = entry_from_json(entries[e], g, c.source_matching,
                                        rr.path("entries") + "[" + std::to_string(e) + "]", options);
      ref.entries.push_back({key, out});
    }
    if (ref.kind == Refutation::Kind::Trace) {
      ref.family_index = static_cast<std::size_t>(as_int(rr.required("family_index"), rr.path("family_index")));
      ref.source = as_node(rr.required("source"), n, rr.path("source"));
      ref.trace = trace_from_json(rr.required("trace"), options);
    } else {
      ref.variant = variant_from(as_string(rr.required("variant"), rr.path("variant")), rr.path("variant"));
    }
    rr.finish();
    c.refutations.push_back(std::move(ref));
  }
  r.finish();
  return c;
}

FailureSet parse_failures(const Graph& g, const std::string& text) {
  FailureSet f(g.edge_count());
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw DocumentError("failure '" + item + "' is not of the form u-v");
    try {
      std::size_t used_u = 0;
      std::size_t used_v = 0;
      const int u = std::stoi(item.substr(0, dash), &used_u);
      const std::string rest = item.substr(dash + 1);
      const int v = std::stoi(rest, &used_v);
      if (used_u != dash || used_v != rest.size()) throw std::invalid_argument(item);
      auto idx = g.edge_index(u, v);
      if (!g.contains_node(u) || !g.contains_node(v) || !idx) {
        throw DocumentError("failure '" + item + "' is not a link of the graph");
      }
      f.insert(*idx);
    } catch (const DocumentError&) {
      throw;
    } catch (const std::exception&) {
      throw DocumentError("failure '" + item + "' is not of the form u-v");
    }
  }
  return f;
}

std::string format_failures(const Graph& g, const FailureSet& f) {
  std::string out;
  for (const Edge& e : f.edges(g)) {
    if (!out.empty()) out += ",";
    out += std::to_string(e.u) + "-" + std::to_string(e.v);
  }
  return out;
}

std::string to_dot(const Graph& g, const FailureSet* failures, const RouteTrace* trace) {
  std::set<Edge> on_trace;
  if (trace) {
    for (const Hop& h : trace->hops) on_trace.insert(make_edge(h.node, h.out));
  }
  std::ostringstream os;
  os << "graph G {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    os << "  " << v;
    if (g.target() == v) {
      os << " [shape=doublecircle]";
    } else if (g.source() == v) {
      os << " [shape=box]";
    }
    os << ";\n";
  }
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edge(k);
    std::vector<std::string> attrs;
    if (failures && failures->contains(k)) attrs.push_back("style=dashed, color=red");
    if (on_trace.count(e)) attrs.push_back("penwidth=3");
    os << "  " << e.u << " -- " << e.v;
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t a = 0; a < attrs.size(); ++a) os << (a ? ", " : "") << attrs[a];
      os << "]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace failover
