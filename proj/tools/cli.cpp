#include "cli.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "failover/constructions.hpp"
#include "failover/embedding.hpp"
#include "failover/gadgets.hpp"
#include "failover/io.hpp"
#include "failover/minor.hpp"
#include "failover/resilience.hpp"
#include "failover/routing.hpp"
#include "failover/synthesis.hpp"
#include "failover/transforms.hpp"

namespace failover::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool stdin_taken = false;

  std::string read(const std::string& path) {
    if (path != "-") return read_file(path);
    if (stdin_taken) throw UsageError("standard input can feed only one document");
    stdin_taken = true;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  void write(const std::string& path, const std::string& content) {
    if (path == "-") {
      out << content;
    } else {
      write_file(path, content);
    }
  }
};

std::string origin(const std::string& path) { return path == "-" ? "<stdin>" : path; }

// Graph plus pattern, as written by construct, synthesize and transform.
Json bundle_to_json(const Graph& g, const Pattern& p, const FamilyMap& families = {}) {
  return {{"graph", graph_to_json(g, families)}, {"pattern", pattern_to_json(p, g)}};
}

bool is_bundle(const Json& doc) { return doc.is_object() && doc.contains("graph") && doc.contains("pattern"); }

struct Loaded {
  GraphDocument doc;
  std::optional<Pattern> pattern;
};

// -g may hold a graph or a bundle; -p may hold a pattern or a bundle.
Loaded load(Streams& io, const std::string& graph_path, const std::string& pattern_path,
            ParseOptions opts) {
  Loaded out;
  std::optional<Json> graph_json;
  std::optional<Json> pattern_json;
  if (!graph_path.empty()) {
    Json doc = parse_json(io.read(graph_path), origin(graph_path));
    if (is_bundle(doc)) {
      graph_json = doc["graph"];
      if (pattern_path.empty()) pattern_json = doc["pattern"];
    } else {
      graph_json = std::move(doc);
    }
  }
  if (!pattern_path.empty()) {
    Json doc = parse_json(io.read(pattern_path), origin(pattern_path));
    if (is_bundle(doc)) {
      if (!graph_json) graph_json = doc["graph"];
      pattern_json = doc["pattern"];
    } else {
      pattern_json = std::move(doc);
    }
  }
  if (!graph_json) throw UsageError("no graph given (-g, or a bundle via -p)");
  out.doc = graph_from_json(*graph_json, opts);
  if (pattern_json) out.pattern = pattern_from_json(*pattern_json, out.doc.graph, opts);
  return out;
}

NodeId resolve_target(const Graph& g, std::optional<NodeId> flag) {
  if (flag) return *flag;
  if (g.target()) return *g.target();
  throw UsageError("no target: pass --tgt or set one in the graph document");
}

std::optional<NodeId> resolve_source(const Graph& g, std::optional<NodeId> flag) {
  return flag ? flag : g.source();
}

std::vector<NodeId> parse_nodes(const std::string& text) {
  std::vector<NodeId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("'" + item + "' is not a node id");
    }
  }
  return out;
}

const std::vector<FailureSet>& named_family(const GraphDocument& doc, const std::string& name) {
  auto it = doc.families.find(name);
  if (it == doc.families.end()) {
    std::string known;
    for (const auto& [n, sets] : doc.families) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("graph has no family '" + name + "'" + (known.empty() ? "" : " (known: " + known + ")"));
  }
  return it->second;
}

// Exactly one of --all, --k, --family; --all when none is given.
struct FamilyChoice {
  bool all = false;
  int k = -1;
  std::string name;

  void add(CLI::App* cmd) {
    auto* a = cmd->add_flag("--all", all, "every failure set");
    auto* kk = cmd->add_option("--k", k, "failure sets of size <= K");
    auto* f = cmd->add_option("--family", name, "named family of the graph document");
    a->excludes(kk)->excludes(f);
    kk->excludes(f);
  }

  FailureFamily make(const GraphDocument& doc) const {
    if (!name.empty()) return FailureFamily::explicit_sets(doc.graph.edge_count(), named_family(doc, name), name);
    if (k >= 0) return FailureFamily::up_to(doc.graph, k);
    return FailureFamily::all_subsets(doc.graph);
  }
};

struct Options {
  bool permissive = false;
  std::string graph;
  std::string pattern;
  std::string output = "-";
  std::optional<NodeId> tgt;
  std::optional<NodeId> src;

  ParseOptions parse() const { return {permissive}; }
};

void add_io(CLI::App* cmd, Options& o, bool pattern) {
  cmd->add_option("-g,--graph", o.graph, "graph or bundle document (default: stdin)");
  if (pattern) cmd->add_option("-p,--pattern", o.pattern, "pattern or bundle document");
  cmd->add_option("-o,--output", o.output, "output path ('-' = stdout)");
}

// Without -g the graph comes from the -p bundle, or from stdin when -p is absent too.
void settle_inputs(Options& o) {
  if (o.graph.empty() && o.pattern.empty()) o.graph = "-";
}

int cmd_gadget(Streams& io, const std::string& name, const std::vector<int>& params, const Options& o,
               bool list, const std::string& pattern_out) {
  if (list) {
    for (const auto& n : gadget_names()) io.out << n << "\n";
    return kExitOk;
  }
  if (name.empty()) throw UsageError("gadget name required (see --list)");
  Gadget g = make_gadget(name, params);
  if (!g.note.empty()) io.err << g.name << ": " << g.note << "\n";
  io.write(o.output, dump(graph_to_json(g.graph, g.families)));
  if (!pattern_out.empty()) {
    if (g.name != "counter") throw UsageError("only the counter gadget carries a reference pattern");
    io.write(pattern_out, dump(bundle_to_json(g.graph, counter_bounce_pattern(g.graph))));
  }
  return kExitOk;
}

int cmd_construct(Streams& io, const std::string& algo, const Options& o) {
  Loaded in = load(io, o.graph, "", o.parse());
  Graph g = in.doc.graph;
  const NodeId tgt = resolve_target(g, o.tgt);
  std::optional<Pattern> p;
  if (algo == "outerplanar") {
    if (!g.has_rotation() || !validate_outerplanar(g)) {
      auto rot = find_outerplanar_rotation(g);
      if (!rot) throw ConstructionError("graph is not outerplanar");
      g.set_rotation(*rot);
    }
    p = outerplanar_pattern(g, tgt);
  } else if (algo == "sameface") {
    SameFacePattern sf = sameface_pattern(g, tgt);
    if (!sf.uncovered.empty()) {
      io.err << "nodes sharing no face with the target:";
      for (NodeId v : sf.uncovered) io.err << " " << v;
      io.err << "\n";
    }
    p = std::move(sf.pattern);
  } else if (algo == "target-removal") {
    p = target_removal_pattern(g, tgt);
  } else if (algo == "two-hop-source") {
    auto src = resolve_source(g, o.src);
    if (!src) throw UsageError("two-hop-source needs --src or a source in the graph");
    p = two_hop_source_pattern(g, *src, tgt);
  } else if (algo == "two-hop-id") {
    p = two_hop_id_pattern(g, tgt);
  } else {
    throw UsageError("unknown construction '" + algo + "'");
  }
  g.set_target(tgt);
  io.write(o.output, dump(bundle_to_json(g, *p, in.doc.families)));
  return kExitOk;
}

int cmd_route(Streams& io, const Options& o, const std::string& fail, const std::string& trace_out) {
  Loaded in = load(io, o.graph, o.pattern, o.parse());
  if (!in.pattern) throw UsageError("route needs a pattern (-p)");
  const Graph& g = in.doc.graph;
  const NodeId tgt = resolve_target(g, o.tgt);
  auto src = resolve_source(g, o.src);
  if (!src) throw UsageError("route needs --src or a source in the graph");
  const FailureSet f = parse_failures(g, fail);
  RouteTrace t = route(g, f, *in.pattern, *src, tgt);
  io.write(o.output, render(t) + "\n");
  if (!trace_out.empty()) io.write(trace_out, dump(trace_to_json(t)));
  return t.delivered() ? kExitOk : kExitNegative;
}

int cmd_verify(Streams& io, const Options& o, const FamilyChoice& fam, unsigned jobs) {
  Loaded in = load(io, o.graph, o.pattern, o.parse());
  if (!in.pattern) throw UsageError("verify needs a pattern (-p)");
  const Graph& g = in.doc.graph;
  const NodeId tgt = resolve_target(g, o.tgt);
  auto src = resolve_source(g, o.src);
  if (!src && in.pattern->fixed_source()) src = in.pattern->fixed_source();
  const FailureFamily family = fam.make(in.doc);
  ResilienceReport r = verify(g, *in.pattern, tgt, family, src, VerifyOptions{jobs});
  io.write(o.output, dump(report_to_json(r, g)));
  return r.verdict ? kExitOk : kExitNegative;
}

struct SynthOptions {
  bool source_matching = false;
  std::string prune = "auto";
  std::uint64_t budget = SynthesisConfig{}.node_budget;
  std::string cert;
  std::string pattern_out;
};

int cmd_synthesize(Streams& io, const Options& o, const FamilyChoice& fam, const SynthOptions& so) {
  Loaded in = load(io, o.graph, "", o.parse());
  const Graph& g = in.doc.graph;
  const NodeId tgt = resolve_target(g, o.tgt);
  SynthesisConfig cfg;
  cfg.source_matching = so.source_matching;
  cfg.source = resolve_source(g, o.src);
  // Orbit pruning assumes perfect resilience, so k-bounded runs search without it.
  if (so.prune == "auto") {
    cfg.pruning = fam.k >= 0 && fam.name.empty() ? Pruning::None : Pruning::Orbit;
  } else {
    cfg.pruning = parse_pruning(so.prune);
  }
  cfg.node_budget = so.budget;
  SynthesisResult r = (fam.k >= 0 && fam.name.empty())
                          ? synthesize_k(g, tgt, fam.k, cfg)
                          : synthesize(g, tgt, fam.make(in.doc), cfg);
  io.write(o.output, dump(synthesis_to_json(r)));
  if (r.pattern && !so.pattern_out.empty()) {
    Graph out = g;
    out.set_target(tgt);
    io.write(so.pattern_out, dump(bundle_to_json(out, Pattern(*r.pattern))));
  }
  if (r.certificate && !so.cert.empty()) io.write(so.cert, dump(certificate_to_json(*r.certificate)));
  switch (r.verdict) {
    case Verdict::Found: return kExitOk;
    case Verdict::Unsat: return kExitNegative;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_replay(Streams& io, const std::string& path, const Options& o) {
  UnsatCertificate c = certificate_from_json(parse_json(io.read(path), origin(path)), o.parse());
  const bool ok = replay(c);
  io.out << (ok ? "certificate valid" : "certificate invalid") << "\n";
  return ok ? kExitOk : kExitNegative;
}

int cmd_sweep(Streams& io, const SweepConfig& cfg, const std::string& cert, const Options& o) {
  SweepResult r = planar_sweep(cfg);
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"graph", graph_to_json(e.graph)}, {"target", e.target},
                       {"verdict", to_string(e.verdict)}, {"stats", stats_to_json(e.stats)}});
  }
  Json doc = {{"planar_candidates", r.planar_candidates},
              {"skipped_constructible", r.skipped_constructible},
              {"entries", entries},
              {"witness", r.witness ? Json(*r.witness) : Json(nullptr)}};
  io.write(o.output, dump(doc));
  if (r.certificate && !cert.empty()) io.write(cert, dump(certificate_to_json(*r.certificate)));
  return r.witness ? kExitNegative : kExitInconclusive;
}

struct TransformOptions {
  std::string drop_edges;
  std::string drop_nodes;
  NodeId i = kNoNode;
  NodeId j = kNoNode;
  std::string into = "k5";
};

Json transfer_bundle(Graph g, const Pattern& p, NodeId tgt, std::optional<NodeId> src) {
  g.set_target(tgt);
  g.set_source(src);
  return bundle_to_json(g, p);
}

int cmd_transform(Streams& io, const std::string& kind, const Options& o, const TransformOptions& t) {
  if (kind == "derive-skipping") {
    // -g is the original graph; the pattern runs on its 3-subdivision.
    if (o.graph.empty() || o.pattern.empty()) throw UsageError("derive-skipping needs -g (original graph) and -p");
    const Graph g = load(io, o.graph, "", o.parse()).doc.graph;
    const NodeId tgt = resolve_target(g, o.tgt);
    const auto src = resolve_source(g, o.src);
    Subdivision s = subdivide3(g);
    Json pdoc = parse_json(io.read(o.pattern), origin(o.pattern));
    Pattern phi = pattern_from_json(is_bundle(pdoc) ? pdoc["pattern"] : pdoc, s.graph, o.parse());
    DerivedSkipping d = derive_skipping(phi, g, tgt);
    if (d.status != DerivedSkipping::Status::Ok) {
      io.err << "not a skipping pattern: " << d.reason << "\n";
      return kExitNegative;
    }
    io.write(o.output, dump(transfer_bundle(g, d.pattern, tgt, src)));
    return kExitOk;
  }
  Loaded in = load(io, o.graph, o.pattern, o.parse());
  if (!in.pattern) throw UsageError("transform needs a pattern (-p)");
  const Graph& g = in.doc.graph;
  const NodeId tgt = resolve_target(g, o.tgt);
  const auto src = resolve_source(g, o.src);
  if (kind == "subgraph") {
    std::vector<Edge> edges;
    if (!t.drop_edges.empty()) edges = parse_failures(g, t.drop_edges).edges(g);
    Transfer tr = subgraph_transfer(*in.pattern, g, edges, parse_nodes(t.drop_nodes), tgt, src);
    io.write(o.output, dump(transfer_bundle(tr.graph, tr.pattern, tr.target, tr.source)));
    return kExitOk;
  }
  if (kind == "contract") {
    if (t.i == kNoNode || t.j == kNoNode) throw UsageError("contract needs --i and --j");
    Transfer tr = contract_pattern(*in.pattern, g, t.i, t.j, tgt, src);
    io.write(o.output, dump(transfer_bundle(tr.graph, tr.pattern, tr.target, tr.source)));
    return kExitOk;
  }
  if (kind == "minor") {
    Graph h;
    if (t.into == "k5") {
      h = complete_graph(5);
    } else if (t.into == "k33") {
      h = complete_bipartite(3, 3);
    } else {
      throw UsageError("--into expects k5 or k33");
    }
    auto model = find_minor(g, h);
    if (!model) {
      io.err << "graph has no " << t.into << " minor\n";
      return kExitNegative;
    }
    std::vector<NodeId> keep{tgt};
    if (src) keep.push_back(*src);
    MinorSteps ms = minor_steps(g, h, model->branch, keep);
    MinorTransfer tr = minor_transfer(*in.pattern, g, ms.steps, tgt, src);
    io.write(o.output, dump(transfer_bundle(tr.graph, tr.pattern, tr.target, tr.source)));
    return kExitOk;
  }
  if (kind == "subdivide") {
    const auto* sp = std::get_if<SkippingPattern>(&in.pattern->body());
    if (!sp) throw UsageError("subdivide needs a skipping pattern");
    Subdivision s = subdivide3(g);
    io.write(o.output, dump(transfer_bundle(s.graph, subdivide_skipping(g, *sp), tgt, src)));
    return kExitOk;
  }
  throw UsageError("unknown transform '" + kind + "'");
}

int cmd_export_dot(Streams& io, const Options& o, const std::string& fail, const std::string& trace_path) {
  Loaded in = load(io, o.graph, "", o.parse());
  const Graph& g = in.doc.graph;
  std::optional<FailureSet> f;
  if (!fail.empty()) f = parse_failures(g, fail);
  std::optional<RouteTrace> t;
  if (!trace_path.empty()) t = trace_from_json(parse_json(io.read(trace_path), origin(trace_path)), o.parse());
  io.write(o.output, to_dot(g, f ? &*f : nullptr, t ? &*t : nullptr));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Experiments with static failover routing patterns", "failover-lab"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--permissive", o.permissive, "accept unknown fields in documents");

  auto node_opts = [&](CLI::App* cmd) {
    cmd->add_option("--tgt", o.tgt, "target node (default: graph target)");
    cmd->add_option("--src", o.src, "source node (default: graph source)");
  };

  std::string gadget_name;
  std::vector<int> gadget_params;
  bool gadget_list = false;
  auto* gadget = app.add_subcommand("gadget", "write a named graph with its failure families");
  gadget->add_option("name", gadget_name, "gadget name");
  gadget->add_option("params", gadget_params, "integer parameters");
  gadget->add_option("-o,--output", o.output, "output path ('-' = stdout)");
  gadget->add_flag("--list", gadget_list, "list gadget names");
  std::string gadget_pattern;
  gadget->add_option("--pattern-out", gadget_pattern, "write the gadget's reference pattern (counter)");

  std::string algo;
  auto* construct = app.add_subcommand("construct", "build a pattern by a known construction");
  construct->add_option("algo", algo, "outerplanar, sameface, target-removal, two-hop-source, two-hop-id")
      ->required();
  add_io(construct, o, false);
  node_opts(construct);

  std::string fail;
  std::string trace_out;
  auto* route_cmd = app.add_subcommand("route", "route one packet and print its trace");
  add_io(route_cmd, o, true);
  node_opts(route_cmd);
  route_cmd->add_option("--fail", fail, "failed links u-v,u-v");
  route_cmd->add_option("--trace-out", trace_out, "write the trace as JSON");

  FamilyChoice verify_fam;
  unsigned jobs = 1;
  auto* verify_cmd = app.add_subcommand("verify", "check a pattern against a failure family");
  add_io(verify_cmd, o, true);
  node_opts(verify_cmd);
  verify_fam.add(verify_cmd);
  verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  FamilyChoice synth_fam;
  SynthOptions so;
  auto* synth = app.add_subcommand("synthesize", "search for a pattern or an impossibility certificate");
  add_io(synth, o, false);
  node_opts(synth);
  synth_fam.add(synth);
  synth->add_flag("--source-matching", so.source_matching, "rules may depend on the source");
  synth->add_option("--prune", so.prune, "auto, none, orbit or orbit+degree2");
  synth->add_option("--budget", so.budget, "search node budget");
  synth->add_option("--cert", so.cert, "write the Unsat certificate here");
  synth->add_option("--pattern-out", so.pattern_out, "write the found pattern here");

  std::string cert_path;
  auto* replay_cmd = app.add_subcommand("replay", "re-check an Unsat certificate");
  replay_cmd->add_option("cert", cert_path, "certificate document")->required();

  SweepConfig sweep_cfg;
  std::string sweep_cert;
  std::string sweep_prune = to_string(sweep_cfg.pruning);
  auto* sweep = app.add_subcommand("sweep", "search small planar graphs for an impossible instance");
  sweep->add_option("--nodes", sweep_cfg.nodes, "graph size")->check(CLI::Range(3, 8));
  sweep->add_option("--max-failures", sweep_cfg.max_failures, "failure bound of the family");
  sweep->add_option("--budget", sweep_cfg.node_budget, "search node budget per instance");
  sweep->add_option("--prune", sweep_prune, "none, orbit or orbit+degree2");
  sweep->add_option("--cert", sweep_cert, "write the witness certificate here");
  sweep->add_option("-o,--output", o.output, "output path ('-' = stdout)");

  std::string transform_kind;
  TransformOptions topt;
  auto* transform = app.add_subcommand("transform", "move a pattern to a subgraph, contraction or minor");
  transform->add_option("kind", transform_kind, "subgraph, contract, minor, subdivide, derive-skipping")
      ->required();
  add_io(transform, o, true);
  node_opts(transform);
  transform->add_option("--drop-edges", topt.drop_edges, "links removed by subgraph, u-v,u-v");
  transform->add_option("--drop-nodes", topt.drop_nodes, "nodes removed by subgraph, a,b");
  transform->add_option("--i", topt.i, "kept endpoint of the contracted link");
  transform->add_option("--j", topt.j, "merged endpoint of the contracted link");
  transform->add_option("--into", topt.into, "minor to extract: k5 or k33");

  std::string dot_trace;
  auto* dot = app.add_subcommand("export-dot", "render a graph as Graphviz DOT");
  add_io(dot, o, false);
  dot->add_option("--fail", fail, "failed links drawn dashed");
  dot->add_option("--trace", dot_trace, "trace document drawn bold");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  settle_inputs(o);
  try {
    if (*gadget) return cmd_gadget(io, gadget_name, gadget_params, o, gadget_list, gadget_pattern);
    if (*construct) return cmd_construct(io, algo, o);
    if (*route_cmd) return cmd_route(io, o, fail, trace_out);
    if (*verify_cmd) return cmd_verify(io, o, verify_fam, jobs);
    if (*synth) return cmd_synthesize(io, o, synth_fam, so);
    if (*replay_cmd) return cmd_replay(io, cert_path, o);
    if (*sweep) {
      sweep_cfg.pruning = parse_pruning(sweep_prune);
      return cmd_sweep(io, sweep_cfg, sweep_cert, o);
    }
    if (*transform) return cmd_transform(io, transform_kind, o, topt);
    if (*dot) return cmd_export_dot(io, o, fail, dot_trace);
  } catch (const LimitError& e) {
    err << "limit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace failover::cli
