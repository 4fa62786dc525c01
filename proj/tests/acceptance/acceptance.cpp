// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "failover/constructions.hpp"
#include "failover/embedding.hpp"
#include "failover/gadgets.hpp"
#include "failover/graph_enum.hpp"
#include "failover/io.hpp"
#include "failover/minor.hpp"
#include "failover/resilience.hpp"
#include "failover/routing.hpp"
#include "failover/synthesis.hpp"
#include "failover/transforms.hpp"
#include "oracles.hpp"

using namespace failover;
using Clock = std::chrono::steady_clock;

namespace {

// Wall-clock limits per criterion, in seconds.
constexpr double kK4Seconds = 1.0;
constexpr double kOuterplanarSeconds = 300.0;
constexpr double kK5Seconds = 60.0;
constexpr double kK33Seconds = 60.0;
constexpr double kSweepSeconds = 3600.0;
constexpr double kFeigenbaumSeconds = 600.0;

// Synthesis budgets (search decisions).
constexpr std::uint64_t kSynthesisBudget = 5'000'000;
constexpr std::uint64_t kSweepBudget = 2'000'000;

// Failure-set budget for the two-hop sweep: all subsets up to this many links,
// else every set of size <= the largest k whose count stays under kTwoHopSets.
constexpr std::size_t kTwoHopAllSubsetsEdges = 10;
constexpr std::uint64_t kTwoHopSets = 4096;

// Transfer corpus: the first 200 connected graphs with m <= 8 by node count.
constexpr int kTransferNodes = 8;
constexpr int kTransferEdges = 8;
constexpr std::size_t kTransferPairs = 200;

// Cycles up to this size also derive from a synthesized table on the subdivision.
constexpr std::size_t kSynthesizedCycleEdges = 5;

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<Graph> connected_graphs(int n) { return enumerate_graphs({n, -1, true}); }

std::uint64_t binom(std::size_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<FailureSet> two_hop_sets(const Graph& g) {
  const std::size_t m = g.edge_count();
  if (m <= kTwoHopAllSubsetsEdges) return oracle::all_subsets(g);
  std::uint64_t count = 1;
  int k = 0;
  while (static_cast<std::size_t>(k) < m && count + binom(m, k + 1) <= kTwoHopSets) {
    count += binom(m, k + 1);
    ++k;
  }
  return oracle::subsets_up_to(g, k);
}

// 1. Target removal on K4.
Result k4_target_removal() {
  Gadget k = k4();
  const NodeId t = k.target();
  const auto t0 = Clock::now();
  Pattern p = target_removal_pattern(k.graph, t);
  auto report = verify(k.graph, p, t, FailureFamily::all_subsets(k.graph));
  const double secs = seconds_since(t0);
  auto h = oracle::exhaustive(k.graph, p, t, oracle::all_subsets(k.graph));
  Result o;
  o.pass = report.verdict && h.violations == 0 && h.checked == 64 * 3 && secs < kK4Seconds;
  o.detail = std::to_string(report.stats.traces) + " traces, " + fmt("%.3fs", secs);
  return o;
}

// 2. Outerplanar pattern on every connected outerplanar graph with n <= 7.
Result outerplanar_all() {
  const std::vector<std::size_t> expected{1, 1, 2, 5, 13, 46, 172};
  const auto t0 = Clock::now();
  std::size_t graphs = 0, violations = 0;
  std::uint64_t checked = 0;
  bool counts_ok = true;
  for (int n = 1; n <= 7; ++n) {
    std::size_t here = 0;
    for (Graph g : connected_graphs(n)) {
      auto rot = find_outerplanar_rotation(g);
      if (!rot) continue;
      ++here;
      g.set_rotation(*rot);
      const auto sets = oracle::all_subsets(g);
      for (NodeId t = 0; t < n && n > 1; ++t) {
        auto h = oracle::exhaustive(g, outerplanar_pattern(g, t), t, sets);
        checked += h.checked;
        violations += h.violations;
      }
    }
    counts_ok = counts_ok && here == expected[n - 1];
    graphs += here;
  }
  const double secs = seconds_since(t0);
  Result o;
  o.pass = counts_ok && violations == 0 && secs < kOuterplanarSeconds;
  o.detail = std::to_string(graphs) + " graphs, " + std::to_string(checked) + " traces, " +
             std::to_string(violations) + " violations, " + fmt("%.1fs", secs);
  return o;
}

// 3. Same-face routing on K4 and W5, every target, every covered source.
Result sameface() {
  std::uint64_t checked = 0, violations = 0;
  for (const Gadget& k : {k4(), wheel(5)}) {
    const auto sets = oracle::all_subsets(k.graph);
    for (NodeId t = 0; t < k.graph.node_count(); ++t) {
      auto sf = sameface_pattern(k.graph, t);
      if (sf.covered.empty()) continue;
      auto h = oracle::exhaustive(k.graph, sf.pattern, t, sets, sf.covered);
      checked += h.checked;
      violations += h.violations;
    }
  }
  Result o;
  o.pass = checked > 0 && violations == 0;
  o.detail = std::to_string(checked) + " traces, " + std::to_string(violations) + " violations";
  return o;
}

Result impossibility(const Gadget& k, const std::string& family, Pruning pruning, double limit) {
  SynthesisConfig cfg;
  cfg.pruning = pruning;
  cfg.source_matching = k.source_matching;
  cfg.source = k.source();
  cfg.node_budget = kSynthesisBudget;
  const auto t0 = Clock::now();
  auto r = synthesize(k.graph, k.target(), FailureFamily::explicit_sets(k.graph.edge_count(), k.family(family), family), cfg);
  const double secs = seconds_since(t0);
  const bool replayed = r.certificate && replay(*r.certificate);
  Result o;
  o.pass = r.verdict == Verdict::Unsat && replayed && secs < limit;
  o.detail = family + ": " + to_string(r.verdict) + ", replay " + (replayed ? "ok" : "failed") + ", " +
             std::to_string(r.stats.search_nodes) + " nodes, " + fmt("%.2fs", secs);
  return o;
}

// 4. K5 proof family.
Result k5_impossible() { return impossibility(k5(), "nok5", Pruning::Orbit, kK5Seconds); }

// 5. K3,3: {∅, F_t ∪ F_b} over the labelings of v1..v3.
Result k33_impossible() { return impossibility(k33(), "nok33", Pruning::Orbit, kK33Seconds); }

// 6. Planar sweep on 7 nodes with |F| <= 4; certificate cached and re-read.
Result planar_sweep_unsat() {
  SweepConfig cfg;
  cfg.nodes = 7;
  cfg.max_failures = 4;
  cfg.pruning = Pruning::Orbit;
  cfg.node_budget = kSweepBudget;
  const auto t0 = Clock::now();
  SweepResult r = planar_sweep(cfg);
  const double secs = seconds_since(t0);
  std::size_t inconclusive = 0;
  for (const auto& e : r.entries) inconclusive += e.verdict == Verdict::Inconclusive;
  Result o;
  o.detail = std::to_string(r.entries.size()) + " instances, " + std::to_string(inconclusive) +
             " inconclusive, " + fmt("%.1fs", secs);
  if (!r.witness || !r.certificate) return o;
  const std::string cache = (std::filesystem::temp_directory_path() / "failover-planar7.cert.json").string();
  write_file(cache, dump(certificate_to_json(*r.certificate)));
  UnsatCertificate cached = certificate_from_json(parse_json(read_file(cache), cache));
  const bool replayed = replay(cached);
  const SweepEntry& w = r.entries[*r.witness];
  const bool planar = !has_minor(w.graph, complete_graph(5)) && !has_minor(w.graph, complete_bipartite(3, 3));
  o.pass = replayed && planar && is_connected(w.graph) && secs < kSweepSeconds;
  o.detail += ", witness m=" + std::to_string(w.graph.edge_count()) + " t=" + std::to_string(w.target) +
              ", cached " + cache + ", replay " + (replayed ? "ok" : "failed");
  return o;
}

// 7. Feigenbaum gadget with source matching, plus the proof's loop trace.
Result feigenbaum() {
  Gadget k = feigenbaum13();
  Result o = impossibility(k, "feigenbaum", Pruning::None, kFeigenbaumSeconds);
  const auto& L = k.legend;
  const NodeId s = L.at("s"), c = L.at("c"), t = L.at("t");
  const NodeId one = L.at("1"), two = L.at("2"), three = L.at("3"), four = L.at("4");
  const NodeId p13 = L.at("13"), p12 = L.at("12"), p23 = L.at("23"), p24 = L.at("24");
  // π_c(4) = 1: only s-4, 1-13, 13-3, c's links and 2's branch to t stay up.
  const std::vector<std::pair<NodeId, NodeId>> live{
      {s, four}, {one, p13}, {p13, three}, {c, one}, {c, two}, {c, three}, {c, four},
      {two, p12}, {two, p23}, {two, p24}, {p12, t}, {p23, t}, {p24, t}};
  const Graph& g = k.graph;
  FailureSet f(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) f.insert(e);
  for (auto [a, b] : live) f.erase(g.require_edge(a, b));
  const auto& cycle = k.family("cycle");
  const bool in_family = std::find(cycle.begin(), cycle.end(), f) != cycle.end();

  PatternTable table(true);
  auto put = [&](NodeId v, NodeId in, NodeId out) { table.set(g, {v, local_mask(g, f, v), in, s}, out); };
  put(s, kNoNode, four);
  put(four, s, c);
  put(c, four, one);
  put(one, c, p13);
  put(p13, one, three);
  put(three, p13, c);
  put(c, three, four);
  put(four, c, c);
  RouteTrace tr = route(g, f, Pattern(table), s, t);
  const std::vector<NodeId> prefix{s, four, c, one, p13, three, c, four};
  auto seq = tr.node_sequence();
  const bool loop_ok = tr.outcome == Outcome::Loop && seq.size() >= prefix.size() &&
                       std::equal(prefix.begin(), prefix.end(), seq.begin());
  o.pass = o.pass && in_family && loop_ok;
  o.detail += std::string(", loop trace ") + (loop_ok ? "reproduced" : "missing") + ": " + render(tr);
  return o;
}

// 8. One link failure is always tolerable.
Result one_resilience() {
  const auto graphs = connected_graphs_up_to(10, 9);
  std::size_t instances = 0, found = 0;
  for (const Graph& g : graphs) {
    for (NodeId t = 0; t < g.node_count() && g.node_count() > 1; ++t) {
      ++instances;
      auto r = synthesize_k(g, t, 1);
      if (r.verdict == Verdict::Found && r.pattern &&
          oracle::table_survives(g, *r.pattern, t, oracle::subsets_up_to(g, 1))) {
        ++found;
      }
    }
  }
  Result o;
  o.pass = graphs.size() == 1069 && found == instances;
  o.detail = std::to_string(graphs.size()) + " graphs, " + std::to_string(found) + "/" +
             std::to_string(instances) + " (graph, target) instances Found";
  return o;
}

// 9. Subgraph and contraction transfers of synthesized perfectly resilient patterns.
Result transfers() {
  std::size_t pairs = 0, transfers_checked = 0, violations = 0, correspondences = 0, mismatches = 0;
  std::size_t unsat_instances = 0;
  for (int n = 2; n <= kTransferNodes && pairs < kTransferPairs; ++n) {
    for (const Graph& g : enumerate_graphs({n, kTransferEdges, true})) {
      std::optional<PatternTable> pattern;
      NodeId tgt = kNoNode;
      for (NodeId t = 0; t < n && !pattern; ++t) {
        SynthesisConfig cfg;
        cfg.pruning = Pruning::Orbit;
        cfg.node_budget = kSynthesisBudget;
        auto r = synthesize(g, t, FailureFamily::all_subsets(g), cfg);
        if (r.verdict == Verdict::Found) {
          pattern = r.pattern;
          tgt = t;
        } else {
          ++unsat_instances;
        }
      }
      if (!pattern) continue;
      ++pairs;
      const Pattern a(*pattern);
      for (const Edge& e : g.edges()) {
        // Deleting the link.
        Transfer sub = subgraph_transfer(a, g, {e}, {}, tgt);
        ++transfers_checked;
        violations += oracle::exhaustive(sub.graph, Pattern(sub.pattern), sub.target,
                                         oracle::all_subsets(sub.graph)).violations;
        // Contracting it, in both directions.
        for (auto [i, j] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          Transfer con = contract_pattern(a, g, i, j, tgt);
          ++transfers_checked;
          const Pattern b(con.pattern);
          const auto sets = oracle::all_subsets(con.graph);
          violations += oracle::exhaustive(con.graph, b, con.target, sets).violations;
          for (const FailureSet& fp : sets) {
            for (NodeId s = 0; s < con.graph.node_count(); ++s) {
              if (s == con.target) continue;
              ++correspondences;
              if (!path_correspondence(a, g, i, j, fp, s, tgt, &b)) ++mismatches;
            }
          }
        }
      }
      if (pairs == kTransferPairs) break;
    }
  }
  Result o;
  o.pass = pairs == kTransferPairs && violations == 0 && mismatches == 0;
  o.detail = std::to_string(pairs) + " pairs, " + std::to_string(transfers_checked) + " transfers, " +
             std::to_string(violations) + " violations, " + std::to_string(correspondences) +
             " correspondences, " + std::to_string(mismatches) + " mismatches";
  return o;
}

std::vector<NodeId> collapse_to_old(const std::vector<NodeId>& seq, int original_nodes) {
  std::vector<NodeId> out;
  for (NodeId v : seq) {
    if (v < original_nodes && (out.empty() || out.back() != v)) out.push_back(v);
  }
  return out;
}

struct SkippingCheck {
  std::size_t mismatches = 0;
  std::size_t violations = 0;
};

SkippingCheck check_derived(const Graph& g, const Subdivision& sub, const Pattern& phi,
                            const Pattern& derived, NodeId t) {
  SkippingCheck c;
  const auto sets = oracle::all_subsets(g);
  c.violations = oracle::exhaustive(g, derived, t, sets).violations;
  // Loops end at different repeated states, so compare the walks followed
  // through their loops for the same number of old-node steps. One old-node
  // step costs at most 3 hops plus 2 per bounce off a cut link (degree <= 2).
  const std::size_t steps = 2 * g.edge_count() + 2;
  const std::size_t sub_hops = steps * (3 + 2 * 2);
  for (const FailureSet& f : sets) {
    const FailureSet lifted = lift_to_subdivision(sub, f);
    for (NodeId s = 0; s < g.node_count(); ++s) {
      if (s == t) continue;
      auto old_seq = collapse_to_old(walk(sub.graph, lifted, phi, s, t, sub_hops), g.node_count());
      auto new_seq = walk(g, f, derived, s, t, steps);
      old_seq.resize(std::min(old_seq.size(), steps));
      new_seq.resize(std::min(new_seq.size(), steps));
      if (old_seq != new_seq) ++c.mismatches;
    }
  }
  return c;
}

// 10. Skipping patterns derived from resilient patterns on the 3-subdivision:
// the face-routing pattern for every cycle and path with m <= 8, and
// synthesized tables for the small cycles.
Result derived_skipping() {
  std::size_t instances = 0, synthesized = 0, mismatches = 0, violations = 0, failures = 0;
  std::vector<Gadget> corpus;
  for (int n = 3; n <= 8; ++n) corpus.push_back(cycle(n));
  for (int n = 2; n <= 9; ++n) corpus.push_back(path(n));
  for (const Gadget& k : corpus) {
    const Graph& g = k.graph;
    const Subdivision sub = subdivide3(g);
    for (NodeId t = 0; t < g.node_count(); ++t) {
      std::vector<Pattern> sources{Pattern(outerplanar_pattern(sub.graph, t))};
      if (k.name == "cycle" && g.edge_count() <= kSynthesizedCycleEdges) {
        SynthesisConfig cfg;
        cfg.pruning = Pruning::Orbit;
        cfg.node_budget = kSynthesisBudget;
        auto r = synthesize(sub.graph, t, FailureFamily::all_subsets(sub.graph), cfg);
        if (r.verdict != Verdict::Found) {
          ++failures;
        } else {
          sources.emplace_back(*r.pattern);
          ++synthesized;
        }
      }
      for (const Pattern& phi : sources) {
        ++instances;
        DerivedSkipping d = derive_skipping(phi, g, t);
        if (d.status != DerivedSkipping::Status::Ok) {
          ++failures;
          continue;
        }
        auto c = check_derived(g, sub, phi, Pattern(d.pattern), t);
        mismatches += c.mismatches;
        violations += c.violations;
      }
    }
  }
  Result o;
  o.pass = failures == 0 && violations == 0 && mismatches == 0 && synthesized > 0;
  o.detail = std::to_string(instances) + " derivations (" + std::to_string(synthesized) +
             " from synthesized tables), " + std::to_string(failures) + " failures, " +
             std::to_string(mismatches) + " sequence mismatches, " + std::to_string(violations) + " violations";
  return o;
}

// 11. Two-hop guarantees.
Result two_hop() {
  std::uint64_t checked_id = 0, checked_src = 0, failures = 0, misdelivered = 0;
  std::size_t graphs = 0;
  for (int n = 2; n <= 7; ++n) {
    for (const Graph& g : connected_graphs(n)) {
      ++graphs;
      const auto sets = two_hop_sets(g);
      for (NodeId t = 0; t < n; ++t) {
        const Pattern id_pattern = two_hop_id_pattern(g, t);
        std::vector<Pattern> by_source;
        for (NodeId s = 0; s < n; ++s) {
          by_source.push_back(s == t ? id_pattern : two_hop_source_pattern(g, s, t));
        }
        for (const FailureSet& f : sets) {
          const auto dist = bfs_distances(g, f, t);
          bool within_two = true;
          for (int d : dist) within_two = within_two && d <= 2;  // -1: outside t's component
          for (NodeId s = 0; s < n; ++s) {
            if (s == t) continue;
            auto check = [&](const Pattern& p, bool required, std::uint64_t& counter) {
              RouteTrace tr = route(g, f, p, s, t);
              oracle::record(g, tr);
              if (tr.delivered() && tr.node_sequence().back() != t) ++misdelivered;
              if (required) {
                ++counter;
                if (!tr.delivered()) ++failures;
              }
            };
            check(id_pattern, within_two && dist[s] >= 0, checked_id);
            check(by_source[s], dist[s] >= 0 && dist[s] <= 2, checked_src);
          }
        }
      }
    }
  }
  Result o;
  o.pass = graphs == 995 && failures == 0 && misdelivered == 0 && checked_id > 0 && checked_src > 0;
  o.detail = std::to_string(graphs) + " graphs, " + std::to_string(checked_id) + " id-rule and " +
             std::to_string(checked_src) + " source-rule traces under the precondition, " +
             std::to_string(failures) + " failures, " + std::to_string(misdelivered) + " mis-deliveries";
  return o;
}

struct MinorFamily {
  Gadget gadget;
  std::string family;
};

// 13. Graphs with a K5 or K3,3 minor: Unsat under the lifted families.
Result wagner() {
  const std::vector<MinorFamily> targets{{k5(), "nok5-witnessed"}, {k33(), "nok33-witnessed"}};
  std::size_t graphs = 0, unsat = 0, found = 0, inconclusive = 0;
  std::map<int, std::size_t> by_n;
  for (int n = 5; n <= 7; ++n) {
    for (const Graph& g : connected_graphs(n)) {
      const MinorFamily* use = nullptr;
      std::optional<MinorModel> model;
      for (const auto& mf : targets) {
        model = find_minor(g, mf.gadget.graph);
        if (model) {
          use = &mf;
          break;
        }
      }
      if (!use) continue;
      ++graphs;
      ++by_n[n];
      const Gadget& h = use->gadget;
      MinorSteps ms = minor_steps(g, h.graph, model->branch);
      auto applied = apply_steps(g, ms.steps);
      const Graph& final_graph = applied.empty() ? g : applied.back().after;
      std::vector<FailureSet> lifted;
      for (const FailureSet& fh : h.family(use->family)) {
        FailureSet ff(final_graph.edge_count());
        for (std::size_t e : fh.indices()) {
          const Edge& he = h.graph.edge(e);
          ff.insert(final_graph.require_edge(ms.relabel[he.u], ms.relabel[he.v]));
        }
        lifted.push_back(applied.empty() ? ff : lift_failure_set(applied, ff));
      }
      SynthesisConfig cfg;
      cfg.node_budget = kSynthesisBudget;
      auto r = synthesize(g, ms.representative[h.target()],
                          FailureFamily::explicit_sets(g.edge_count(), lifted, use->family), cfg);
      unsat += r.verdict == Verdict::Unsat;
      found += r.verdict == Verdict::Found;
      inconclusive += r.verdict == Verdict::Inconclusive;
    }
  }
  Result o;
  o.pass = graphs == 221 && found == 0 && unsat == graphs;
  o.detail = std::to_string(graphs) + " graphs with a minor (n=5: " + std::to_string(by_n[5]) + ", n=6: " +
             std::to_string(by_n[6]) + ", n=7: " + std::to_string(by_n[7]) + "), " + std::to_string(unsat) +
             " Unsat, " + std::to_string(found) + " Found, " + std::to_string(inconclusive) + " Inconclusive";
  return o;
}

}  // namespace

// Optional arguments select criteria by number; 12 is always reported.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
  };
  std::size_t thrown = 0;
  const std::vector<Criterion> criteria{
      {1, "k4_target_removal_perfectly_resilient", k4_target_removal},
      {2, "outerplanar_pattern_perfectly_resilient", outerplanar_all},
      {3, "sameface_delivers_for_covered_sources", sameface},
      {4, "k5_proof_family_unsat_and_replays", k5_impossible},
      {5, "k33_proof_family_unsat", k33_impossible},
      {6, "planar_sweep_finds_unsat_instance", planar_sweep_unsat},
      {7, "feigenbaum_unsat_with_source_matching", feigenbaum},
      {8, "one_failure_always_tolerable", one_resilience},
      {9, "subgraph_and_contraction_transfers", transfers},
      {10, "derived_skipping_matches_subdivision", derived_skipping},
      {11, "two_hop_guarantees", two_hop},
      {13, "minor_lifted_families_unsat", wagner},
  };
  int failed = 0;
  auto report = [&](int id, const char* name, const Result& o, double secs) {
    std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  };
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = Clock::now();
    Result o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      ++thrown;
      o.detail = std::string("exception: ") + e.what();
    }
    report(c.id, c.name, o, seconds_since(t0));
  }
  // 12. Engine bound over every harness trace of this run.
  const auto& tot = oracle::totals();
  Result bound;
  bound.pass = tot.over_bound == 0 && tot.exceptions == 0 && tot.misdelivered == 0 && thrown == 0;
  bound.detail = std::to_string(tot.traces) + " traces, longest " + std::to_string(tot.max_hops) + " hops, " +
                 std::to_string(tot.over_bound) + " over 2m+2, " + std::to_string(tot.exceptions + thrown) +
                 " exceptions or walk disagreements";
  report(12, "engine_hop_bound_and_termination", bound, 0.0);
  return failed == 0 ? 0 : 1;
}
