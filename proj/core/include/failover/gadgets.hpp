#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"

namespace failover {

// A named graph with its target/source set on the graph, a node legend and the
// adversarial failure families used by impossibility runs.
struct Gadget {
  std::string name;
  Graph graph;
  bool source_matching = false;
  std::map<std::string, NodeId> legend;
  std::map<std::string, std::vector<FailureSet>> families;
  int expected_nodes = 0;
  std::size_t expected_edges = 0;
  std::string note;

  NodeId target() const { return graph.target().value_or(kNoNode); }
  std::optional<NodeId> source() const { return graph.source(); }
  const std::vector<FailureSet>& family(const std::string& name) const;
};

// Adds, for every set and every non-target node i, the sets that keep i's live
// links and one path from a relevant neighbor of i to tgt. Duplicates are dropped.
std::vector<FailureSet> with_orbit_witnesses(const Graph& g, NodeId tgt, std::vector<FailureSet> sets);

// Every failure set that leaves exactly one simple src-tgt path alive.
std::vector<FailureSet> unique_path_sets(const Graph& g, NodeId src, NodeId tgt);

// Ids 0..4, target 4. Families: "nok5" (proof sets over all labelings) and
// "nok5-witnessed" (the same plus orbit witnesses).
Gadget k5();
// a=0, b=1, c=t=2 and v1..v3 = 3..5; source a. Families: "nok33-raw" = {∅, F_t∪F_b}
// for one labeling, "nok33" (all labelings) and "nok33-witnessed" (plus orbit witnesses).
Gadget k33();
// Planar embedded K4, target 3.
Gadget k4();
Gadget cycle(int n);
Gadget path(int n);
// Center 0.
Gadget star(int leaves);
// Apex 0 adjacent to the path 1..n-1.
Gadget fan(int n);
// Hub 0 and rim 1..rim with a planar rotation.
Gadget wheel(int rim);

// Level one 1..4 -> ids 0..3, center c = 4, pair nodes 12,13,14,23,24,34 -> ids
// 5..10, t = 11, s = 12. Source matching. Families: "paths", "self", "swap",
// "cycle", "skip", "loops" (self/swap/cycle/skip) and "feigenbaum" (all).
Gadget feigenbaum13();
// feigenbaum13 with s replaced by the path s_0..s_k; s_k = 12, s_{k-1}..s_0 = 13..12+k.
Gadget padded_gk(int k);
// r copies of padded_gk(pad) sharing s_0. Copy q holds ids [q(12+pad), (q+1)(12+pad));
// the shared source is r(12+pad) and the new target r(12+pad)+1. Family "joint".
Gadget replicated(int copies, int pad);

// i=0, v1=1, v2=2, v3=3, s=4, t=5.
Gadget relevance_fig();
// t=0, x=1, u=2, v=3, w=4; family "counter" = {(t,v)}.
Gadget counter_fig();
// Skipping pattern on counter_fig that bounces at v: u -> v -> u -> x -> t when (t,v) fails.
SkippingPattern counter_bounce_pattern(const Graph& counter);

// Connected planar 7-node graph without a pattern tolerating every failure set
// of size <= 4, as found by planar_sweep. Family "upto4".
Gadget planar7();

std::vector<std::string> gadget_names();
// name plus optional integer parameters (n, k, r/pad as applicable).
Gadget make_gadget(const std::string& name, const std::vector<int>& params = {});

}  // namespace failover
