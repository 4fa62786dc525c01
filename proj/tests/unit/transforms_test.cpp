#include <gtest/gtest.h>

#include "failover/constructions.hpp"
#include "failover/gadgets.hpp"
#include "failover/minor.hpp"
#include "failover/transforms.hpp"
#include "oracles.hpp"

namespace failover {
namespace {

FailureSet lift_subgraph(const Graph& g, const Transfer& t, const FailureSet& fp,
                         const std::vector<Edge>& dropped) {
  FailureSet f = FailureSet::from_edges(g, dropped);
  for (std::size_t e : fp.indices()) {
    const Edge& ed = t.graph.edge(e);
    f.insert(g.require_edge(t.map.old_of_new[ed.u], t.map.old_of_new[ed.v]));
  }
  return f;
}

TEST(SubgraphTransfer, RoutesLikeTheOriginalWithDroppedLinksFailed) {
  Gadget k = k4();
  Pattern a = target_removal_pattern(k.graph, 3);
  const std::vector<Edge> drop{{0, 1}};
  Transfer t = subgraph_transfer(a, k.graph, drop, {}, 3);
  EXPECT_EQ(t.graph.edge_count(), 5u);
  for (const FailureSet& fp : oracle::all_subsets(t.graph)) {
    const FailureSet f = lift_subgraph(k.graph, t, fp, drop);
    for (NodeId s = 0; s < 3; ++s) {
      RouteTrace small = route(t.graph, fp, Pattern(t.pattern), t.map.new_of_old[s], t.target);
      RouteTrace big = route(k.graph, f, a, s, 3);
      auto seq = small.node_sequence();
      for (NodeId& v : seq) v = t.map.old_of_new[v];
      EXPECT_EQ(small.outcome, big.outcome);
      if (big.outcome != Outcome::Loop) {
        EXPECT_EQ(seq, big.node_sequence());
      }
    }
  }
}

TEST(SubgraphTransfer, NodeRemovalAndErrors) {
  Gadget w = wheel(5);
  Pattern a = target_removal_pattern(w.graph, 0);
  Transfer t = subgraph_transfer(a, w.graph, std::vector<Edge>{}, {3}, 0);
  EXPECT_EQ(t.graph.node_count(), 5);
  EXPECT_EQ(t.map.new_of_old[3], kNoNode);
  EXPECT_EQ(oracle::exhaustive(t.graph, Pattern(t.pattern), t.target, oracle::all_subsets(t.graph)).violations,
            0u);
  EXPECT_THROW(subgraph_transfer(a, w.graph, std::vector<Edge>{}, {0}, 0), TransferError);
  EXPECT_THROW(subgraph_transfer(a, w.graph, {{1, 3}}, {}, 0), TransferError);
  EXPECT_THROW(subgraph_transfer(a, w.graph, complete_graph(4), 0), TransferError);
}

TEST(ContractPattern, PathsCorrespondOnCycle) {
  Gadget c = cycle(5);
  Pattern a(outerplanar_pattern(c.graph, 0));
  for (auto [i, j] : {std::pair<NodeId, NodeId>{1, 2}, {2, 1}, {0, 1}, {1, 0}}) {
    Transfer t = contract_pattern(a, c.graph, i, j, 0);
    EXPECT_EQ(t.graph.node_count(), 4);
    const Pattern b(t.pattern);
    for (const FailureSet& fp : oracle::all_subsets(t.graph)) {
      for (NodeId s = 0; s < 4; ++s) {
        if (s == t.target) continue;
        EXPECT_TRUE(path_correspondence(a, c.graph, i, j, fp, s, 0, &b));
      }
    }
    EXPECT_EQ(oracle::exhaustive(t.graph, b, t.target, oracle::all_subsets(t.graph)).violations, 0u);
  }
  EXPECT_THROW(contract_pattern(a, c.graph, 0, 2, 0), TransferError);
}

TEST(ContractPattern, LiftKeepsRedundantLinksFailed) {
  Graph g = complete_graph(4);
  Contraction c = contract_edge(g, 0, 1);
  FailureSet lifted = lift_contracted(g, c, 0, 1, FailureSet(c.graph.edge_count()));
  EXPECT_FALSE(lifted.contains(g.require_edge(0, 1)));
  EXPECT_EQ(lifted.size(), c.redundant.size());
  for (const Edge& r : c.redundant) EXPECT_TRUE(lifted.contains(g.require_edge(r.u, r.v)));
}

// A minor produced by minor_steps is isomorphic to h, and lifted failure sets
// preserve connectivity between branch representatives.
TEST(MinorSteps, ReachesHAndLiftsPreserveConnectivity) {
  Gadget k = wheel(5);
  Graph h = complete_graph(4);
  auto model = find_minor(k.graph, h);
  ASSERT_TRUE(model.has_value());
  MinorSteps ms = minor_steps(k.graph, h, model->branch);
  auto applied = apply_steps(k.graph, ms.steps);
  ASSERT_FALSE(applied.empty());
  const Graph& last = applied.back().after;
  EXPECT_TRUE(oracle::isomorphic(last, h));
  for (const Edge& e : h.edges()) EXPECT_TRUE(last.adjacent(ms.relabel[e.u], ms.relabel[e.v]));
  for (const FailureSet& ff : oracle::all_subsets(last)) {
    const FailureSet f = lift_failure_set(applied, ff);
    for (NodeId a = 0; a < 4; ++a) {
      for (NodeId b = a + 1; b < 4; ++b) {
        EXPECT_EQ(oracle::connected(last, ff, ms.relabel[a], ms.relabel[b]),
                  oracle::connected(k.graph, f, ms.representative[a], ms.representative[b]));
      }
    }
  }
  std::vector<NodeId> broken(k.graph.node_count(), kNoNode);
  broken[0] = 0;
  EXPECT_THROW(minor_steps(k.graph, h, broken), TransferError);
}

TEST(MinorTransfer, KeepsResilienceOfFaceRouting) {
  Gadget w = wheel(5);
  Pattern a = target_removal_pattern(w.graph, 0);
  std::vector<TransferStep> steps{TransferStep::subgraph({{1, 2}}), TransferStep::contraction(2, 3)};
  MinorTransfer m = minor_transfer(a, w.graph, steps, 0);
  EXPECT_EQ(m.graph.node_count(), 5);
  EXPECT_EQ(m.original_of[m.target], 0);
  EXPECT_EQ(oracle::exhaustive(m.graph, Pattern(m.pattern), m.target, oracle::all_subsets(m.graph)).violations,
            0u);
  EXPECT_THROW(apply_steps(w.graph, {TransferStep::contraction(1, 3)}), TransferError);
}

TEST(Subdivision, SkippingPatternCarriesOver) {
  for (int n : {3, 4, 5}) {
    Gadget c = cycle(n);
    SkippingPattern p = outerplanar_pattern(c.graph, 0);
    Subdivision sub = subdivide3(c.graph);
    Pattern sp(subdivide_skipping(c.graph, p));
    for (const FailureSet& f : oracle::all_subsets(c.graph)) {
      const FailureSet lifted = lift_to_subdivision(sub, f);
      for (NodeId s = 1; s < n; ++s) {
        RouteTrace big = route(sub.graph, lifted, sp, s, 0);
        RouteTrace small = route(c.graph, f, Pattern(p), s, 0);
        EXPECT_EQ(big.delivered(), small.delivered());
        if (small.delivered()) {
          EXPECT_EQ(old_node_sequence(big, n), small.node_sequence());
        }
      }
    }
  }
}

TEST(DeriveSkipping, RecoversFaceRoutingFromItsSubdivision) {
  Gadget c = cycle(5);
  SkippingPattern p = outerplanar_pattern(c.graph, 0);
  Pattern phi(subdivide_skipping(c.graph, p));
  DerivedSkipping d = derive_skipping(phi, c.graph, 0);
  ASSERT_EQ(d.status, DerivedSkipping::Status::Ok) << d.reason;
  for (NodeId v = 1; v < 5; ++v) {
    for (NodeId in : c.graph.neighbors(v)) {
      EXPECT_EQ(eval(Pattern(d.pattern), c.graph, v, in, PortMask{0}).out,
                eval(Pattern(p), c.graph, v, in, PortMask{0}).out);
    }
  }
  EXPECT_EQ(oracle::exhaustive(c.graph, Pattern(d.pattern), 0, oracle::all_subsets(c.graph)).violations, 0u);
}

TEST(OldNodeSequence, CollapsesSubdivisionNodes) {
  RouteTrace t;
  t.hops = {{0, kNoNode, 5}, {5, 0, 6}, {6, 5, 1}, {1, 6, 7}, {7, 1, 1}, {1, 7, 2}};
  t.outcome = Outcome::Delivered;
  EXPECT_EQ(old_node_sequence(t, 5), (std::vector<NodeId>{0, 1, 2}));
}

}  // namespace
}  // namespace failover
