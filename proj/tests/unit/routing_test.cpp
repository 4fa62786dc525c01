#include <gtest/gtest.h>

#include <random>

#include "failover/constructions.hpp"
#include "failover/gadgets.hpp"
#include "failover/minor.hpp"
#include "failover/routing.hpp"
#include "oracles.hpp"

namespace failover {
namespace {

SkippingPattern forward_path(const Graph& g) {
  // Path 0-1-2: 0 sends to 1, 1 forwards away from its in-port.
  SkippingPattern p(g);
  p.set_cycle(g, 0, {1}, 1);
  p.set_cycle(g, 1, {0, 2}, 2);
  p.set_cycle(g, 2, {1}, 1);
  return p;
}

TEST(Route, PathDeliversInTwoHops) {
  Graph g(3, {{0, 1}, {1, 2}});
  RouteTrace t = route(g, FailureSet(2), Pattern(forward_path(g)), 0, 2);
  EXPECT_EQ(t.outcome, Outcome::Delivered);
  EXPECT_EQ(t.hops.size(), 2u);
  EXPECT_EQ(t.node_sequence(), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(t.hops[0], (Hop{0, kNoNode, 1}));
  EXPECT_EQ(render(t), "0 -> 1 -> 2 : Delivered");
}

TEST(Route, DetectsLoopsAndDeadEnds) {
  Graph g(3, {{0, 1}, {1, 2}});
  FailureSet f = FailureSet::from_edges(g, {{1, 2}});
  RouteTrace t = route(g, f, Pattern(forward_path(g)), 0, 2);
  EXPECT_EQ(t.outcome, Outcome::Loop);
  EXPECT_EQ(t.node_sequence(), (std::vector<NodeId>{0, 1, 0, 1}));
  EXPECT_EQ(t.loop_index, 1u);

  FailureSet cut = FailureSet::from_edges(g, {{0, 1}});
  RouteTrace d = route(g, cut, Pattern(forward_path(g)), 0, 2);
  EXPECT_EQ(d.outcome, Outcome::Dead);
  EXPECT_EQ(d.dead_reason, DeadReason::Isolated);
  EXPECT_EQ(d.node_sequence(), (std::vector<NodeId>{0}));

  RouteTrace u = route(g, FailureSet(2), Pattern(PatternTable()), 0, 2);
  EXPECT_EQ(u.outcome, Outcome::Dead);
  EXPECT_EQ(u.dead_reason, DeadReason::Undefined);
  EXPECT_NE(render(u).find("Undefined"), std::string::npos);
}

TEST(Route, RejectsBadEndpoints) {
  Graph g(3, {{0, 1}, {1, 2}});
  Pattern p(forward_path(g));
  EXPECT_THROW(route(g, FailureSet(2), p, 0, 0), GraphError);
  EXPECT_THROW(route(g, FailureSet(2), p, 0, 5), GraphError);
}

TEST(Route, CounterGadgetBouncesToDelivery) {
  Gadget c = counter_fig();
  const auto& L = c.legend;
  FailureSet f = c.family("counter").front();
  RouteTrace t = route(c.graph, f, Pattern(counter_bounce_pattern(c.graph)), L.at("u"), L.at("t"));
  EXPECT_TRUE(t.delivered());
  EXPECT_EQ(t.node_sequence(),
            (std::vector<NodeId>{L.at("u"), L.at("v"), L.at("u"), L.at("x"), L.at("t")}));
}

TEST(RouteAllSources, MarksDisconnectedSources) {
  Gadget k = k4();
  Pattern p = target_removal_pattern(k.graph, 3);
  auto traces = route_all_sources(k.graph, FailureSet(6), p, 3);
  ASSERT_EQ(traces.size(), 3u);
  for (const auto& t : traces) EXPECT_TRUE(t.delivered());

  Gadget s = star(4);
  FailureSet f = FailureSet::from_edges(s.graph, {{0, 2}, {0, 3}, {0, 4}});
  SkippingPattern sp(s.graph);
  sp.set_cycle(s.graph, 0, {1, 2, 3, 4}, 1);
  for (NodeId leaf = 1; leaf <= 4; ++leaf) sp.set_cycle(s.graph, leaf, {0}, 0);
  auto st = route_all_sources(s.graph, f, Pattern(sp), 0);
  std::size_t applicable = 0;
  for (const auto& t : st) applicable += t.outcome != Outcome::NotApplicable;
  EXPECT_EQ(applicable, 1u);
  EXPECT_THROW(route_all_sources(k.graph, FailureSet(6), two_hop_source_pattern(k.graph, 0, 3), 3),
               PatternError);
}

TEST(RouteAllSources, FourCycleSingleFailures) {
  Gadget c = cycle(4);
  c.graph.set_target(0);
  Pattern p(outerplanar_pattern(c.graph, 0));
  for (std::size_t e = 0; e < 4; ++e) {
    FailureSet f = FailureSet::from_mask(4, std::uint64_t{1} << e);
    auto traces = route_all_sources(c.graph, f, p, 0);
    std::size_t delivered = 0;
    for (const auto& t : traces) delivered += t.delivered();
    EXPECT_EQ(delivered, 3u);
  }
}

// Library traces agree with the independent walk and stay within 2m+2 hops.
TEST(Route, MatchesIndependentWalkOnRandomTables) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = oracle::random_connected(rng, 6, trial % 7);
    PatternTable table;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const int deg = g.degree(v);
      auto nb = g.neighbors(v);
      for (PortMask failed = 0; failed < full_mask(deg); ++failed) {
        std::vector<NodeId> live;
        for (int k = 0; k < deg; ++k) {
          if (!((failed >> k) & 1U)) live.push_back(nb[k]);
        }
        for (int in = -1; in < deg; ++in) {
          if (in >= 0 && ((failed >> in) & 1U)) continue;
          table.set(g, {v, failed, in < 0 ? kNoNode : nb[in], kNoNode}, live[rng() % live.size()]);
        }
      }
    }
    const Pattern p(table);
    const FailureSet f = FailureSet::from_mask(g.edge_count(), rng() & ((1u << g.edge_count()) - 1));
    for (NodeId s = 1; s < g.node_count(); ++s) {
      RouteTrace t = route(g, f, p, s, 0);
      oracle::Walk w = oracle::walk(g, f, p, s, 0);
      EXPECT_LE(t.hops.size(), hop_bound(g));
      EXPECT_EQ(t.delivered(), w.end == oracle::WalkEnd::Delivered);
      EXPECT_EQ(t.outcome == Outcome::Loop, w.end == oracle::WalkEnd::Loop);
      if (t.outcome != Outcome::Loop) {
        EXPECT_EQ(t.node_sequence(), w.nodes);
      }
      if (t.delivered()) {
        EXPECT_TRUE(oracle::connected(g, f, s, 0));
      }
      EXPECT_EQ(walk(g, f, p, s, 0, t.hops.size()), t.node_sequence());
    }
  }
}

TEST(Route, HopBoundIsTwoMPlusTwo) { EXPECT_EQ(hop_bound(complete_graph(4)), 14u); }

}  // namespace
}  // namespace failover
