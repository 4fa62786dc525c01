#include <gtest/gtest.h>

#include <set>

#include "failover/embedding.hpp"
#include "failover/gadgets.hpp"
#include "failover/graph_enum.hpp"
#include "failover/minor.hpp"

namespace failover {
namespace {

TEST(Embedding, FaceCountsFollowEuler) {
  for (const Gadget& k : {k4(), wheel(5), wheel(4), cycle(6)}) {
    const Graph& g = k.graph;
    ASSERT_TRUE(g.has_rotation()) << k.name;
    EXPECT_TRUE(is_planar_embedding(g)) << k.name;
    const auto fs = faces(g);
    EXPECT_EQ(static_cast<long>(fs.size()),
              static_cast<long>(g.edge_count()) - g.node_count() + 2)
        << k.name;
    // Every dart lies on exactly one face.
    std::set<Dart> darts;
    for (const auto& f : fs) {
      for (const Dart& d : f.hops) EXPECT_TRUE(darts.insert(d).second);
    }
    EXPECT_EQ(darts.size(), 2 * g.edge_count());
  }
}

TEST(Embedding, NonPlanarRotationFailsEuler) {
  Graph g = complete_graph(5);
  Rotation rot;
  for (NodeId v = 0; v < 5; ++v) {
    auto nb = g.neighbors(v);
    rot.emplace_back(nb.begin(), nb.end());
  }
  g.set_rotation(rot);
  EXPECT_FALSE(is_planar_embedding(g));
}

TEST(Embedding, RotationSuccessorSkipsFailedLinks) {
  Graph g = k4().graph;  // rotation at 0: 1, 3, 2
  FailureSet none(g.edge_count());
  EXPECT_EQ(rotation_successor(g, none, 0, 1), 3);
  EXPECT_EQ(rotation_successor(g, none, 0, 2), 1);
  FailureSet f = FailureSet::from_edges(g, {{0, 3}});
  EXPECT_EQ(rotation_successor(g, f, 0, 1), 2);
  FailureSet only = FailureSet::from_edges(g, {{0, 3}, {0, 2}});
  EXPECT_EQ(rotation_successor(g, only, 0, 1), 1);
}

TEST(Embedding, OuterFaceWalkOfCycleVisitsEveryNode) {
  Gadget c = cycle(5);
  FailureSet none(c.graph.edge_count());
  auto dart = canonical_dart(c.graph, none);
  ASSERT_TRUE(dart.has_value());
  EXPECT_EQ(dart->from, 0);
  FaceWalk w = outer_face_walk(c.graph, none, dart->from, dart->to);
  EXPECT_EQ(w.hops.size(), 5u);
  EXPECT_EQ(w.nodes().size(), 5u);
}

TEST(Embedding, CanonicalDartIsEmptyWithoutLiveLinks) {
  Graph g = cycle(3).graph;
  FailureSet all = FailureSet::from_mask(3, 0b111);
  EXPECT_FALSE(canonical_dart(g, all).has_value());
}

TEST(Outerplanar, ValidationDistinguishesEmbeddings) {
  EXPECT_TRUE(validate_outerplanar(cycle(6).graph));
  EXPECT_TRUE(validate_outerplanar(fan(5).graph));
  EXPECT_FALSE(validate_outerplanar(k4().graph));
  EXPECT_THROW(validate_outerplanar(complete_graph(3)), GraphError);
}

TEST(Outerplanar, SearchFindsValidRotationsOrNone) {
  EXPECT_FALSE(find_outerplanar_rotation(complete_graph(4)).has_value());
  EXPECT_FALSE(find_outerplanar_rotation(complete_bipartite(2, 3)).has_value());
  Graph g = complete_graph(4);
  Removal r = induced_remove(g, {{0, 1}}, {});
  auto rot = find_outerplanar_rotation(r.graph);
  ASSERT_TRUE(rot.has_value());
  Graph h = r.graph;
  h.set_rotation(*rot);
  EXPECT_TRUE(validate_outerplanar(h));
}

// Counts of connected outerplanar graphs by node count (independently tabulated).
TEST(Outerplanar, CountsMatchReferenceTable) {
  const std::vector<std::size_t> expected{1, 1, 2, 5, 13, 46};
  for (int n = 1; n <= 6; ++n) {
    std::size_t count = 0;
    for (Graph g : enumerate_graphs({n, -1, true})) {
      auto rot = find_outerplanar_rotation(g);
      if (!rot) continue;
      ++count;
      g.set_rotation(*rot);
      EXPECT_TRUE(validate_outerplanar(g));
    }
    EXPECT_EQ(count, expected[n - 1]) << "n=" << n;
  }
}

TEST(Outerplanar, SearchRespectsNodeLimit) {
  EXPECT_THROW(find_outerplanar_rotation(cycle(12).graph, {10}), LimitError);
}

}  // namespace
}  // namespace failover
