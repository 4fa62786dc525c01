#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "failover/graph_enum.hpp"
#include "oracles.hpp"

namespace failover {
namespace {

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back(make_edge(perm[e.u], perm[e.v]));
  return Graph(g.node_count(), edges);
}

// Connected graphs per node count (independently tabulated).
TEST(Enumeration, ConnectedCountsMatchReferenceTable) {
  const std::vector<std::size_t> expected{1, 1, 2, 6, 21, 112, 853};
  for (int n = 1; n <= 7; ++n) {
    auto graphs = enumerate_graphs({n, -1, true});
    EXPECT_EQ(graphs.size(), expected[n - 1]) << "n=" << n;
    for (const Graph& g : graphs) EXPECT_TRUE(is_connected(g));
  }
}

TEST(Enumeration, AllGraphsOnFourNodes) {
  EXPECT_EQ(enumerate_graphs({4, -1, false}).size(), 11u);
}

TEST(Enumeration, EdgeBoundedCorpora) {
  EXPECT_EQ(connected_graphs_up_to(10, 9).size(), 1069u);
  EXPECT_EQ(connected_graphs_up_to(10, 8).size(), 359u);
  std::size_t small = 0;
  for (int n = 1; n <= 7; ++n) small += enumerate_graphs({n, 8, true}).size();
  EXPECT_EQ(small, 200u);
  std::map<int, std::size_t> by_n;
  for (const Graph& g : connected_graphs_up_to(10, 9)) {
    ++by_n[g.node_count()];
    EXPECT_LE(g.edge_count(), 9u);
    EXPECT_TRUE(is_connected(g));
  }
  const std::map<int, std::size_t> expected{{1, 1},  {2, 1},   {3, 2},   {4, 6},   {5, 20},
                                            {6, 80}, {7, 218}, {8, 348}, {9, 287}, {10, 106}};
  EXPECT_EQ(by_n, expected);
}

TEST(Enumeration, ResultsArePairwiseNonIsomorphic) {
  auto graphs = enumerate_graphs({5, -1, true});
  for (std::size_t a = 0; a < graphs.size(); ++a) {
    for (std::size_t b = a + 1; b < graphs.size(); ++b) {
      EXPECT_FALSE(oracle::isomorphic(graphs[a], graphs[b]));
    }
  }
}

TEST(CanonicalCode, InvariantUnderRelabeling) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = oracle::random_connected(rng, 6, trial % 6);
    std::vector<NodeId> perm{0, 1, 2, 3, 4, 5};
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h = relabel(g, perm);
    EXPECT_EQ(canonical_code(g), canonical_code(h));
    EXPECT_EQ(canonical_form(g), canonical_form(h));
    EXPECT_TRUE(oracle::isomorphic(g, canonical_form(g)));
  }
}

TEST(CanonicalCode, SeparatesNonIsomorphicGraphs) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Graph a = oracle::random_connected(rng, 6, trial % 5);
    Graph b = oracle::random_connected(rng, 6, trial % 5);
    EXPECT_EQ(canonical_code(a) == canonical_code(b), oracle::isomorphic(a, b));
  }
}

TEST(CanonicalCode, RejectsLargeGraphs) { EXPECT_THROW(canonical_code(Graph(12)), GraphError); }

}  // namespace
}  // namespace failover
