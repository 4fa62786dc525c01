#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "failover/graph.hpp"

namespace failover {

// Isomorphism-invariant code of a graph with at most 11 nodes: the minimum
// upper-triangle adjacency bitstring over all relabelings.
std::uint64_t canonical_code(const Graph& g);
Graph canonical_form(const Graph& g);

struct EnumerationFilter {
  int nodes = 0;
  int max_edges = -1;  // -1 = unbounded
  bool connected_only = true;
};

// Every graph on exactly filter.nodes nodes up to isomorphism, each in canonical
// form, ordered by (edge count, code).
std::vector<Graph> enumerate_graphs(const EnumerationFilter& filter);

// Connected graphs with 1 <= n <= max_nodes and at most max_edges edges.
std::vector<Graph> connected_graphs_up_to(int max_nodes, int max_edges);

}  // namespace failover
