#pragma once

#include <optional>
#include <vector>

#include "failover/embedding.hpp"
#include "failover/graph.hpp"

namespace failover {

struct MinorLimits {
  int max_nodes = 10;
};

// branch[v] = node of h whose branch set contains v, or kNoNode if v is deleted.
struct MinorModel {
  std::vector<NodeId> branch;
};

std::optional<MinorModel> find_minor(const Graph& g, const Graph& h, MinorLimits limits = {});
bool has_minor(const Graph& g, const Graph& h, MinorLimits limits = {});

Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);

}  // namespace failover
