#pragma once

#include <optional>
#include <string>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"
#include "failover/routing.hpp"

namespace failover {

class TransferError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A pattern moved onto a smaller graph; ids in `map` relate it to the input graph.
struct Transfer {
  Graph graph;
  PatternTable pattern;
  NodeMap map;
  NodeId target = kNoNode;
  std::optional<NodeId> source;
};

// Runs `a` on g with every edge outside the subgraph treated as failed.
// Requires the target (and the source, when given) to survive.
Transfer subgraph_transfer(const Pattern& a, const Graph& g, const std::vector<Edge>& drop_edges,
                           const std::vector<NodeId>& drop_nodes, NodeId tgt,
                           std::optional<NodeId> src = std::nullopt);
// gp uses g's ids for its first gp.node_count() nodes and must be a subgraph of g.
Transfer subgraph_transfer(const Pattern& a, const Graph& g, const Graph& gp, NodeId tgt,
                           std::optional<NodeId> src = std::nullopt);

// Merges j into i. The merged node chases internal i<->j hops of `a`, capped at
// deg(i)+deg(j) steps; a longer chase leaves the entry undefined.
Transfer contract_pattern(const Pattern& a, const Graph& g, NodeId i, NodeId j, NodeId tgt,
                          std::optional<NodeId> src = std::nullopt);

// Failure set of g corresponding to f_prime on the contracted graph, plus the redundant links.
FailureSet lift_contracted(const Graph& g, const Contraction& c, NodeId i, NodeId j,
                           const FailureSet& f_prime);

// Routes `a` on g under f_prime (lifted) and the contracted pattern on g/(i,j)
// under f_prime; true when the node sequences agree after renaming j to i.
// src is a node of the contracted graph, tgt is g's target (as for contract_pattern).
bool path_correspondence(const Pattern& a, const Graph& g, NodeId i, NodeId j,
                         const FailureSet& f_prime, NodeId src, NodeId tgt,
                         const Pattern* contracted = nullptr);

struct TransferStep {
  enum class Kind { Subgraph, Contraction };
  Kind kind = Kind::Subgraph;
  std::vector<Edge> drop_edges;
  std::vector<NodeId> drop_nodes;
  NodeId i = kNoNode;
  NodeId j = kNoNode;

  static TransferStep subgraph(std::vector<Edge> edges, std::vector<NodeId> nodes = {});
  static TransferStep contraction(NodeId i, NodeId j);
};

struct AppliedStep {
  TransferStep step;
  Graph before;
  Graph after;
  NodeMap map;
  std::vector<Edge> redundant;  // contraction only, in `before` ids
};

// Applies the steps in order; ids of each step refer to the previous graph.
std::vector<AppliedStep> apply_steps(const Graph& g, const std::vector<TransferStep>& steps);

struct MinorTransfer {
  Graph graph;
  PatternTable pattern;
  NodeId target = kNoNode;
  std::optional<NodeId> source;
  std::vector<NodeId> original_of;  // node of the minor -> representative in g
};

MinorTransfer minor_transfer(const Pattern& a, const Graph& g, const std::vector<TransferStep>& steps,
                             NodeId tgt, std::optional<NodeId> src = std::nullopt);

// Failure set of the original graph whose effect after `steps` is f_final.
FailureSet lift_failure_set(const std::vector<AppliedStep>& steps, const FailureSet& f_final);

// Deletion and contraction steps turning g into a copy of h given a minor model
// (branch set per node of g, kNoNode outside). `keep` nodes stay as their branch
// set's representative. relabel[h node] is the node of the final graph.
struct MinorSteps {
  std::vector<TransferStep> steps;
  std::vector<NodeId> relabel;
  std::vector<NodeId> representative;  // h node -> node of g
};
MinorSteps minor_steps(const Graph& g, const Graph& h, const std::vector<NodeId>& branch,
                       const std::vector<NodeId>& keep = {});

// Pattern on subdivide3(g) that mimics a skipping pattern on g.
SkippingPattern subdivide_skipping(const Graph& g, const SkippingPattern& p);

struct DerivedSkipping {
  enum class Status { Ok, NonBijective };
  Status status = Status::Ok;
  SkippingPattern pattern;
  // Directed links (v, x) whose new nodes always return packets to v.
  std::vector<std::pair<NodeId, NodeId>> cut;
  NodeId witness_node = kNoNode;
  std::vector<NodeId> witness_ports;  // in-ports of g mapped to the same out-port
  std::string reason;
};

// phi is a pattern on subdivide3(g). Old nodes of the subdivision never see a
// failure, so their rule under no failures defines the successor per port.
DerivedSkipping derive_skipping(const Pattern& phi, const Graph& g, NodeId tgt);

// Old-node sequence of a trace on the subdivision, with repeats collapsed.
std::vector<NodeId> old_node_sequence(const RouteTrace& t, int original_nodes);

}  // namespace failover
