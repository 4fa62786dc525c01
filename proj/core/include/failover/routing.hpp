#pragma once

#include <string>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"

namespace failover {

enum class Outcome { Delivered, Loop, Dead, NotApplicable };
enum class DeadReason { None, Isolated, Undefined };

std::string to_string(Outcome o);
std::string to_string(DeadReason r);

struct Hop {
  NodeId node = 0;
  NodeId in = kNoNode;
  NodeId out = kNoNode;

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct RouteTrace {
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  std::vector<Hop> hops;
  Outcome outcome = Outcome::NotApplicable;
  std::size_t loop_index = 0;  // hop index of the first repeated state
  DeadReason dead_reason = DeadReason::None;

  // Nodes visited in order; ends with the target when delivered.
  std::vector<NodeId> node_sequence() const;
  bool delivered() const { return outcome == Outcome::Delivered; }

  friend bool operator==(const RouteTrace&, const RouteTrace&) = default;
};

std::size_t hop_bound(const Graph& g);

RouteTrace route(const Graph& g, const FailureSet& f, const Pattern& p, NodeId src, NodeId tgt);

// One trace per node other than tgt, in id order; nodes cut off from tgt are NotApplicable.
std::vector<RouteTrace> route_all_sources(const Graph& g, const FailureSet& f, const Pattern& p,
                                          NodeId tgt);

// Node sequence of the walk from src, followed through loops, for at most
// max_hops hops or until tgt or a dead end.
std::vector<NodeId> walk(const Graph& g, const FailureSet& f, const Pattern& p, NodeId src,
                         NodeId tgt, std::size_t max_hops);

std::string render(const RouteTrace& t);

}  // namespace failover
