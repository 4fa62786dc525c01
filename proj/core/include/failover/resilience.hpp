#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "failover/embedding.hpp"
#include "failover/forwarding.hpp"
#include "failover/graph.hpp"
#include "failover/routing.hpp"

namespace failover {

// Neighbors j of i (live under failed_at_i) that reach tgt in g minus i's failed
// links while avoiding i, i's other live neighbors and `avoid`.
PortMask relevant_mask(const Graph& g, NodeId i, PortMask failed_at_i, NodeId tgt,
                       NodeId avoid = kNoNode);
std::vector<NodeId> relevant_neighbors(const Graph& g, const FailureSet& f, NodeId i, NodeId tgt);

enum class OrbitVariant {
  Plain,           // no source: every relevant neighbor in one orbit
  SourceAdjacent,  // source adjacent to two relevant neighbors of i
  DisjointPaths,   // degree-2 node reached and left along node-disjoint paths
};

struct OrbitCheck {
  enum class Status { Ok, Violation, NotApplicable };
  Status status = Status::NotApplicable;
  std::vector<NodeId> relevant;
  std::vector<std::vector<NodeId>> orbits;
  std::string reason;
};

OrbitCheck check_orbit_condition(const Graph& g, const FailureSet& f, const Pattern& p, NodeId i,
                                 NodeId tgt, std::optional<NodeId> src = std::nullopt,
                                 OrbitVariant variant = OrbitVariant::Plain);

// For a degree-2 view of i (live neighbors a, b): whether some path from src
// enters i through `from` while a node-disjoint path leaves i through `to` to tgt.
bool disjoint_relay(const Graph& g, NodeId i, NodeId from, NodeId to, NodeId src, NodeId tgt);

// Keeps i's live links and a path from b to tgt avoiding i and i's other live
// neighbors; fails every other link.
FailureSet orbit_witness(const Graph& g, PortMask failed_at_i, NodeId i, NodeId tgt, NodeId b);
std::vector<FailureSet> orbit_witness_family(const Graph& g, PortMask failed_at_i, NodeId i,
                                             NodeId tgt);

std::uint64_t enumeration_budget();

class FailureFamily {
 public:
  enum class Kind { Explicit, AllSubsets, UpToK };

  static FailureFamily explicit_sets(std::size_t edge_count, std::vector<FailureSet> sets,
                                     std::string name = "explicit");
  // Binary counting order over edge indices.
  static FailureFamily all_subsets(const Graph& g, std::uint64_t budget = enumeration_budget());
  // By size, then lexicographically by edge index.
  static FailureFamily up_to(const Graph& g, int k, std::uint64_t budget = enumeration_budget());

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  const std::string& name() const { return name_; }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t size() const;
  FailureSet at(std::size_t index) const;
  std::vector<FailureSet> materialize() const;

 private:
  Kind kind_ = Kind::Explicit;
  int k_ = -1;
  std::string name_;
  std::size_t edge_count_ = 0;
  std::vector<FailureSet> sets_;
};

std::vector<FailureSet> subsets_up_to(std::size_t edge_count, int k);

struct Counterexample {
  FailureSet failures;
  std::size_t family_index = 0;
  NodeId source = kNoNode;
  RouteTrace trace;
};

struct ResilienceStats {
  std::uint64_t failure_sets = 0;
  std::uint64_t traces = 0;
};

struct ResilienceReport {
  enum class Mode { Perfect, KResilient, Family };
  Mode mode = Mode::Family;
  int k = -1;
  bool verdict = true;
  std::optional<Counterexample> counterexample;
  ResilienceStats stats;
};

std::string to_string(ResilienceReport::Mode m);

struct VerifyOptions {
  unsigned jobs = 1;
};

// Sources are src alone when given, else every node of tgt's component in id order.
ResilienceReport verify(const Graph& g, const Pattern& p, NodeId tgt, const FailureFamily& family,
                        std::optional<NodeId> src = std::nullopt, VerifyOptions options = {});

}  // namespace failover
