#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "failover/graph.hpp"

namespace failover {

class PatternError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TableKey {
  NodeId node = 0;
  PortMask failed = 0;    // over the node's neighbors in ascending order
  NodeId in = kNoNode;    // neighbor id, or kNoNode for origination
  NodeId src = kNoNode;   // kNoNode unless source matching

  friend auto operator<=>(const TableKey&, const TableKey&) = default;
};

class PatternTable {
 public:
  explicit PatternTable(bool source_matching = false) : source_matching_(source_matching) {}

  bool source_matching() const { return source_matching_; }
  // Validates the key and output against g; overwrites an existing entry.
  void set(const Graph& g, const TableKey& key, NodeId out);
  void erase(const TableKey& key) { entries_.erase(key); }
  std::optional<NodeId> lookup(const TableKey& key) const;
  const std::map<TableKey, NodeId>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const PatternTable&, const PatternTable&) = default;

 private:
  bool source_matching_ = false;
  std::map<TableKey, NodeId> entries_;
};

// Per-node cyclic successor over neighbor positions. Positions outside the
// domain hold -1; blocked ports are skipped like failed ones.
struct SkippingRule {
  std::vector<int> next;
  int start = -1;
  PortMask blocked = 0;

  friend bool operator==(const SkippingRule&, const SkippingRule&) = default;
};

class SkippingPattern {
 public:
  SkippingPattern() = default;
  explicit SkippingPattern(const Graph& g);

  // perm lists successor pairs by neighbor id.
  void set_rule(const Graph& g, NodeId v, const std::vector<std::pair<NodeId, NodeId>>& perm,
                NodeId start, const std::vector<NodeId>& blocked = {});
  // Successor of each element in cyclic order: order[k] -> order[k+1].
  void set_cycle(const Graph& g, NodeId v, const std::vector<NodeId>& order, NodeId start);

  const SkippingRule& rule(NodeId v) const { return rules_.at(static_cast<std::size_t>(v)); }
  std::size_t node_count() const { return rules_.size(); }
  // Throws if some node's successor map is not a bijection on all its ports.
  void require_total(const Graph& g) const;

  friend bool operator==(const SkippingPattern&, const SkippingPattern&) = default;

 private:
  std::vector<SkippingRule> rules_;
};

// Send to the target when that link is live; otherwise follow `inner`, whose
// rules cover only non-target ports.
struct TargetRemovalRule {
  NodeId target = kNoNode;
  SkippingPattern inner;

  friend bool operator==(const TargetRemovalRule&, const TargetRemovalRule&) = default;
};

// Source cycles its neighbors in `order`; neighbors hand source arrivals to the
// target or bounce them back.
struct TwoHopSourceRule {
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  std::vector<NodeId> order;

  friend bool operator==(const TwoHopSourceRule&, const TwoHopSourceRule&) = default;
};

// Forward to the target if live, else to the lowest live neighbor when it is
// lower than the node itself; local minima cycle through all neighbors.
struct TwoHopIdRule {
  NodeId target = kNoNode;

  friend bool operator==(const TwoHopIdRule&, const TwoHopIdRule&) = default;
};

using ProceduralRule = std::variant<TargetRemovalRule, TwoHopSourceRule, TwoHopIdRule>;

std::string procedural_name(const ProceduralRule& rule);

class Pattern {
 public:
  using Body = std::variant<PatternTable, SkippingPattern, ProceduralRule>;

  Pattern(PatternTable table) : body_(std::move(table)) {}
  Pattern(SkippingPattern skipping) : body_(std::move(skipping)) {}
  Pattern(ProceduralRule rule) : body_(std::move(rule)) {}

  const Body& body() const { return body_; }
  bool source_matching() const;
  // Sources the pattern is defined for; empty means every node.
  std::optional<NodeId> fixed_source() const;
  std::optional<NodeId> fixed_target() const;
  std::string kind() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  Body body_;
};

enum class EvalStatus { Ok, Undefined, Isolated };

struct EvalResult {
  EvalStatus status = EvalStatus::Ok;
  NodeId out = kNoNode;

  bool ok() const { return status == EvalStatus::Ok; }
};

EvalResult eval(const Pattern& p, const Graph& g, NodeId v, NodeId in, PortMask failed,
                NodeId src = kNoNode);
EvalResult eval(const Pattern& p, const Graph& g, NodeId v, NodeId in, const FailureSet& f,
                NodeId src = kNoNode);
// Position-based evaluation of a skipping rule; -1 when all candidates are failed.
int eval_skipping(const SkippingRule& rule, int in_pos, PortMask failed, int degree);

struct OrbitResult {
  EvalStatus status = EvalStatus::Ok;
  // Mutual-reachability classes of live ports under in-port -> out-port,
  // each sorted, ordered by smallest member.
  std::vector<std::vector<NodeId>> orbits;
};

OrbitResult orbits(const Pattern& p, const Graph& g, NodeId v, PortMask failed,
                   NodeId src = kNoNode);

// Expands every key of g (excluding the pattern's own target). Undefined keys
// throw unless skip_undefined, in which case they are left out.
PatternTable compile_to_table(const Pattern& p, const Graph& g, bool skip_undefined = false);

// Converts a failed-neighbor list into a mask, and back.
PortMask mask_of(const Graph& g, NodeId v, const std::vector<NodeId>& failed_neighbors);
std::vector<NodeId> neighbors_in_mask(const Graph& g, NodeId v, PortMask mask);

}  // namespace failover
