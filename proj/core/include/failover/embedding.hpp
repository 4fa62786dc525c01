#pragma once

#include <optional>
#include <vector>

#include "failover/graph.hpp"

namespace failover {

struct Dart {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Dart&, const Dart&) = default;
};

struct FaceWalk {
  std::vector<Dart> hops;

  std::vector<NodeId> nodes() const;  // distinct nodes in first-visit order
};

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Successor of `from` in v's rotation, skipping failed links. Returns `from`
// when it is the only live neighbor.
NodeId rotation_successor(const Graph& g, const FailureSet& f, NodeId v, NodeId from);

// Right-hand-rule walk until the first dart repeats.
FaceWalk outer_face_walk(const Graph& g, const FailureSet& f, NodeId start, NodeId first_out);

// All faces of the embedding of g \ f, each listed once, ordered by their smallest dart.
std::vector<FaceWalk> faces(const Graph& g, const FailureSet& f);
std::vector<FaceWalk> faces(const Graph& g);

// Lowest node with a live link and its first live rotation entry.
std::optional<Dart> canonical_dart(const Graph& g, const FailureSet& f);

// Euler check V - E + F = 1 + components on the rotation system.
bool is_planar_embedding(const Graph& g);

bool validate_outerplanar(const Graph& g);

struct EmbeddingLimits {
  int max_nodes = 10;
};

std::optional<Rotation> find_outerplanar_rotation(const Graph& g, EmbeddingLimits limits = {});

}  // namespace failover
