#pragma once

#include <map>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"

namespace failover {

class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rotation successor at every node, starting on the outer face. g must carry a
// validated outerplanar rotation.
SkippingPattern outerplanar_pattern(const Graph& g, NodeId tgt);

struct SameFacePattern {
  SkippingPattern pattern;
  std::vector<NodeId> covered;
  std::vector<NodeId> uncovered;  // share no face with the target
};

// Same successor rule as outerplanar_pattern; each node starts on a face it
// shares with tgt. `selection` picks a face index (into faces(g)) per node;
// otherwise the first shared face is used.
SameFacePattern sameface_pattern(const Graph& g, NodeId tgt,
                                 const std::map<NodeId, std::size_t>& selection = {});

// Forward to tgt when that link is live, else face-route on g minus tgt. Uses
// g's rotation when it is outerplanar on g minus tgt, else searches one.
Pattern target_removal_pattern(const Graph& g, NodeId tgt);

// Source-matching pattern delivering whenever src and tgt are within two hops.
Pattern two_hop_source_pattern(const Graph& g, NodeId src, NodeId tgt);

// Pattern delivering from every node when the whole component lies within two hops of tgt.
Pattern two_hop_id_pattern(const Graph& g, NodeId tgt);

}  // namespace failover
