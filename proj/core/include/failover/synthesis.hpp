#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"
#include "failover/resilience.hpp"
#include "failover/routing.hpp"

namespace failover {

enum class Pruning { None, Orbit, OrbitDegree2 };
enum class Verdict { Found, Unsat, Inconclusive };

std::string to_string(Pruning p);
std::string to_string(Verdict v);
Pruning parse_pruning(const std::string& s);

struct SynthesisConfig {
  bool source_matching = false;
  // Simulate only this source; otherwise every node of the target's component.
  std::optional<NodeId> source;
  Pruning pruning = Pruning::None;
  std::uint64_t node_budget = 20'000'000;
  std::size_t max_refutations = 1'000'000;
};

struct TableAssignment {
  TableKey key;
  NodeId out = kNoNode;

  friend bool operator==(const TableAssignment&, const TableAssignment&) = default;
};

struct Refutation {
  enum class Kind { Trace, Orbit };
  Kind kind = Kind::Trace;
  std::vector<TableAssignment> entries;
  // Trace refutations: the failing simulation.
  std::size_t family_index = 0;
  NodeId source = kNoNode;
  RouteTrace trace;
  // Orbit refutations: the lemma variant that rejects `entries` at one node view.
  OrbitVariant variant = OrbitVariant::Plain;

  friend bool operator==(const Refutation&, const Refutation&) = default;
};

struct SynthesisStats {
  std::uint64_t search_nodes = 0;      // out-port choices tried
  std::uint64_t entries_branched = 0;  // table entries instantiated
  std::uint64_t simulations = 0;
  std::uint64_t pruned = 0;
  std::uint64_t backjumps = 0;
  std::uint64_t refutations = 0;
  std::uint64_t pairs = 0;  // (failure set, source) pairs in scope
};

inline constexpr int kCertificateVersion = 1;

struct UnsatCertificate {
  int version = kCertificateVersion;
  Graph graph;
  NodeId target = kNoNode;
  bool source_matching = false;
  std::optional<NodeId> source;
  Pruning pruning = Pruning::None;
  std::string family_name;
  std::vector<FailureSet> family;
  SynthesisStats stats;
  bool complete = true;  // false when refutations were truncated
  std::vector<Refutation> refutations;
};

struct SynthesisResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<PatternTable> pattern;
  std::optional<UnsatCertificate> certificate;
  SynthesisStats stats;
  SynthesisConfig config;
  std::string family_name;
};

SynthesisResult synthesize(const Graph& g, NodeId tgt, const FailureFamily& family,
                           const SynthesisConfig& config = {});
SynthesisResult synthesize_k(const Graph& g, NodeId tgt, int k, const SynthesisConfig& config = {});

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Re-executes every refutation; throws CertificateError on version mismatch or
// an empty certificate.
bool replay(const UnsatCertificate& cert);

// Whether the partial in-port -> out-port map (by port position, -1 = unset)
// can be completed so that every port in `required` lies on one cycle.
bool orbit_extendable(const std::vector<int>& image, PortMask required);

struct SweepConfig {
  int nodes = 7;
  int max_failures = 4;
  Pruning pruning = Pruning::Orbit;
  std::uint64_t node_budget = 2'000'000;
  bool stop_at_first_unsat = true;
  std::size_t max_instances = 0;  // 0 = no limit
};

struct SweepEntry {
  Graph graph;
  NodeId target = kNoNode;
  Verdict verdict = Verdict::Inconclusive;
  SynthesisStats stats;
};

struct SweepResult {
  std::size_t planar_candidates = 0;
  std::size_t skipped_constructible = 0;
  std::vector<SweepEntry> entries;
  std::optional<std::size_t> witness;
  std::optional<UnsatCertificate> certificate;
};

// Searches connected planar graphs (no K5 / K3,3 minor) on cfg.nodes nodes for
// a target with no pattern surviving all failure sets of size <= max_failures.
// Instances solved by the outerplanar or target-removal constructions are skipped.
SweepResult planar_sweep(const SweepConfig& cfg);

}  // namespace failover
