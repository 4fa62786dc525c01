#include "failover/resilience.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>

namespace failover {

namespace {

bool bit(PortMask m, int k) { return (m >> k) & 1U; }

// BFS from `from` to `to` over nodes not marked blocked; returns the node path or empty.
std::vector<NodeId> blocked_path(const Graph& g, NodeId from, NodeId to,
                                 const std::vector<bool>& blocked) {
  if (blocked[from]) return {};
  std::vector<NodeId> parent(static_cast<std::size_t>(g.node_count()), kNoNode);
  std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
  std::deque<NodeId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == to) {
      std::vector<NodeId> path;
      for (NodeId x = to; x != kNoNode; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (NodeId w : g.neighbors(v)) {
      if (seen[w] || blocked[w]) continue;
      seen[w] = true;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  return {};
}

bool same_orbit(const std::vector<std::vector<NodeId>>& orbits, const std::vector<NodeId>& members) {
  if (members.empty()) return true;
  for (const auto& o : orbits) {
    if (std::find(o.begin(), o.end(), members.front()) == o.end()) continue;
    return std::all_of(members.begin(), members.end(), [&](NodeId x) {
      return std::find(o.begin(), o.end(), x) != o.end();
    });
  }
  return false;
}

}  // namespace

PortMask relevant_mask(const Graph& g, NodeId i, PortMask failed_at_i, NodeId tgt, NodeId avoid) {
  g.check_node(i);
  g.check_node(tgt);
  if (i == tgt) throw GraphError("relevance is undefined at the target");
  const auto nb = g.neighbors(i);
  std::vector<bool> blocked(static_cast<std::size_t>(g.node_count()), false);
  blocked[i] = true;
  if (avoid != kNoNode) blocked[avoid] = true;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (!bit(failed_at_i, static_cast<int>(k))) blocked[nb[k]] = true;
  }
  PortMask out = 0;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (bit(failed_at_i, static_cast<int>(k)) || nb[k] == avoid) continue;
    if (nb[k] == tgt) {
      out |= PortMask{1} << k;
      continue;
    }
    blocked[nb[k]] = false;
    if (!blocked_path(g, nb[k], tgt, blocked).empty()) out |= PortMask{1} << k;
    blocked[nb[k]] = true;
  }
  return out;
}

std::vector<NodeId> relevant_neighbors(const Graph& g, const FailureSet& f, NodeId i, NodeId tgt) {
  return neighbors_in_mask(g, i, relevant_mask(g, i, local_mask(g, f, i), tgt));
}

bool disjoint_relay(const Graph& g, NodeId i, NodeId from, NodeId to, NodeId src, NodeId tgt) {
  if (from == tgt || src == i || src == to || src == tgt) return false;
  const int n = g.node_count();
  std::vector<bool> on_path(static_cast<std::size_t>(n), false);
  on_path[i] = true;  // excluded from both paths
  std::vector<bool> forbidden(static_cast<std::size_t>(n), false);
  forbidden[i] = forbidden[to] = forbidden[tgt] = true;

  auto tail_exists = [&]() {
    if (to == tgt) return true;
    return !blocked_path(g, to, tgt, on_path).empty();
  };
  // Depth-first over simple paths src -> from avoiding i, to and tgt.
  std::function<bool(NodeId)> extend = [&](NodeId v) -> bool {
    if (v == from) return tail_exists();
    for (NodeId w : g.neighbors(v)) {
      if (on_path[w] || forbidden[w]) continue;
      on_path[w] = true;
      if (extend(w)) return true;
      on_path[w] = false;
    }
    return false;
  };
  if (forbidden[src]) return false;
  on_path[src] = true;
  return extend(src);
}

OrbitCheck check_orbit_condition(const Graph& g, const FailureSet& f, const Pattern& p, NodeId i,
                                 NodeId tgt, std::optional<NodeId> src, OrbitVariant variant) {
  OrbitCheck out;
  const PortMask mask = local_mask(g, f, i);
  const NodeId key_src = src.value_or(kNoNode);
  auto load_orbits = [&]() {
    OrbitResult o = orbits(p, g, i, mask, p.source_matching() ? key_src : kNoNode);
    if (o.status != EvalStatus::Ok) {
      out.status = OrbitCheck::Status::NotApplicable;
      out.reason = "pattern is not total at this node";
      return false;
    }
    out.orbits = std::move(o.orbits);
    return true;
  };

  switch (variant) {
    case OrbitVariant::Plain: {
      out.relevant = neighbors_in_mask(g, i, relevant_mask(g, i, mask, tgt));
      if (out.relevant.size() < 2) {
        out.reason = "fewer than two relevant neighbors";
        return out;
      }
      break;
    }
    case OrbitVariant::SourceAdjacent: {
      if (!src) throw PatternError("source-adjacent orbit check needs a source");
      auto e = g.edge_index(*src, i);
      if (*src == i || (e && !f.contains(*e))) {
        out.reason = "source is the node or one of its live neighbors";
        return out;
      }
      out.relevant = neighbors_in_mask(g, i, relevant_mask(g, i, mask, tgt, *src));
      int anchors = 0;
      for (NodeId v : out.relevant) {
        if (v != tgt && g.adjacent(v, *src)) ++anchors;
      }
      if (anchors < 2) {
        out.reason = "source is adjacent to fewer than two relevant neighbors";
        return out;
      }
      break;
    }
    case OrbitVariant::DisjointPaths: {
      if (!src) throw PatternError("disjoint-path orbit check needs a source");
      auto live = neighbors_in_mask(g, i, ~mask & full_mask(g.degree(i)));
      if (*src == i || live.size() != 2) {
        out.reason = "not a degree-two view";
        return out;
      }
      std::vector<std::pair<NodeId, NodeId>> forced;
      for (auto [a, b] : {std::pair{live[0], live[1]}, std::pair{live[1], live[0]}}) {
        if (disjoint_relay(g, i, a, b, *src, tgt)) forced.emplace_back(a, b);
      }
      if (forced.empty()) {
        out.reason = "no node-disjoint relay through this node";
        return out;
      }
      out.relevant = live;
      if (!load_orbits()) return out;
      out.status = OrbitCheck::Status::Ok;
      for (auto [a, b] : forced) {
        EvalResult r = eval(p, g, i, a, mask, p.source_matching() ? key_src : kNoNode);
        if (!r.ok() || r.out != b) {
          out.status = OrbitCheck::Status::Violation;
          out.reason = "packet from " + std::to_string(a) + " must continue to " + std::to_string(b);
        }
      }
      return out;
    }
  }
  if (!load_orbits()) return out;
  if (same_orbit(out.orbits, out.relevant)) {
    out.status = OrbitCheck::Status::Ok;
  } else {
    out.status = OrbitCheck::Status::Violation;
    out.reason = "relevant neighbors split across orbits";
  }
  return out;
}

FailureSet orbit_witness(const Graph& g, PortMask failed_at_i, NodeId i, NodeId tgt, NodeId b) {
  const auto nb = g.neighbors(i);
  std::vector<bool> blocked(static_cast<std::size_t>(g.node_count()), false);
  blocked[i] = true;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (!bit(failed_at_i, static_cast<int>(k)) && nb[k] != b) blocked[nb[k]] = true;
  }
  auto path = b == tgt ? std::vector<NodeId>{tgt} : blocked_path(g, b, tgt, blocked);
  if (path.empty()) throw GraphError("neighbor " + std::to_string(b) + " is not relevant");
  std::vector<bool> keep(g.edge_count(), false);
  auto inc = g.incident_edges(i);
  for (std::size_t k = 0; k < inc.size(); ++k) {
    if (!bit(failed_at_i, static_cast<int>(k))) keep[inc[k]] = true;
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) keep[g.require_edge(path[k], path[k + 1])] = true;
  FailureSet f(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!keep[e]) f.insert(e);
  }
  return f;
}

std::vector<FailureSet> orbit_witness_family(const Graph& g, PortMask failed_at_i, NodeId i,
                                             NodeId tgt) {
  std::vector<FailureSet> out;
  for (NodeId b : neighbors_in_mask(g, i, relevant_mask(g, i, failed_at_i, tgt))) {
    out.push_back(orbit_witness(g, failed_at_i, i, tgt, b));
  }
  return out;
}

std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("FAILOVER_LAB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return std::uint64_t{1} << 24;
}

std::vector<FailureSet> subsets_up_to(std::size_t edge_count, int k) {
  std::vector<FailureSet> out;
  const int m = static_cast<int>(edge_count);
  for (int size = 0; size <= std::min(k, m); ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int q = 0; q < size; ++q) idx[q] = q;
    while (true) {
      FailureSet f(edge_count);
      for (int e : idx) f.insert(static_cast<std::size_t>(e));
      out.push_back(std::move(f));
      int q = size - 1;
      while (q >= 0 && idx[q] == m - size + q) --q;
      if (q < 0) break;
      ++idx[q];
      for (int r = q + 1; r < size; ++r) idx[r] = idx[r - 1] + 1;
    }
  }
  return out;
}

FailureFamily FailureFamily::explicit_sets(std::size_t edge_count, std::vector<FailureSet> sets,
                                           std::string name) {
  for (const auto& f : sets) {
    if (f.edge_count() != edge_count) throw GraphError("failure set belongs to a different graph");
  }
  FailureFamily fam;
  fam.kind_ = Kind::Explicit;
  fam.edge_count_ = edge_count;
  fam.sets_ = std::move(sets);
  fam.name_ = std::move(name);
  return fam;
}

FailureFamily FailureFamily::all_subsets(const Graph& g, std::uint64_t budget) {
  const std::size_t m = g.edge_count();
  if (m > 22) throw LimitError("all-subsets enumeration is limited to 22 edges");
  if ((std::uint64_t{1} << m) > budget) {
    throw LimitError("2^" + std::to_string(m) + " failure sets exceed the enumeration budget");
  }
  FailureFamily fam;
  fam.kind_ = Kind::AllSubsets;
  fam.edge_count_ = m;
  fam.k_ = static_cast<int>(m);
  fam.name_ = "all";
  return fam;
}

FailureFamily FailureFamily::up_to(const Graph& g, int k, std::uint64_t budget) {
  if (k < 0) throw GraphError("negative failure bound");
  const std::size_t m = g.edge_count();
  std::uint64_t count = 0;
  std::uint64_t binom = 1;
  for (int j = 0; j <= k && j <= static_cast<int>(m); ++j) {
    if (j > 0) binom = binom * (m - static_cast<std::uint64_t>(j) + 1) / static_cast<std::uint64_t>(j);
    count += binom;
    if (count > budget) throw LimitError("failure sets up to size " + std::to_string(k) +
                                         " exceed the enumeration budget");
  }
  FailureFamily fam;
  fam.kind_ = Kind::UpToK;
  fam.edge_count_ = m;
  fam.k_ = k;
  fam.name_ = "k" + std::to_string(k);
  fam.sets_ = subsets_up_to(m, k);
  return fam;
}

std::size_t FailureFamily::size() const {
  if (kind_ == Kind::AllSubsets) return std::size_t{1} << edge_count_;
  return sets_.size();
}

FailureSet FailureFamily::at(std::size_t index) const {
  if (kind_ == Kind::AllSubsets) return FailureSet::from_mask(edge_count_, index);
  return sets_.at(index);
}

std::vector<FailureSet> FailureFamily::materialize() const {
  if (kind_ != Kind::AllSubsets) return sets_;
  std::vector<FailureSet> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(at(k));
  return out;
}

std::string to_string(ResilienceReport::Mode m) {
  switch (m) {
    case ResilienceReport::Mode::Perfect: return "perfect";
    case ResilienceReport::Mode::KResilient: return "k-resilient";
    case ResilienceReport::Mode::Family: return "family";
  }
  return "?";
}

namespace {

struct SetOutcome {
  std::uint64_t traces = 0;
  std::optional<Counterexample> failure;
};

SetOutcome check_set(const Graph& g, const Pattern& p, NodeId tgt, const FailureSet& f,
                     std::size_t index, std::optional<NodeId> src) {
  SetOutcome out;
  const auto label = components(g, f);
  auto run = [&](NodeId s) {
    ++out.traces;
    RouteTrace t = route(g, f, p, s, tgt);
    if (!t.delivered()) out.failure = Counterexample{f, index, s, std::move(t)};
  };
  if (src) {
    if (label[*src] == label[tgt]) run(*src);
    return out;
  }
  for (NodeId s = 0; s < g.node_count() && !out.failure; ++s) {
    if (s != tgt && label[s] == label[tgt]) run(s);
  }
  return out;
}

}  // namespace

ResilienceReport verify(const Graph& g, const Pattern& p, NodeId tgt, const FailureFamily& family,
                        std::optional<NodeId> src, VerifyOptions options) {
  g.check_node(tgt);
  if (family.edge_count() != g.edge_count()) throw GraphError("family belongs to a different graph");
  if (!src) src = p.fixed_source();
  if (src) {
    g.check_node(*src);
    if (*src == tgt) throw GraphError("source equals target");
  }

  ResilienceReport report;
  switch (family.kind()) {
    case FailureFamily::Kind::AllSubsets: report.mode = ResilienceReport::Mode::Perfect; break;
    case FailureFamily::Kind::UpToK:
      report.mode = ResilienceReport::Mode::KResilient;
      report.k = family.k();
      break;
    case FailureFamily::Kind::Explicit: report.mode = ResilienceReport::Mode::Family; break;
  }

  const std::size_t total = family.size();
  const unsigned jobs = std::max(1U, options.jobs);
  if (jobs == 1 || total < 256) {
    for (std::size_t k = 0; k < total; ++k) {
      SetOutcome o = check_set(g, p, tgt, family.at(k), k, src);
      report.stats.failure_sets += 1;
      report.stats.traces += o.traces;
      if (o.failure) {
        report.verdict = false;
        report.counterexample = std::move(o.failure);
        return report;
      }
    }
    return report;
  }

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> chunk_traces(chunks, 0);
  std::vector<std::uint64_t> chunk_sets(chunks, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_failure{total};
  std::mutex mu;
  std::optional<Counterexample> best;

  auto worker = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks || c * kChunk > first_failure.load()) return;
      for (std::size_t k = c * kChunk; k < std::min(total, (c + 1) * kChunk); ++k) {
        SetOutcome o = check_set(g, p, tgt, family.at(k), k, src);
        chunk_sets[c] += 1;
        chunk_traces[c] += o.traces;
        if (o.failure) {
          std::lock_guard<std::mutex> lock(mu);
          if (k < first_failure.load()) {
            first_failure = k;
            best = std::move(o.failure);
          }
          break;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::size_t stop = first_failure.load();
  for (std::size_t c = 0; c < chunks && c * kChunk <= stop; ++c) {
    report.stats.failure_sets += chunk_sets[c];
    report.stats.traces += chunk_traces[c];
  }
  if (best) {
    report.verdict = false;
    report.counterexample = std::move(best);
  }
  return report;
}

}  // namespace failover
