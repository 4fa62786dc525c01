#include "failover/minor.hpp"

#include <algorithm>
#include <deque>

namespace failover {

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, edges);
}

Graph complete_bipartite(int a, int b) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < a; ++u) {
    for (NodeId v = a; v < a + b; ++v) edges.push_back({u, v});
  }
  return Graph(a + b, edges);
}

namespace {

class BranchSearch {
 public:
  BranchSearch(const Graph& g, const Graph& h) : g_(g), h_(h), k_(h.node_count()) {
    std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
    for (NodeId s = 0; s < g.node_count(); ++s) {
      if (seen[s]) continue;
      std::deque<NodeId> queue{s};
      seen[s] = true;
      while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        order_.push_back(v);
        for (NodeId w : g.neighbors(v)) {
          if (!seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
        }
      }
    }
    label_.assign(static_cast<std::size_t>(g.node_count()), kNoNode);
    block_to_h_.assign(static_cast<std::size_t>(k_), kNoNode);
    h_used_.assign(static_cast<std::size_t>(k_), false);
  }

  std::optional<MinorModel> run() {
    if (k_ == 0) return MinorModel{std::vector<NodeId>(static_cast<std::size_t>(g_.node_count()), kNoNode)};
    if (assign(0, 0)) {
      MinorModel m;
      m.branch.resize(label_.size(), kNoNode);
      for (std::size_t v = 0; v < label_.size(); ++v) {
        if (label_[v] != kNoNode) m.branch[v] = block_to_h_[label_[v]];
      }
      return m;
    }
    return std::nullopt;
  }

 private:
  bool assign(std::size_t at, int blocks) {
    const int remaining = static_cast<int>(order_.size() - at);
    if (remaining < k_ - blocks) return false;
    if (at == order_.size()) return blocks == k_ && leaf();
    const NodeId v = order_[at];
    for (int b = 0; b <= std::min(blocks, k_ - 1); ++b) {
      label_[v] = b;
      if (assign(at + 1, std::max(blocks, b + 1))) return true;
    }
    label_[v] = kNoNode;
    return assign(at + 1, blocks);
  }

  bool leaf() {
    // Every branch set must induce a connected subgraph.
    for (int b = 0; b < k_; ++b) {
      NodeId seed = kNoNode;
      int size = 0;
      for (std::size_t v = 0; v < label_.size(); ++v) {
        if (label_[v] == b) {
          ++size;
          if (seed == kNoNode) seed = static_cast<NodeId>(v);
        }
      }
      std::vector<NodeId> stack{seed};
      std::vector<bool> seen(label_.size(), false);
      seen[seed] = true;
      int reached = 0;
      while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++reached;
        for (NodeId w : g_.neighbors(v)) {
          if (label_[w] == b && !seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
      if (reached != size) return false;
    }
    quotient_.assign(static_cast<std::size_t>(k_), std::vector<bool>(static_cast<std::size_t>(k_), false));
    for (const Edge& e : g_.edges()) {
      NodeId a = label_[e.u], b = label_[e.v];
      if (a != kNoNode && b != kNoNode && a != b) quotient_[a][b] = quotient_[b][a] = true;
    }
    return embed(0);
  }

  // Maps blocks to h-nodes so that every h edge lands on a quotient edge.
  bool embed(int block) {
    if (block == k_) return true;
    for (NodeId x = 0; x < k_; ++x) {
      if (h_used_[x]) continue;
      bool ok = true;
      for (int prev = 0; prev < block && ok; ++prev) {
        if (h_.adjacent(x, block_to_h_[prev]) && !quotient_[block][prev]) ok = false;
      }
      if (!ok) continue;
      h_used_[x] = true;
      block_to_h_[block] = x;
      if (embed(block + 1)) return true;
      h_used_[x] = false;
    }
    block_to_h_[block] = kNoNode;
    return false;
  }

  const Graph& g_;
  const Graph& h_;
  const int k_;
  std::vector<NodeId> order_;
  std::vector<NodeId> label_;
  std::vector<NodeId> block_to_h_;
  std::vector<bool> h_used_;
  std::vector<std::vector<bool>> quotient_;
};

}  // namespace

std::optional<MinorModel> find_minor(const Graph& g, const Graph& h, MinorLimits limits) {
  if (g.node_count() > limits.max_nodes) {
    throw LimitError("minor search is limited to " + std::to_string(limits.max_nodes) + " nodes");
  }
  if (h.node_count() > g.node_count() || h.edge_count() > g.edge_count()) return std::nullopt;
  return BranchSearch(g, h).run();
}

bool has_minor(const Graph& g, const Graph& h, MinorLimits limits) {
  return find_minor(g, h, limits).has_value();
}

}  // namespace failover
