#include "failover/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <unordered_map>

#include "failover/embedding.hpp"
#include "failover/graph_enum.hpp"
#include "failover/minor.hpp"

namespace failover {

std::string to_string(Pruning p) {
  switch (p) {
    case Pruning::None: return "none";
    case Pruning::Orbit: return "orbit";
    case Pruning::OrbitDegree2: return "orbit+degree2";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Found: return "Found";
    case Verdict::Unsat: return "Unsat";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Pruning parse_pruning(const std::string& s) {
  if (s == "none") return Pruning::None;
  if (s == "orbit") return Pruning::Orbit;
  if (s == "orbit+degree2" || s == "degree2") return Pruning::OrbitDegree2;
  throw std::invalid_argument("unknown pruning level: " + s);
}

bool orbit_extendable(const std::vector<int>& image, PortMask required) {
  const int d = static_cast<int>(image.size());
  PortMask closure = required;
  std::vector<int> stack;
  for (int p = 0; p < d; ++p) {
    if ((required >> p) & 1U) stack.push_back(p);
  }
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    int y = image[x];
    if (y >= 0 && !((closure >> y) & 1U)) {
      closure |= PortMask{1} << y;
      stack.push_back(y);
    }
  }
  // Inside the eventual cycle every port has exactly one predecessor.
  std::vector<int> preds(static_cast<std::size_t>(d), 0);
  for (int x = 0; x < d; ++x) {
    if (((closure >> x) & 1U) && image[x] >= 0 && ++preds[image[x]] > 1) return false;
  }
  // A closed cycle inside the closure must be the whole closure.
  for (int x = 0; x < d; ++x) {
    if (!((closure >> x) & 1U)) continue;
    int cur = image[x];
    int len = 1;
    while (cur >= 0 && cur != x && len <= d) {
      cur = image[cur];
      ++len;
    }
    if (cur == x) return len == std::popcount(closure);
  }
  return true;
}

namespace {

struct KeyHash {
  std::size_t operator()(const TableKey& k) const {
    std::uint64_t h = k.failed * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.node)) << 1) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.in)) << 17) + (h << 6) + (h >> 2);
    h ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.src)) << 33) + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct Pair {
  std::size_t family_index = 0;
  NodeId source = kNoNode;
};

enum class SearchStatus { Found, Unsat, Budget };

// Conflict-driven search over table entries. Each entry is a variable whose
// domain is the live out-ports of its node view. Constraints are nogoods
// (sets of entry assignments that cannot hold together): failing traces and
// orbit violations are generated lazily and recorded as refutations; learned
// nogoods come from 1-UIP conflict analysis and are implied by those.
class Search {
 public:
  Search(const Graph& g, NodeId tgt, std::vector<FailureSet> family, const SynthesisConfig& cfg)
      : g_(g), tgt_(tgt), family_(std::move(family)), cfg_(cfg) {
    offset_.assign(static_cast<std::size_t>(g.node_count()) + 1, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      offset_[v + 1] = offset_[v] + static_cast<std::size_t>(g.degree(v)) + 1;
    }
    seen_.assign(offset_.back(), -1);
    masks_.reserve(family_.size());
    for (std::size_t k = 0; k < family_.size(); ++k) {
      std::vector<PortMask> m(static_cast<std::size_t>(g.node_count()));
      for (NodeId v = 0; v < g.node_count(); ++v) m[v] = local_mask(g, family_[k], v);
      masks_.push_back(std::move(m));
      const auto label = components(g, family_[k]);
      auto add = [&](NodeId s) {
        if (s != tgt && label[s] == label[tgt]) pairs_.push_back({k, s});
      };
      if (cfg.source) {
        add(*cfg.source);
      } else {
        for (NodeId s = 0; s < g.node_count(); ++s) add(s);
      }
    }
    stats_.pairs = pairs_.size();
    state_.assign(pairs_.size(), PairState{});
    for (std::size_t p = 0; p < pairs_.size(); ++p) dirty_.push_back(static_cast<int>(p));
    level_start_.push_back(0);
  }

  SearchStatus run() {
    while (true) {
      if (!propagate()) {
        if (!resolve()) return SearchStatus::Unsat;
        continue;
      }
      const std::vector<int> pending = pending_keys();
      if (!dirty_.empty()) continue;
      if (pending.empty()) return SearchStatus::Found;
      if (!prune_domains(pending)) {
        if (!resolve()) return SearchStatus::Unsat;
        continue;
      }
      int best = -1;
      bool implied = false;
      for (int k : pending) {
        const Entry& e = entries_[k];
        if (e.value != kNoNode) {
          implied = true;  // forced by pruning; propagate first
          break;
        }
        if (e.remaining == 1) {
          assign(k, first_allowed(k));
          implied = true;
          break;
        }
        if (best < 0 || e.remaining < entries_[best].remaining) best = k;
      }
      if (implied) continue;
      if (++stats_.search_nodes > cfg_.node_budget) return SearchStatus::Budget;
      level_start_.push_back(trail_.size());
      ++level_;
      assign(best, first_allowed(best));
    }
  }

  const SynthesisStats& stats() const { return stats_; }
  std::vector<Refutation>& refutations() { return refutations_; }
  bool truncated() const { return truncated_; }

  PatternTable table() const {
    PatternTable t(cfg_.source_matching);
    for (const Entry& e : entries_) {
      if (e.value != kNoNode) t.set(g_, e.key, e.value);
    }
    return t;
  }

 private:
  struct Lit {
    int key = 0;
    NodeId out = kNoNode;
  };

  struct Nogood {
    std::vector<Lit> lits;
    std::size_t w0 = 0;
    std::size_t w1 = 0;
  };

  struct Entry {
    TableKey key;
    std::vector<NodeId> domain;    // live out-ports in branch order
    std::vector<int> excluded_by;  // nogood id per domain slot, -1 = allowed
    int remaining = 0;
    NodeId value = kNoNode;
    int level = -1;
    std::vector<int> watchers;
  };

  struct Event {
    int key = 0;
    int slot = -1;  // -1 = assignment, else the excluded domain slot
  };

  struct PairState {
    bool dirty = true;
    bool delivered = false;
    int blocked = -1;
    int dep = 0;  // highest level among the entries the walk used
  };

  enum class SimStatus { Delivered, Failed, Missing };

  // ---- entries --------------------------------------------------------

  int key_id(const TableKey& key) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    Entry e;
    e.key = key;
    e.domain = branch_order(key.node, key.failed);
    e.excluded_by.assign(e.domain.size(), -1);
    e.remaining = static_cast<int>(e.domain.size());
    entries_.push_back(std::move(e));
    ++stats_.entries_branched;
    const int id = static_cast<int>(entries_.size()) - 1;
    ids_.emplace(key, id);
    return id;
  }

  std::optional<int> find_key(const TableKey& key) const {
    auto it = ids_.find(key);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  int slot_of(const Entry& e, NodeId out) const {
    for (std::size_t s = 0; s < e.domain.size(); ++s) {
      if (e.domain[s] == out) return static_cast<int>(s);
    }
    return -1;
  }

  NodeId first_allowed(int k) const {
    const Entry& e = entries_[k];
    for (std::size_t s = 0; s < e.domain.size(); ++s) {
      if (e.excluded_by[s] < 0) return e.domain[s];
    }
    return kNoNode;
  }

  bool is_true(const Lit& l) const { return entries_[l.key].value == l.out; }
  bool is_false(const Lit& l) const {
    const NodeId v = entries_[l.key].value;
    return v != kNoNode && v != l.out;
  }

  std::vector<NodeId> branch_order(NodeId v, PortMask failed) const {
    std::vector<NodeId> out;
    if (g_.has_rotation()) {
      for (NodeId u : g_.rotation(v)) {
        if (!((failed >> g_.port_index(v, u)) & 1U)) out.push_back(u);
      }
    } else {
      out = neighbors_in_mask(g_, v, ~failed & full_mask(g_.degree(v)));
    }
    return out;
  }

  // ---- assignments and exclusions ---------------------------------------

  void assign(int k, NodeId out) {
    Entry& e = entries_[k];
    e.value = out;
    e.level = level_;
    trail_.push_back({k, -1});
  }

  // Returns false on conflict (conflict_ is set).
  bool exclude(int k, int slot, int ng, bool permanent) {
    Entry& e = entries_[k];
    if (e.excluded_by[slot] >= 0) return true;
    if (e.value != kNoNode) {
      if (e.value != e.domain[slot]) return true;
      conflict_ = nogoods_[ng].lits;
      return false;
    }
    e.excluded_by[slot] = ng;
    --e.remaining;
    if (!permanent) trail_.push_back({k, slot});
    if (e.remaining == 0) {
      conflict_.clear();
      for (std::size_t s = 0; s < e.domain.size(); ++s) {
        for (const Lit& l : nogoods_[e.excluded_by[s]].lits) {
          if (l.key != k) conflict_.push_back(l);
        }
      }
      return false;
    }
    if (e.remaining == 1) assign(k, first_allowed(k));
    return true;
  }

  // Adds a nogood and applies its immediate consequence. Returns false on conflict.
  bool add_nogood(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end(), [](const Lit& a, const Lit& b) {
      return a.key != b.key ? a.key < b.key : a.out < b.out;
    });
    const int id = static_cast<int>(nogoods_.size());
    nogoods_.push_back({lits, 0, 0});
    if (lits.size() == 1) {
      const Lit& l = lits.front();
      if (is_true(l)) {
        conflict_ = lits;
        return false;
      }
      return exclude(l.key, slot_of(entries_[l.key], l.out), id, true);
    }
    std::vector<std::size_t> open;  // not true
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (!is_true(lits[i])) open.push_back(i);
    }
    auto latest_true = [&](std::size_t skip) {
      std::size_t best = lits.size();
      for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i == skip || !is_true(lits[i])) continue;
        if (best == lits.size() || entries_[lits[i].key].level > entries_[lits[best].key].level) best = i;
      }
      return best;
    };
    Nogood& n = nogoods_.back();
    if (open.size() >= 2) {
      n.w0 = open[0];
      n.w1 = open[1];
    } else if (open.size() == 1) {
      n.w0 = open[0];
      n.w1 = latest_true(n.w0);
    } else {
      n.w0 = latest_true(lits.size());
      n.w1 = latest_true(n.w0);
    }
    entries_[lits[n.w0].key].watchers.push_back(id);
    entries_[lits[n.w1].key].watchers.push_back(id);
    if (open.empty()) {
      conflict_ = lits;
      return false;
    }
    if (open.size() == 1 && !is_false(lits[open[0]])) {
      const Lit& l = lits[open[0]];
      return exclude(l.key, slot_of(entries_[l.key], l.out), id, false);
    }
    return true;
  }

  bool add_refutation(Refutation r, std::vector<Lit> lits) {
    std::vector<std::pair<int, NodeId>> sig;
    for (const Lit& l : lits) sig.emplace_back(l.key, l.out);
    std::sort(sig.begin(), sig.end());
    if (!known_.insert(std::move(sig)).second) return add_nogood(std::move(lits));
    ++stats_.refutations;
    if (refutations_.size() >= cfg_.max_refutations) {
      truncated_ = true;
    } else {
      refutations_.push_back(std::move(r));
    }
    return add_nogood(std::move(lits));
  }

  // Watch processing after entry k took a value. Returns false on conflict.
  bool on_assigned(int k) {
    const NodeId v = entries_[k].value;
    std::vector<int> list = std::move(entries_[k].watchers);
    entries_[k].watchers.clear();
    bool ok = true;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const int id = list[i];
      if (!ok) {
        entries_[k].watchers.push_back(id);
        continue;
      }
      Nogood& n = nogoods_[id];
      const bool first = n.lits[n.w0].key == k;
      std::size_t& wk = first ? n.w0 : n.w1;
      const std::size_t other = first ? n.w1 : n.w0;
      if (n.lits[wk].out != v) {
        entries_[k].watchers.push_back(id);
        continue;
      }
      bool moved = false;
      for (std::size_t j = 0; j < n.lits.size(); ++j) {
        if (j == n.w0 || j == n.w1 || is_true(n.lits[j])) continue;
        wk = j;
        entries_[n.lits[j].key].watchers.push_back(id);
        moved = true;
        break;
      }
      if (moved) continue;
      entries_[k].watchers.push_back(id);
      const Lit o = n.lits[other];
      if (is_false(o)) continue;
      if (is_true(o)) {
        conflict_ = n.lits;
        ok = false;
        continue;
      }
      ok = exclude(o.key, slot_of(entries_[o.key], o.out), id, false);
    }
    return ok;
  }

  // ---- orbit pruning ----------------------------------------------------

  PortMask plain_relevant(NodeId i, PortMask failed) {
    const std::uint64_t id = (static_cast<std::uint64_t>(i) << 48) ^ failed;
    auto it = plain_cache_.find(id);
    if (it != plain_cache_.end()) return it->second;
    PortMask r = relevant_mask(g_, i, failed, tgt_);
    if (std::popcount(r) < 2) r = 0;
    plain_cache_.emplace(id, r);
    return r;
  }

  PortMask source_relevant(NodeId i, PortMask failed, NodeId src) {
    TableKey id{i, failed, kNoNode, src};
    auto it = source_cache_.find(id);
    if (it != source_cache_.end()) return it->second;
    PortMask r = 0;
    const int sp = g_.port_index(i, src);
    const bool src_live = sp >= 0 && !((failed >> sp) & 1U);
    if (src != i && !src_live) {
      r = relevant_mask(g_, i, failed, tgt_, src);
      int anchors = 0;
      for (NodeId v : neighbors_in_mask(g_, i, r)) {
        if (v != tgt_ && g_.adjacent(v, src)) ++anchors;
      }
      if (anchors < 2) r = 0;
    }
    source_cache_.emplace(id, r);
    return r;
  }

  // Forced successor per in-port position, -1 = unconstrained.
  const std::vector<int>& forced(NodeId i, PortMask failed, NodeId src) {
    TableKey id{i, failed, kNoNode, src};
    auto it = forced_cache_.find(id);
    if (it != forced_cache_.end()) return it->second;
    std::vector<int> f(static_cast<std::size_t>(g_.degree(i)), -1);
    auto live = neighbors_in_mask(g_, i, ~failed & full_mask(g_.degree(i)));
    if (src != i && live.size() == 2) {
      for (auto [a, b] : {std::pair{live[0], live[1]}, std::pair{live[1], live[0]}}) {
        if (disjoint_relay(g_, i, a, b, src, tgt_)) f[g_.port_index(i, a)] = g_.port_index(i, b);
      }
    }
    return forced_cache_.emplace(id, std::move(f)).first->second;
  }

  // Assigned entries at the key's node view (excluding the key itself).
  std::vector<Lit> view_entries(const TableKey& key, std::vector<int>& image) const {
    std::vector<Lit> out;
    const auto nb = g_.neighbors(key.node);
    image.assign(nb.size(), -1);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if ((key.failed >> p) & 1U || nb[p] == key.in) continue;
      auto id = find_key(TableKey{key.node, key.failed, nb[p], key.src});
      if (!id || entries_[*id].value == kNoNode) continue;
      image[p] = g_.port_index(key.node, entries_[*id].value);
      out.push_back({*id, entries_[*id].value});
    }
    return out;
  }

  // Checks the entry k := out against the orbit lemmas; on violation adds the
  // refutation and returns false via `ok` when that produced a conflict.
  bool orbit_ok(int k, NodeId out, bool& ok) {
    ok = true;
    const TableKey key = entries_[k].key;
    if (cfg_.pruning == Pruning::None || key.in == kNoNode) return true;
    const int in_pos = g_.port_index(key.node, key.in);
    const int out_pos = g_.port_index(key.node, out);
    Refutation r;
    r.kind = Refutation::Kind::Orbit;
    std::vector<Lit> lits;
    if (cfg_.source_matching && cfg_.pruning == Pruning::OrbitDegree2) {
      const auto& f = forced(key.node, key.failed, key.src);
      if (f[in_pos] >= 0 && f[in_pos] != out_pos) {
        r.variant = OrbitVariant::DisjointPaths;
        lits.push_back({k, out});
      }
    }
    if (lits.empty()) {
      const PortMask required = cfg_.source_matching ? source_relevant(key.node, key.failed, key.src)
                                                     : plain_relevant(key.node, key.failed);
      if (required == 0) return true;
      std::vector<int> image;
      lits = view_entries(key, image);
      image[in_pos] = out_pos;
      if (orbit_extendable(image, required)) return true;
      r.variant = cfg_.source_matching ? OrbitVariant::SourceAdjacent : OrbitVariant::Plain;
      lits.push_back({k, out});
    }
    ++stats_.pruned;
    for (const Lit& l : lits) r.entries.push_back({entries_[l.key].key, l.out});
    std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    ok = add_refutation(std::move(r), std::move(lits));
    return false;
  }

  // Removes pruned values from the pending entries' domains. False on conflict.
  bool prune_domains(const std::vector<int>& pending) {
    if (cfg_.pruning == Pruning::None) return true;
    for (int k : pending) {
      for (std::size_t s = 0; s < entries_[k].domain.size(); ++s) {
        if (entries_[k].value != kNoNode) break;
        if (entries_[k].excluded_by[s] >= 0) continue;
        bool ok = true;
        orbit_ok(k, entries_[k].domain[s], ok);
        if (!ok) return false;
      }
    }
    return true;
  }

  // ---- pairs ------------------------------------------------------------

  struct Sim {
    SimStatus status = SimStatus::Delivered;
    int missing = -1;
    int dep = 0;
    std::vector<Lit> used;
    RouteTrace trace;
  };

  Sim simulate(const Pair& pair) {
    ++stats_.simulations;
    Sim sim;
    sim.trace.source = pair.source;
    sim.trace.target = tgt_;
    const auto& masks = masks_[pair.family_index];
    const NodeId key_src = cfg_.source_matching ? pair.source : kNoNode;
    touched_.clear();
    NodeId v = pair.source;
    NodeId in = kNoNode;
    while (true) {
      if (v == tgt_) {
        sim.trace.outcome = failover::Outcome::Delivered;
        break;
      }
      const std::size_t slot =
          offset_[v] + static_cast<std::size_t>(in == kNoNode ? 0 : g_.port_index(v, in) + 1);
      if (seen_[slot] >= 0) {
        sim.status = SimStatus::Failed;
        sim.trace.outcome = failover::Outcome::Loop;
        sim.trace.loop_index = static_cast<std::size_t>(seen_[slot]);
        break;
      }
      seen_[slot] = static_cast<long>(sim.trace.hops.size());
      touched_.push_back(slot);
      if (masks[v] == full_mask(g_.degree(v))) {
        sim.status = SimStatus::Failed;
        sim.trace.outcome = failover::Outcome::Dead;
        sim.trace.dead_reason = DeadReason::Isolated;
        break;
      }
      const int k = key_id(TableKey{v, masks[v], in, key_src});
      const Entry& e = entries_[k];
      if (e.value == kNoNode) {
        sim.status = SimStatus::Missing;
        sim.missing = k;
        break;
      }
      sim.dep = std::max(sim.dep, e.level);
      sim.used.push_back({k, e.value});
      sim.trace.hops.push_back({v, in, e.value});
      in = v;
      v = e.value;
    }
    for (std::size_t s : touched_) seen_[s] = -1;
    return sim;
  }

  void mark_dirty(int p) {
    if (state_[p].dirty) return;
    state_[p].dirty = true;
    dirty_.push_back(p);
  }

  // Runs watches, orbit checks on new assignments and dirty pairs to a fixpoint.
  bool propagate() {
    while (true) {
      if (qhead_ < trail_.size()) {
        const Event ev = trail_[qhead_++];
        if (ev.slot >= 0) continue;
        // On conflict the event is revisited if it survives the backjump.
        if (!on_assigned(ev.key)) {
          --qhead_;
          return false;
        }
        bool ok = true;
        orbit_ok(ev.key, entries_[ev.key].value, ok);
        if (!ok) {
          --qhead_;
          return false;
        }
        for (int p : blocked_on_[ev.key]) {
          if (!state_[p].dirty && state_[p].blocked == ev.key) mark_dirty(p);
        }
        blocked_on_[ev.key].clear();
        continue;
      }
      if (dirty_.empty()) return true;
      const int p = dirty_.back();
      dirty_.pop_back();
      PairState& st = state_[p];
      st.dirty = false;
      Sim sim = simulate(pairs_[p]);
      st.dep = sim.dep;
      st.delivered = sim.status == SimStatus::Delivered;
      st.blocked = -1;
      if (sim.status == SimStatus::Missing) {
        st.blocked = sim.missing;
        if (blocked_on_.size() < entries_.size()) blocked_on_.resize(entries_.size());
        blocked_on_[sim.missing].push_back(p);
      } else if (sim.status == SimStatus::Failed) {
        Refutation r;
        r.kind = Refutation::Kind::Trace;
        r.family_index = pairs_[p].family_index;
        r.source = pairs_[p].source;
        std::vector<Lit> lits = sim.used;
        std::sort(lits.begin(), lits.end(), [](const Lit& a, const Lit& b) { return a.key < b.key; });
        lits.erase(std::unique(lits.begin(), lits.end(), [](const Lit& a, const Lit& b) { return a.key == b.key; }),
                   lits.end());
        for (const Lit& l : lits) r.entries.push_back({entries_[l.key].key, l.out});
        std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
        r.trace = std::move(sim.trace);
        mark_dirty(p);  // recheck after the conflict is resolved
        if (lits.empty()) {
          conflict_.clear();
          refutations_.push_back(std::move(r));
          ++stats_.refutations;
          return false;
        }
        if (!add_refutation(std::move(r), std::move(lits))) return false;
      }
    }
  }

  std::vector<int> pending_keys() {
    std::vector<int> out;
    std::vector<char> taken(entries_.size(), 0);
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const PairState& st = state_[p];
      if (st.delivered || st.blocked < 0 || taken[st.blocked]) continue;
      if (entries_[st.blocked].value != kNoNode) {
        mark_dirty(static_cast<int>(p));
        continue;
      }
      taken[st.blocked] = 1;
      out.push_back(st.blocked);
    }
    return out;
  }

  // ---- conflicts --------------------------------------------------------

  void backjump(int level) {
    const std::size_t keep = level_start_[static_cast<std::size_t>(level) + 1];
    while (trail_.size() > keep) {
      const Event ev = trail_.back();
      trail_.pop_back();
      Entry& e = entries_[ev.key];
      if (ev.slot < 0) {
        e.value = kNoNode;
        e.level = -1;
      } else {
        e.excluded_by[ev.slot] = -1;
        ++e.remaining;
      }
    }
    level_start_.resize(static_cast<std::size_t>(level) + 1);
    level_ = level;
    qhead_ = std::min(qhead_, trail_.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (state_[p].dep > level) mark_dirty(static_cast<int>(p));
    }
  }

  // Learns from conflict_ and backjumps. False when the conflict holds at level 0.
  bool resolve() {
    ++stats_.backjumps;
    while (true) {
      int top = 0;
      for (const Lit& l : conflict_) top = std::max(top, entries_[l.key].level);
      if (top == 0) return false;
      if (top < level_) backjump(top);

      std::vector<char> seen(entries_.size(), 0);
      std::vector<Lit> learned;
      int counter = 0;
      auto add = [&](const Lit& l) {
        if (seen[l.key]) return;
        seen[l.key] = 1;
        const int lv = entries_[l.key].level;
        if (lv == 0) return;
        if (lv == level_) {
          ++counter;
        } else {
          learned.push_back(l);
        }
      };
      for (const Lit& l : conflict_) add(l);
      std::size_t idx = trail_.size();
      Lit uip;
      while (true) {
        do {
          --idx;
        } while (trail_[idx].slot >= 0 || !seen[trail_[idx].key] || entries_[trail_[idx].key].level != level_);
        const int k = trail_[idx].key;
        if (--counter == 0) {
          uip = {k, entries_[k].value};
          break;
        }
        const Entry& e = entries_[k];
        for (std::size_t s = 0; s < e.domain.size(); ++s) {
          if (e.excluded_by[s] < 0) continue;
          for (const Lit& l : nogoods_[e.excluded_by[s]].lits) {
            if (l.key != k) add(l);
          }
        }
      }
      int back = 0;
      for (const Lit& l : learned) back = std::max(back, entries_[l.key].level);
      learned.push_back(uip);
      backjump(back);
      if (add_nogood(std::move(learned))) return true;
    }
  }

  const Graph& g_;
  const NodeId tgt_;
  const std::vector<FailureSet> family_;
  const SynthesisConfig cfg_;
  std::vector<std::vector<PortMask>> masks_;
  std::vector<Pair> pairs_;
  std::vector<std::size_t> offset_;
  std::vector<long> seen_;
  std::vector<std::size_t> touched_;

  std::vector<Entry> entries_;
  std::unordered_map<TableKey, int, KeyHash> ids_;
  std::vector<Nogood> nogoods_;
  std::vector<Event> trail_;
  std::vector<std::size_t> level_start_;
  std::size_t qhead_ = 0;
  int level_ = 0;
  std::vector<Lit> conflict_;
  std::set<std::vector<std::pair<int, NodeId>>> known_;

  std::vector<PairState> state_;
  std::vector<int> dirty_;
  std::vector<std::vector<int>> blocked_on_;

  std::unordered_map<std::uint64_t, PortMask> plain_cache_;
  std::unordered_map<TableKey, PortMask, KeyHash> source_cache_;
  std::unordered_map<TableKey, std::vector<int>, KeyHash> forced_cache_;
  SynthesisStats stats_;
  std::vector<Refutation> refutations_;
  bool truncated_ = false;
};

}  // namespace

SynthesisResult synthesize(const Graph& g, NodeId tgt, const FailureFamily& family,
                           const SynthesisConfig& config) {
  g.check_node(tgt);
  if (family.edge_count() != g.edge_count()) throw GraphError("family belongs to a different graph");
  if (config.source) {
    g.check_node(*config.source);
    if (*config.source == tgt) throw GraphError("source equals target");
  }
  std::vector<FailureSet> sets = family.materialize();
  Search search(g, tgt, sets, config);
  const SearchStatus outcome = search.run();

  SynthesisResult result;
  result.config = config;
  result.family_name = family.name();
  result.stats = search.stats();
  switch (outcome) {
    case SearchStatus::Found: {
      result.verdict = Verdict::Found;
      result.pattern = search.table();
      auto check = verify(g, Pattern(*result.pattern), tgt,
                          FailureFamily::explicit_sets(g.edge_count(), sets), config.source);
      if (!check.verdict) throw std::logic_error("synthesized pattern fails its own family");
      break;
    }
    case SearchStatus::Budget:
      result.verdict = Verdict::Inconclusive;
      break;
    case SearchStatus::Unsat: {
      result.verdict = Verdict::Unsat;
      UnsatCertificate cert;
      cert.graph = g;
      cert.target = tgt;
      cert.source_matching = config.source_matching;
      cert.source = config.source;
      cert.pruning = config.pruning;
      cert.family_name = family.name();
      cert.family = std::move(sets);
      cert.stats = search.stats();
      cert.complete = !search.truncated();
      cert.refutations = std::move(search.refutations());
      result.certificate = std::move(cert);
      break;
    }
  }
  return result;
}

SynthesisResult synthesize_k(const Graph& g, NodeId tgt, int k, const SynthesisConfig& config) {
  return synthesize(g, tgt, FailureFamily::up_to(g, k), config);
}

namespace {

bool replay_orbit(const UnsatCertificate& cert, const Refutation& r) {
  const Graph& g = cert.graph;
  if (r.entries.empty()) return false;
  const TableKey& head = r.entries.front().key;
  std::vector<int> image(static_cast<std::size_t>(g.degree(head.node)), -1);
  for (const auto& e : r.entries) {
    if (e.key.node != head.node || e.key.failed != head.failed || e.key.src != head.src ||
        e.key.in == kNoNode) {
      return false;
    }
    int in = g.port_index(head.node, e.key.in);
    int out = g.port_index(head.node, e.out);
    if (in < 0 || out < 0 || ((head.failed >> in) & 1U) || ((head.failed >> out) & 1U)) return false;
    if (image[in] >= 0 && image[in] != out) return false;
    image[in] = out;
  }
  switch (r.variant) {
    case OrbitVariant::Plain: {
      if (cert.source_matching) return false;
      PortMask req = relevant_mask(g, head.node, head.failed, cert.target);
      return std::popcount(req) >= 2 && !orbit_extendable(image, req);
    }
    case OrbitVariant::SourceAdjacent: {
      if (!cert.source_matching || head.src == head.node) return false;
      const int sp = g.port_index(head.node, head.src);
      if (sp >= 0 && !((head.failed >> sp) & 1U)) return false;
      PortMask req = relevant_mask(g, head.node, head.failed, cert.target, head.src);
      int anchors = 0;
      for (NodeId v : neighbors_in_mask(g, head.node, req)) {
        if (v != cert.target && g.adjacent(v, head.src)) ++anchors;
      }
      return anchors >= 2 && !orbit_extendable(image, req);
    }
    case OrbitVariant::DisjointPaths: {
      if (!cert.source_matching || cert.pruning != Pruning::OrbitDegree2) return false;
      for (std::size_t p = 0; p < image.size(); ++p) {
        if (image[p] < 0) continue;
        NodeId a = g.neighbors(head.node)[p];
        NodeId b = g.neighbors(head.node)[image[p]];
        auto live = neighbors_in_mask(g, head.node, ~head.failed & full_mask(g.degree(head.node)));
        if (live.size() != 2 || a == b) continue;
        NodeId other = live[0] == a ? live[1] : live[0];
        if (b != other && disjoint_relay(g, head.node, a, other, head.src, cert.target)) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool replay(const UnsatCertificate& cert) {
  if (cert.version != kCertificateVersion) {
    throw CertificateError("certificate version " + std::to_string(cert.version) +
                           " is not supported (expected " + std::to_string(kCertificateVersion) + ")");
  }
  if (cert.refutations.empty()) throw CertificateError("certificate has no refutations");
  for (const Refutation& r : cert.refutations) {
    if (r.kind == Refutation::Kind::Orbit) {
      if (!replay_orbit(cert, r)) return false;
      continue;
    }
    if (r.family_index >= cert.family.size()) return false;
    PatternTable table(cert.source_matching);
    try {
      for (const auto& e : r.entries) {
        if (table.lookup(e.key)) return false;
        table.set(cert.graph, e.key, e.out);
      }
      RouteTrace t = route(cert.graph, cert.family[r.family_index], Pattern(table), r.source, cert.target);
      if (t.delivered() || !(t == r.trace)) return false;
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  return true;
}

SweepResult planar_sweep(const SweepConfig& cfg) {
  SweepResult out;
  const Graph k5 = complete_graph(5);
  const Graph k33 = complete_bipartite(3, 3);
  std::vector<Graph> candidates;
  for (Graph& g : enumerate_graphs({cfg.nodes, -1, true})) {
    if (has_minor(g, k5) || has_minor(g, k33)) continue;
    ++out.planar_candidates;
    if (find_outerplanar_rotation(g)) {
      out.skipped_constructible += static_cast<std::size_t>(g.node_count());
      continue;
    }
    candidates.push_back(std::move(g));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Graph& a, const Graph& b) {
    return a.edge_count() > b.edge_count();
  });
  SynthesisConfig sc;
  sc.pruning = cfg.pruning;
  sc.node_budget = cfg.node_budget;
  for (const Graph& g : candidates) {
    for (NodeId t = 0; t < g.node_count(); ++t) {
      Removal rest = induced_remove(g, {}, {t});
      bool constructible = true;
      const auto label = components(rest.graph, FailureSet(rest.graph.edge_count()));
      for (NodeId c = 0; c < rest.graph.node_count() && constructible; ++c) {
        if (label[c] != c) continue;
        std::vector<NodeId> others;
        for (NodeId v = 0; v < rest.graph.node_count(); ++v) {
          if (label[v] != c) others.push_back(v);
        }
        constructible = find_outerplanar_rotation(induced_remove(rest.graph, {}, others).graph).has_value();
      }
      if (constructible) {
        ++out.skipped_constructible;
        continue;
      }
      SynthesisResult r = synthesize(g, t, FailureFamily::up_to(g, cfg.max_failures), sc);
      out.entries.push_back({g, t, r.verdict, r.stats});
      if (r.verdict == Verdict::Unsat && !out.witness) {
        out.witness = out.entries.size() - 1;
        out.certificate = std::move(r.certificate);
        if (cfg.stop_at_first_unsat) return out;
      }
      if (cfg.max_instances && out.entries.size() >= cfg.max_instances) return out;
    }
  }
  return out;
}

}  // namespace failover
