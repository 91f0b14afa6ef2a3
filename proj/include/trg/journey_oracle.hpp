#pragma once

// Exact brute-force ground truth for reachability computations.
//
// A journey is a time-respecting path: every hop (e, t_i) requires the edge
// present on the half-open window [t_i, t_i + tau), and consecutive hops are
// separated by at least tau. Waiting at vertices is unrestricted. Earliest
// arrivals are computed by label-correcting relaxation over the per-edge
// presence interval lists, which is exact for this waiting policy.
//
// Times here are doubled integers so that half-epoch sample points stay
// exact: doubled time 2t represents t.

#include <bit>
#include <deque>
#include <limits>

#include "trg/stream.hpp"
#include "trg/stream_algebra.hpp"

namespace trg {

using Time2 = std::int64_t;  // doubled time, units of eta/2

constexpr Time2 kUnreachable = std::numeric_limits<Time2>::max() / 4;

inline Time2 doubled(SamplePoint p) { return 2 * p.epoch + (p.open ? 1 : 0); }

struct EarliestArrivalMap {
  VertexId source = 0;
  Time2 start = 0;
  std::vector<Time2> arrival;      // doubled; kUnreachable if none
  std::vector<std::uint32_t> hops; // topological length of an optimal journey
};

// Adjacency index over a contact stream for repeated earliest-arrival runs.
class ContactIndex {
 public:
  explicit ContactIndex(const EventStream& g)
      : nodes_(g.nodes), tau2_(2 * g.tau) {
    if (g.kind != StreamKind::contact)
      throw StreamError("KindMismatch", "journey oracle needs a contact stream");
    adjacency_.resize(nodes_);
    for (const auto& [key, ivs] : to_intervals(g)) {
      VertexId u = arc_from(key), v = arc_to(key);
      intervals_.push_back(ivs);
      adjacency_[u].push_back({v, intervals_.size() - 1});
      adjacency_[v].push_back({u, intervals_.size() - 1});
    }
  }

  EarliestArrivalMap foremost(VertexId source, Time2 start) const {
    if (source >= nodes_)
      throw StreamError("VertexOutOfRange", "source out of range");
    EarliestArrivalMap out;
    out.source = source;
    out.start = start;
    out.arrival.assign(nodes_, kUnreachable);
    out.hops.assign(nodes_, 0);
    out.arrival[source] = start;

    std::deque<VertexId> queue{source};
    std::vector<bool> queued(nodes_, false);
    queued[source] = true;
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      queued[u] = false;
      Time2 s = out.arrival[u];
      for (const auto& [v, idx] : adjacency_[u]) {
        for (const Interval& iv : intervals_[idx]) {
          Time2 a = 2 * iv.up, b = 2 * iv.down;
          Time2 depart = std::max(s, a);
          bool crossable = tau2_ > 0 ? depart + tau2_ <= b : depart < b;
          if (!crossable) continue;
          Time2 arr = depart + tau2_;
          std::uint32_t h = out.hops[u] + 1;
          if (arr < out.arrival[v] ||
              (arr == out.arrival[v] && h < out.hops[v])) {
            out.arrival[v] = arr;
            out.hops[v] = h;
            if (!queued[v]) {
              queued[v] = true;
              queue.push_back(v);
            }
          }
          break;  // later intervals cannot arrive earlier
        }
      }
    }
    return out;
  }

  VertexId nodes() const { return nodes_; }

 private:
  VertexId nodes_;
  Time2 tau2_;
  std::vector<std::vector<Interval>> intervals_;
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> adjacency_;
};

inline EarliestArrivalMap foremost_arrival(const EventStream& g,
                                           VertexId source, SamplePoint t) {
  if (t.epoch < 0 || t.epoch > g.horizon)
    throw StreamError("TimeOutOfRange", "start outside [0, horizon]");
  return ContactIndex(g).foremost(source, doubled(t));
}

// Arcs (u,v), u != v, such that a journey departs at or after t and arrives
// by t + delta.
inline Snapshot oracle_reachability_at(const EventStream& g, Time delta,
                                       SamplePoint t) {
  ContactIndex index(g);
  Snapshot snap;
  snap.at = t;
  Time2 deadline_offset = 2 * delta;
  for (VertexId u = 0; u < g.nodes; ++u) {
    EarliestArrivalMap ea = index.foremost(u, doubled(t));
    for (VertexId v = 0; v < g.nodes; ++v)
      if (v != u && ea.arrival[v] <= doubled(t) + deadline_offset)
        snap.arcs.push_back({u, v});
  }
  std::sort(snap.arcs.begin(), snap.arcs.end());
  return snap;
}

// Exact reachability graphs for several delays in one sweep of the sample
// grid. Arrival maps are shared across the delay list.
inline std::vector<EventStream> oracle_trg_multi(const EventStream& g,
                                                 const std::vector<Time>& deltas) {
  ContactIndex index(g);
  const bool clamp = g.tau == 0;  // tau = 0 open values may exceed the encoding
  std::vector<ReachAssembler> assemblers;
  assemblers.reserve(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i)
    assemblers.emplace_back(g.eta, g.tau, g.nodes, g.horizon, clamp);

  std::vector<ArcSet> arcs(deltas.size());
  for (Time a = 0; a <= g.horizon; ++a) {
    for (int open = 0; open < (a < g.horizon ? 2 : 1); ++open) {
      Time2 t2 = 2 * a + open;
      for (auto& set : arcs) set.clear();
      for (VertexId u = 0; u < g.nodes; ++u) {
        EarliestArrivalMap ea = index.foremost(u, t2);
        for (VertexId v = 0; v < g.nodes; ++v) {
          if (v == u || ea.arrival[v] == kUnreachable) continue;
          for (std::size_t i = 0; i < deltas.size(); ++i)
            if (ea.arrival[v] <= t2 + 2 * deltas[i])
              arcs[i].insert(arc_key(u, v));
        }
      }
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (open)
          assemblers[i].push_open(a, arcs[i]);
        else
          assemblers[i].push_instant(a, arcs[i]);
      }
    }
  }
  std::vector<EventStream> out;
  out.reserve(deltas.size());
  for (auto& assembler : assemblers) out.push_back(assembler.finish());
  return out;
}

inline EventStream oracle_trg(const EventStream& g, Time delta) {
  if (delta < 0) throw StreamError("BadDelta", "delta must be non-negative");
  return oracle_trg_multi(g, {delta})[0];
}

// Minimum-cardinality set D such that every vertex is in D or has an incoming
// arc from a member of D. Exponential search, guarded to small n.
inline std::vector<VertexId> exact_min_dominating_set(const Snapshot& snapshot,
                                                      VertexId n) {
  if (n > 16)
    throw StreamError("TooLarge", "exact dominating set limited to n <= 16");
  std::vector<std::uint32_t> covers(n);
  for (VertexId v = 0; v < n; ++v) covers[v] = 1u << v;
  for (const auto& [u, v] : snapshot.arcs) covers[u] |= 1u << v;

  const std::uint32_t full = n == 32 ? 0xffffffffu : (1u << n) - 1;
  std::uint32_t best_mask = full;
  int best_size = n;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    int size = std::popcount(mask);
    if (size >= best_size) continue;
    std::uint32_t covered = 0;
    for (VertexId v = 0; v < n; ++v)
      if (mask & (1u << v)) covered |= covers[v];
    if (covered == full) {
      best_size = size;
      best_mask = mask;
    }
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v)
    if (best_mask & (1u << v)) out.push_back(v);
  return out;
}

}  // namespace trg
