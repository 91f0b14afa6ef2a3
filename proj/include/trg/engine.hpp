#pragma once

// Scalable computation of lower and upper approximations of reachability
// graphs.
//
// The pipeline: derive the unit-delay graph R_tau directly from the contact
// stream, bootstrap the family of the 2*tau-1 lower approximations around it,
// then reach any target delay by binary exponentiation over family addition.
// Each family addition runs independent streaming compositions, one per
// member offset. Upper approximations derive from lower ones by intersecting
// adjacent instant values. tau = 0 takes an exact connected-components path.
//
// The streaming composition keeps one counter per arc holding the number of
// currently satisfied composition-condition instances:
//   1. membership in the first input at the next epoch start,
//   2. membership in the delay-shifted second input at the epoch start,
//   3. one instance per middle vertex joining the two inputs' open values.
// An UP is emitted when a counter becomes positive, a DOWN when it returns to
// zero; output events for epoch i-1 are decided only after consuming input
// events at time i (one-epoch lookahead). Working memory is O(tau * N^2),
// independent of the trace duration.

#include <atomic>
#include <cassert>
#include <functional>
#include <map>
#include <thread>

#include "trg/stream.hpp"
#include "trg/stream_algebra.hpp"

namespace trg {

struct CompositionRecord {
  Time d = 0, m = 0;   // effective base delays; the output delay is d + m
  Time k = 0;          // member offset within a family addition
  std::uint64_t events_in = 0, events_out = 0;
  std::size_t peak_counter_entries = 0;
};

struct LowerFamily {
  Time base_delay = 0;  // d; members carry delays d + i for |i| < tau
  Time tau = 0, eta = 1;
  VertexId nodes = 0;
  Time horizon = 0;
  std::vector<EventStream> members;  // index 0 holds offset -(tau - 1)

  const EventStream& member(Time offset) const {
    return members.at(static_cast<std::size_t>(offset + tau - 1));
  }
};

// R_tau, exact: every contact interval [t1, t2) with t2 - t1 >= tau yields
// the arcs (u,v) and (v,u) on the closed interval [t1, t2 - tau].
inline EventStream derive_unit_trg(const EventStream& g) {
  if (g.kind != StreamKind::contact)
    throw StreamError("KindMismatch", "unit-delay derivation needs a contact stream");
  if (g.tau < 1)
    throw StreamError("BadTau", "unit-delay derivation needs tau >= 1 (use the tau=0 path)");
  std::map<ArcKey, std::vector<Interval>> acc;
  for (const auto& [key, ivs] : to_intervals(g)) {
    VertexId u = arc_from(key), v = arc_to(key);
    for (const Interval& iv : ivs) {
      if (iv.down - iv.up < g.tau) continue;
      acc[arc_key(u, v)].push_back({iv.up, iv.down - g.tau});
      acc[arc_key(v, u)].push_back({iv.up, iv.down - g.tau});
    }
  }
  EventStream r = g;
  r.kind = StreamKind::reach;
  PairIntervals pairs(acc.begin(), acc.end());
  r.events = events_from_intervals(pairs);
  return r;
}

namespace detail {

inline EventStream empty_reach_like(const EventStream& g) {
  EventStream s = g;
  s.kind = StreamKind::reach;
  s.events.clear();
  return s;
}

// Pulls every interval start back by `shift`, clamped at 0, merging runs that
// come to share an instant.
inline EventStream pull_back_starts(const EventStream& r, Time shift) {
  PairIntervals pairs = to_intervals(r);
  for (auto& [key, ivs] : pairs) {
    std::vector<Interval> out;
    for (const Interval& iv : ivs)
      append_interval(out, {std::max<Time>(0, iv.up - shift), iv.down});
    ivs = std::move(out);
  }
  EventStream s = r;
  s.events = events_from_intervals(pairs);
  return s;
}

}  // namespace detail

// The family of L_tau: offsets below 0 are empty (delay below tau), offset 0
// is R_tau itself, and offset j in (0, tau) covers the one-hop-only delay
// tau + j, whose value at time t is the union of R_tau over the window
// [t, t+j]; on the closed-interval encoding that is R_tau with every interval
// start pulled back by j.
inline LowerFamily bootstrap_family(const EventStream& g) {
  if (g.tau < 1)
    throw StreamError("BadTau", "bootstrap needs tau >= eta");
  LowerFamily fam;
  fam.base_delay = g.tau;
  fam.tau = g.tau;
  fam.eta = g.eta;
  fam.nodes = g.nodes;
  fam.horizon = g.horizon;
  EventStream unit = derive_unit_trg(g);
  for (Time i = -(g.tau - 1); i <= g.tau - 1; ++i) {
    if (i < 0)
      fam.members.push_back(detail::empty_reach_like(unit));
    else if (i == 0)
      fam.members.push_back(unit);
    else
      fam.members.push_back(detail::pull_back_starts(unit, i));
  }
  return fam;
}

struct ComposeOutput {
  EventStream stream;
  CompositionRecord record;
};

// Streaming composition of pairs (first_k, second_k) where pair k carries
// delays (d + k, m - k); the second input of pair k is read d + k epochs
// ahead. Output is the union of the pairwise approximate compositions:
// exact at every instant, a lower bound on open epochs.
inline ComposeOutput compose_lower(
    const std::vector<std::pair<const EventStream*, const EventStream*>>& pairs,
    Time d, Time m) {
  if (pairs.empty()) throw StreamError("BadInput", "no input pairs");
  if (d < 1) throw StreamError("BadDelta", "first base delay must be >= 1");
  const EventStream& ref = *pairs[0].first;
  for (const auto& [first, second] : pairs) {
    if (!first->same_shape(ref) || !second->same_shape(ref))
      throw StreamError("MetadataMismatch", "composition inputs differ in shape");
    if (first->kind != StreamKind::reach)
      throw StreamError("KindMismatch", "composition inputs must be reach streams");
    if (!std::is_sorted(first->events.begin(), first->events.end(), event_less) ||
        !std::is_sorted(second->events.begin(), second->events.end(), event_less))
      throw StreamError("UnsortedEvents", "composition input not sorted");
  }

  const std::size_t P = pairs.size();
  const VertexId n = ref.nodes;
  const Time T = ref.horizon;

  std::unordered_map<ArcKey, std::int32_t> counter;
  ArcSet touched, went_zero, output_up;
  // in1[k][w] = tails u of first-input arcs (u,w); out2[k][w] = heads v of
  // second-input arcs (w,v).
  std::vector<std::vector<std::unordered_set<VertexId>>> in1(P), out2(P);
  std::vector<std::vector<ArcKey>> delayed(P);
  for (std::size_t k = 0; k < P; ++k) {
    in1[k].resize(n);
    out2[k].resize(n);
  }
  std::size_t live_adjacency = 0, peak = 0;

  auto inc = [&](ArcKey a) {
    std::int32_t& c = counter[a];
    if (c == 0) touched.insert(a);
    ++c;
  };
  auto dec = [&](ArcKey a) {
    auto it = counter.find(a);
    if (it == counter.end() || it->second <= 0)
      throw std::logic_error("composition counter underflow");
    if (--it->second == 0) went_zero.insert(a);
  };

  struct Cursor {
    const std::vector<Event>* events;
    std::size_t i = 0;
  };
  std::vector<Cursor> first(P), second(P);
  for (std::size_t k = 0; k < P; ++k) {
    first[k].events = &pairs[k].first->events;
    second[k].events = &pairs[k].second->events;
  }

  // Bring each second input up to its read position: arcs alive at instant
  // d + k enter the adjacency and count as condition-2 instances.
  for (std::size_t k = 0; k < P; ++k) {
    const Time shift = d + static_cast<Time>(k);
    auto& cur = second[k];
    while (cur.i < cur.events->size() && (*cur.events)[cur.i].t < shift) {
      const Event& e = (*cur.events)[cur.i++];
      ArcKey a = arc_key(e.u, e.v);
      if (e.type == EventType::up) {
        inc(a);
        out2[k][e.u].insert(e.v);
        ++live_adjacency;
      } else {
        dec(a);
        out2[k][e.u].erase(e.v);
        --live_adjacency;
      }
    }
  }
  for (ArcKey a : went_zero) {
    auto it = counter.find(a);
    if (it != counter.end() && it->second == 0) counter.erase(it);
  }
  touched.clear();
  went_zero.clear();
  for (const auto& [a, c] : counter) touched.insert(a);

  EventStream out = detail::empty_reach_like(ref);
  std::uint64_t events_out = 0;
  auto emit = [&](Time t, EventType type, std::vector<ArcKey>& keys) {
    std::sort(keys.begin(), keys.end());
    for (ArcKey a : keys) {
      out.events.push_back({t, type, arc_from(a), arc_to(a)});
      ++events_out;
    }
  };

  for (Time i = 0; i <= T + 1; ++i) {
    // Condition-1 ups of the first inputs at time i, before deciding epoch i-1.
    for (std::size_t k = 0; k < P; ++k) {
      const auto& ev = *first[k].events;
      for (std::size_t j = first[k].i;
           j < ev.size() && ev[j].t == i && ev[j].type == EventType::up; ++j)
        inc(arc_key(ev[j].u, ev[j].v));
    }

    if (i >= 1) {
      std::vector<ArcKey> ups, downs;
      for (ArcKey a : touched) {
        if (output_up.count(a)) continue;
        ups.push_back(a);
        auto it = counter.find(a);
        if (it != counter.end() && it->second > 0)
          output_up.insert(a);
        else
          downs.push_back(a);  // ephemeral: up and down at the same instant
      }
      for (ArcKey a : went_zero) {
        if (!output_up.count(a)) continue;
        auto it = counter.find(a);
        if (it == counter.end() || it->second == 0) {
          downs.push_back(a);
          output_up.erase(a);
        }
      }
      emit(i - 1, EventType::up, ups);
      emit(i - 1, EventType::down, downs);
      for (ArcKey a : went_zero) {
        auto it = counter.find(a);
        if (it != counter.end() && it->second == 0) counter.erase(it);
      }
      touched.clear();
      went_zero.clear();
    }

    for (std::size_t k = 0; k < P; ++k) {
      const Time shift = d + static_cast<Time>(k);
      const auto& ev1 = *first[k].events;
      const auto& ev2 = *second[k].events;
      std::size_t& i1 = first[k].i;
      std::size_t& i2 = second[k].i;

      // First-input ups: enter adjacency, join with second-input arcs.
      for (; i1 < ev1.size() && ev1[i1].t == i && ev1[i1].type == EventType::up;
           ++i1) {
        const Event& e = ev1[i1];
        in1[k][e.v].insert(e.u);
        ++live_adjacency;
        for (VertexId v : out2[k][e.v])
          if (v != e.u) inc(arc_key(e.u, v));
      }

      // Second-input ups at the shifted time: condition 2 plus joins.
      for (; i2 < ev2.size() && ev2[i2].t == i + shift &&
             ev2[i2].type == EventType::up;
           ++i2) {
        const Event& e = ev2[i2];
        inc(arc_key(e.u, e.v));
        out2[k][e.u].insert(e.v);
        ++live_adjacency;
        for (VertexId u : in1[k][e.u])
          if (u != e.v) inc(arc_key(u, e.v));
      }

      // Condition-2 downs act one epoch late.
      for (ArcKey a : delayed[k]) dec(a);
      delayed[k].clear();

      for (; i2 < ev2.size() && ev2[i2].t == i + shift; ++i2) {
        const Event& e = ev2[i2];
        assert(e.type == EventType::down);
        delayed[k].push_back(arc_key(e.u, e.v));
        out2[k][e.u].erase(e.v);
        --live_adjacency;
        for (VertexId u : in1[k][e.u])
          if (u != e.v) dec(arc_key(u, e.v));
      }

      for (; i1 < ev1.size() && ev1[i1].t == i; ++i1) {
        const Event& e = ev1[i1];
        assert(e.type == EventType::down);
        dec(arc_key(e.u, e.v));
        in1[k][e.v].erase(e.u);
        --live_adjacency;
        for (VertexId v : out2[k][e.v])
          if (v != e.u) dec(arc_key(e.u, v));
      }
    }

    std::size_t delayed_total = 0;
    for (const auto& dl : delayed) delayed_total += dl.size();
    peak = std::max(peak, counter.size() + live_adjacency + delayed_total);
  }
  assert(counter.empty());
  assert(output_up.empty());

  CompositionRecord record;
  record.d = d;
  record.m = m;
  std::uint64_t events_in = 0;
  for (const auto& [a, b] : pairs) events_in += a->events.size() + b->events.size();
  record.events_in = events_in;
  record.events_out = events_out;
  record.peak_counter_entries = peak;
  return {std::move(out), record};
}

// Family addition: member offset i of the result is the union of tau
// compositions wired from the input families' members. The 2*tau-1 member
// computations are independent and run on up to `workers` threads; results
// are assembled in offset order so the outcome never depends on scheduling.
inline LowerFamily family_add(const LowerFamily& a, const LowerFamily& b,
                              int workers = 1,
                              std::vector<CompositionRecord>* records = nullptr) {
  if (a.tau != b.tau || a.eta != b.eta || a.nodes != b.nodes ||
      a.horizon != b.horizon)
    throw StreamError("MetadataMismatch", "family metadata differs");
  const Time tau = a.tau;
  if (a.base_delay % tau != 0 || b.base_delay % tau != 0 ||
      a.base_delay < tau || b.base_delay < tau)
    throw StreamError("BadDelta", "family base delays must be positive multiples of tau");

  const Time d = a.base_delay, m = b.base_delay;
  const std::size_t count = static_cast<std::size_t>(2 * tau - 1);
  std::vector<EventStream> members(count);
  std::vector<CompositionRecord> recs(count);
  std::vector<std::exception_ptr> errors(count);

  auto run_member = [&](std::size_t idx) {
    try {
      const Time i = static_cast<Time>(idx) - (tau - 1);
      std::vector<std::pair<const EventStream*, const EventStream*>> pairs;
      pairs.reserve(static_cast<std::size_t>(tau));
      for (Time k = 0; k < tau; ++k) {
        if (i >= 0)
          pairs.push_back({&a.member(k), &b.member(i - k)});
        else
          pairs.push_back({&a.member(i + k), &b.member(-k)});
      }
      ComposeOutput out = compose_lower(pairs, i >= 0 ? d : d + i,
                                        i >= 0 ? m + i : m);
      out.record.k = i;
      members[idx] = std::move(out.stream);
      recs[idx] = out.record;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  int pool = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (pool == 1) {
    for (std::size_t idx = 0; idx < count; ++idx) run_member(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w)
      threads.emplace_back([&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < count;)
          run_member(idx);
      });
    for (auto& t : threads) t.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  LowerFamily out;
  out.base_delay = d + m;
  out.tau = tau;
  out.eta = a.eta;
  out.nodes = a.nodes;
  out.horizon = a.horizon;
  out.members = std::move(members);
  if (records) records->insert(records->end(), recs.begin(), recs.end());
  return out;
}

// The upper approximation shares the lower one's (exact) instant values; on
// each open epoch it takes the intersection of the two adjacent instants. On
// the interval encoding that merges runs whose instants are contiguous.
inline EventStream upper_from_lower(const EventStream& low) {
  PairIntervals pairs = to_intervals(low);
  for (auto& [key, ivs] : pairs) {
    std::vector<Interval> out;
    for (const Interval& iv : ivs) {
      if (!out.empty() && iv.up <= out.back().down + 1)
        out.back().down = std::max(out.back().down, iv.down);
      else
        out.push_back(iv);
    }
    ivs = std::move(out);
  }
  EventStream s = low;
  s.events = events_from_intervals(pairs);
  return s;
}

namespace detail {

// (u,v) with u != v such that (u,v) is in `a`, in `b`, or joined through a
// middle vertex w with (u,w) in `a` and (w,v) in `b`.
inline ArcSet relation_compose(const ArcSet& a, const ArcSet& b, VertexId n) {
  ArcSet out = a;
  std::vector<std::vector<VertexId>> badj(n);
  for (ArcKey k : b) {
    out.insert(k);
    badj[arc_from(k)].push_back(arc_to(k));
  }
  for (ArcKey k : a) {
    VertexId u = arc_from(k), w = arc_to(k);
    for (VertexId v : badj[w])
      if (v != u) out.insert(arc_key(u, v));
  }
  return out;
}

}  // namespace detail

struct InstantComposition {
  std::vector<Snapshot> snapshots;  // one per instant 0..T
  bool truncated = false;  // instants past T - d read the second input as empty
};

// The exact composition of two instant-exact reach streams, evaluated at
// every instant a: arcs of r1(a), arcs of r2(a + d), and the joins through a
// middle vertex. Test oracle for the sampling identity and backbone of the
// tau = 0 path.
inline InstantComposition compose_exact_at_instants(const EventStream& r1,
                                                    const EventStream& r2,
                                                    Time d) {
  detail::require_same_shape(r1, r2);
  if (d < 0) throw StreamError("BadDelta", "shift must be non-negative");
  std::vector<ArcSet> p1, p2;
  sweep_grid(r1, [&](SamplePoint p, const ArcSet& set) {
    if (!p.open) p1.push_back(set);
  });
  sweep_grid(r2, [&](SamplePoint p, const ArcSet& set) {
    if (!p.open) p2.push_back(set);
  });
  InstantComposition out;
  out.truncated = d > 0;
  static const ArcSet empty_set;
  for (Time a = 0; a <= r1.horizon; ++a) {
    const ArcSet& shifted =
        a + d <= r1.horizon ? p2[static_cast<std::size_t>(a + d)] : empty_set;
    ArcSet composed = detail::relation_compose(
        p1[static_cast<std::size_t>(a)], shifted, r1.nodes);
    Snapshot snap;
    snap.at = {a, false};
    snap.arcs = sorted_pairs(composed);
    out.snapshots.push_back(std::move(snap));
  }
  return out;
}

namespace detail {

struct ReachGrids {
  std::vector<ArcSet> instant;  // P(0..T)
  std::vector<ArcSet> open;     // Q(0..T-1)
};

inline ArcSet component_arcs(const ArcSet& edges, VertexId n) {
  std::vector<VertexId> comp(n);
  for (VertexId v = 0; v < n; ++v) comp[v] = v;
  // Union-find with path halving.
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    while (comp[v] != v) {
      comp[v] = comp[comp[v]];
      v = comp[v];
    }
    return v;
  };
  for (ArcKey k : edges) comp[find(arc_from(k))] = find(arc_to(k));
  std::vector<std::vector<VertexId>> groups(n);
  for (VertexId v = 0; v < n; ++v) groups[find(v)].push_back(v);
  ArcSet out;
  for (const auto& group : groups)
    for (VertexId u : group)
      for (VertexId v : group)
        if (u != v) out.insert(arc_key(u, v));
  return out;
}

inline ReachGrids zero_tau_base(const EventStream& g) {
  ReachGrids grids;
  sweep_grid(g, [&](SamplePoint p, const ArcSet& set) {
    ArcSet arcs = component_arcs(set, g.nodes);
    if (p.open)
      grids.open.push_back(std::move(arcs));
    else
      grids.instant.push_back(std::move(arcs));
  });
  return grids;
}

inline ReachGrids zero_tau_compose(const ReachGrids& x, const ReachGrids& y,
                                   Time shift, VertexId n, Time horizon) {
  static const ArcSet empty_set;
  auto at = [&](const std::vector<ArcSet>& v, Time t) -> const ArcSet& {
    return t < static_cast<Time>(v.size()) ? v[static_cast<std::size_t>(t)]
                                           : empty_set;
  };
  ReachGrids out;
  for (Time a = 0; a <= horizon; ++a)
    out.instant.push_back(
        relation_compose(x.instant[static_cast<std::size_t>(a)],
                         at(y.instant, a + shift), n));
  for (Time a = 0; a < horizon; ++a)
    out.open.push_back(relation_compose(x.open[static_cast<std::size_t>(a)],
                                        at(y.open, a + shift), n));
  return out;
}

inline const ReachGrids& zero_tau_grids(const EventStream& g, Time delta,
                                        std::map<Time, ReachGrids>& memo) {
  auto it = memo.find(delta);
  if (it != memo.end()) return it->second;
  ReachGrids grids;
  if (delta == 0) {
    grids = zero_tau_base(g);
  } else if (delta == 1) {
    // R_eta from the components at consecutive instants; open values join the
    // open components with the next instant's.
    static const ArcSet empty_set;
    const ReachGrids& base = zero_tau_grids(g, 0, memo);
    for (Time a = 0; a <= g.horizon; ++a) {
      const ArcSet& next = a + 1 <= g.horizon
                               ? base.instant[static_cast<std::size_t>(a + 1)]
                               : empty_set;
      grids.instant.push_back(relation_compose(
          base.instant[static_cast<std::size_t>(a)], next, g.nodes));
    }
    for (Time a = 0; a < g.horizon; ++a)
      grids.open.push_back(
          relation_compose(base.open[static_cast<std::size_t>(a)],
                           base.instant[static_cast<std::size_t>(a + 1)],
                           g.nodes));
  } else if (delta % 2 == 0) {
    const ReachGrids& half = zero_tau_grids(g, delta / 2, memo);
    grids = zero_tau_compose(half, half, delta / 2, g.nodes, g.horizon);
  } else {
    const ReachGrids& left = zero_tau_grids(g, delta - 1, memo);
    const ReachGrids& one = zero_tau_grids(g, 1, memo);
    grids = zero_tau_compose(left, one, delta - 1, g.nodes, g.horizon);
  }
  return memo.emplace(delta, std::move(grids)).first->second;
}

inline EventStream assemble_grids(const ReachGrids& grids, const EventStream& g) {
  ReachAssembler assembler(g.eta, g.tau, g.nodes, g.horizon, /*clamp_open=*/true);
  for (Time a = 0; a <= g.horizon; ++a) {
    assembler.push_instant(a, grids.instant[static_cast<std::size_t>(a)]);
    if (a < g.horizon)
      assembler.push_open(a, grids.open[static_cast<std::size_t>(a)]);
  }
  return assembler.finish();
}

}  // namespace detail

// Exact reachability graphs for tau = 0: R_0 links the vertices sharing a
// connected component, and composition is exact at every time, so any delay
// follows by binary exponentiation.
inline EventStream zero_tau_trg(const EventStream& g, Time delta) {
  if (g.tau != 0) throw StreamError("BadTau", "zero_tau_trg needs tau = 0");
  if (g.kind != StreamKind::contact)
    throw StreamError("KindMismatch", "zero_tau_trg needs a contact stream");
  if (delta < 0) throw StreamError("BadDelta", "delta must be non-negative");
  std::map<Time, detail::ReachGrids> memo;
  return detail::assemble_grids(detail::zero_tau_grids(g, delta, memo), g);
}

struct ReachBounds {
  EventStream lower, upper;
};

struct ReachStats {
  int family_adds = 0;
  std::vector<CompositionRecord> records;
};

// Lower and upper bounds for every target delay. Targets decompose as
// delta = n*tau + i with |i| < tau; the family for n*tau is built by binary
// exponentiation over family addition, the member at offset i is the lower
// bound, and the upper bound derives from it. Families for intermediate
// powers are cached and shared across targets.
inline std::map<Time, ReachBounds> reach_delays(const EventStream& g,
                                                const std::vector<Time>& deltas,
                                                int workers = 1,
                                                ReachStats* stats = nullptr) {
  if (g.kind != StreamKind::contact)
    throw StreamError("KindMismatch", "reach_delays needs a contact stream");
  for (Time delta : deltas)
    if (delta < 0) throw StreamError("BadDelta", "delta must be non-negative");

  std::map<Time, ReachBounds> out;
  if (g.tau == 0) {
    std::map<Time, detail::ReachGrids> memo;
    for (Time delta : deltas) {
      if (out.count(delta)) continue;
      EventStream exact = detail::assemble_grids(
          detail::zero_tau_grids(g, delta, memo), g);
      out.emplace(delta, ReachBounds{exact, exact});
    }
    return out;
  }

  std::map<Time, LowerFamily> families;
  std::function<const LowerFamily&(Time)> family_for =
      [&](Time n) -> const LowerFamily& {
    auto it = families.find(n);
    if (it != families.end()) return it->second;
    LowerFamily fam;
    if (n == 1) {
      fam = bootstrap_family(g);
    } else if (n % 2 == 0) {
      const LowerFamily& half = family_for(n / 2);
      fam = family_add(half, half, workers, stats ? &stats->records : nullptr);
      if (stats) ++stats->family_adds;
    } else {
      const LowerFamily& left = family_for(n - 1);
      fam = family_add(left, family_for(1), workers,
                       stats ? &stats->records : nullptr);
      if (stats) ++stats->family_adds;
    }
    return families.emplace(n, std::move(fam)).first->second;
  };

  for (Time delta : deltas) {
    if (out.count(delta)) continue;
    if (delta < g.tau) {
      EventStream empty = detail::empty_reach_like(g);
      out.emplace(delta, ReachBounds{empty, empty});
      continue;
    }
    Time n = delta / g.tau;
    Time i = delta % g.tau;
    const EventStream& lower = family_for(n).member(i);
    out.emplace(delta, ReachBounds{lower, upper_from_lower(lower)});
  }
  return out;
}

}  // namespace trg
