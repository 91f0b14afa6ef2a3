#pragma once

// Pointwise set algebra over streams (union, intersection, containment),
// regularity validation, and assembly of reach streams from grid samples.

#include <cassert>
#include <map>
#include <optional>

#include "trg/stream.hpp"

namespace trg {

namespace detail {

inline void require_same_shape(const EventStream& a, const EventStream& b) {
  if (!a.same_shape(b))
    throw StreamError("MetadataMismatch",
                      "streams differ in kind, eta, nodes or horizon");
}

// Merges an interval into a canonical list. Contact intervals merge when
// touching ([0,2) + [2,4) = [0,4)); reach intervals merge when they share an
// instant ([0,2] + [2,5] = [0,5]) but stay apart when only adjacent
// ([0,2] + [3,5] leaves the open epoch (2,3) empty).
inline void append_interval(std::vector<Interval>& list, Interval iv) {
  if (!list.empty() && iv.up <= list.back().down)
    list.back().down = std::max(list.back().down, iv.down);
  else
    list.push_back(iv);
}

}  // namespace detail

// Pointwise-in-time union over both instant and open-interval states.
inline EventStream stream_union(const EventStream& a, const EventStream& b) {
  detail::require_same_shape(a, b);
  PairIntervals pa = to_intervals(a), pb = to_intervals(b);
  PairIntervals out;
  std::size_t i = 0, j = 0;
  while (i < pa.size() || j < pb.size()) {
    ArcKey key;
    std::vector<Interval> merged;
    if (j == pb.size() || (i < pa.size() && pa[i].first < pb[j].first)) {
      key = pa[i].first;
      merged = pa[i].second;
      ++i;
    } else if (i == pa.size() || pb[j].first < pa[i].first) {
      key = pb[j].first;
      merged = pb[j].second;
      ++j;
    } else {
      key = pa[i].first;
      std::vector<Interval> all = pa[i].second;
      all.insert(all.end(), pb[j].second.begin(), pb[j].second.end());
      std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) {
        return x.up < y.up;
      });
      for (const Interval& iv : all) detail::append_interval(merged, iv);
      ++i;
      ++j;
    }
    out.push_back({key, std::move(merged)});
  }
  EventStream s = a;
  s.events = events_from_intervals(out);
  return s;
}

inline EventStream stream_intersection(const EventStream& a,
                                       const EventStream& b) {
  detail::require_same_shape(a, b);
  PairIntervals pa = to_intervals(a), pb = to_intervals(b);
  PairIntervals out;
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i].first < pb[j].first) {
      ++i;
      continue;
    }
    if (pb[j].first < pa[i].first) {
      ++j;
      continue;
    }
    const auto& xs = pa[i].second;
    const auto& ys = pb[j].second;
    std::vector<Interval> merged;
    std::size_t x = 0, y = 0;
    while (x < xs.size() && y < ys.size()) {
      Time up = std::max(xs[x].up, ys[y].up);
      Time down = std::min(xs[x].down, ys[y].down);
      bool nonempty = a.kind == StreamKind::contact ? up < down : up <= down;
      if (nonempty) merged.push_back({up, down});
      if (xs[x].down < ys[y].down)
        ++x;
      else
        ++y;
    }
    if (!merged.empty()) out.push_back({pa[i].first, std::move(merged)});
    ++i;
    ++j;
  }
  EventStream s = a;
  s.events = events_from_intervals(out);
  return s;
}

// Pointwise containment: every presence of `a` is a presence of `b`.
inline bool stream_subset(const EventStream& a, const EventStream& b) {
  detail::require_same_shape(a, b);
  PairIntervals pa = to_intervals(a), pb = to_intervals(b);
  std::size_t j = 0;
  for (const auto& [key, ivs] : pa) {
    while (j < pb.size() && pb[j].first < key) ++j;
    if (j == pb.size() || pb[j].first != key) {
      if (!ivs.empty()) return false;
      continue;
    }
    const auto& cover = pb[j].second;
    std::size_t c = 0;
    for (const Interval& iv : ivs) {
      while (c < cover.size() && cover[c].down < iv.down) ++c;
      if (c == cover.size() || cover[c].up > iv.up) return false;
    }
  }
  return true;
}

struct Violation {
  Time t;
  VertexId u, v;
  std::string rule;
};

struct RegularityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the structural invariants of a stream built by hand: canonical
// ordering, interval pairing per pair, id/time ranges, and (reach, tau >= eta)
// the containment of every open-epoch value in both adjacent instant values.
inline RegularityReport validate_regularity(const EventStream& s) {
  RegularityReport report;
  auto flag = [&](Time t, VertexId u, VertexId v, const char* rule) {
    report.violations.push_back({t, u, v, rule});
  };
  if (s.eta <= 0) flag(0, 0, 0, "BadEta");
  if (s.tau < 0) flag(0, 0, 0, "BadTau");
  if (s.nodes == 0) flag(0, 0, 0, "BadNodes");
  if (s.horizon < 0) flag(0, 0, 0, "BadHorizon");
  if (!report.ok()) return report;

  const Event* prev = nullptr;
  std::unordered_map<ArcKey, Time> open;
  for (const Event& e : s.events) {
    if (e.t < 0 || e.t > s.horizon) flag(e.t, e.u, e.v, "TimeOutOfRange");
    if (e.u >= s.nodes || e.v >= s.nodes) flag(e.t, e.u, e.v, "VertexOutOfRange");
    if (e.u == e.v) flag(e.t, e.u, e.v, "InvalidPair");
    if (s.kind == StreamKind::contact && e.u > e.v)
      flag(e.t, e.u, e.v, "InvalidPair");
    if (prev && !event_less(*prev, e)) {
      flag(e.t, e.u, e.v, *prev == e ? "DuplicateEvent" : "UnsortedEvents");
      prev = &e;
      continue;
    }
    prev = &e;
    ArcKey key = arc_key(e.u, e.v);
    if (e.type == EventType::up) {
      if (!open.emplace(key, e.t).second) flag(e.t, e.u, e.v, "UpWhileUp");
    } else {
      auto it = open.find(key);
      if (it == open.end()) {
        flag(e.t, e.u, e.v, "DownWithoutUp");
      } else {
        if (s.kind == StreamKind::contact && e.t <= it->second)
          flag(e.t, e.u, e.v, "ZeroLengthContact");
        open.erase(it);
      }
    }
  }
  for (const auto& [key, t] : open)
    flag(t, arc_from(key), arc_to(key), "UnclosedInterval");
  if (!report.ok()) return report;

  if (s.kind == StreamKind::reach && s.tau >= 1) {
    // Open-epoch values must sit inside both adjacent instant values.
    ArcSet prev_instant, prev_open;
    bool have_open = false;
    Time open_epoch = 0;
    sweep_grid(s, [&](SamplePoint p, const ArcSet& set) {
      if (p.open) {
        for (ArcKey k : set)
          if (!prev_instant.count(k))
            flag(p.epoch, arc_from(k), arc_to(k), "OpenNotInEpochStart");
        prev_open = set;
        have_open = true;
        open_epoch = p.epoch;
      } else {
        if (have_open) {
          for (ArcKey k : prev_open)
            if (!set.count(k))
              flag(open_epoch, arc_from(k), arc_to(k), "OpenNotInEpochEnd");
        }
        prev_instant = set;
        have_open = false;
      }
    });
  }
  return report;
}

// Builds a canonical reach stream from grid samples pushed in order:
// instant 0, open 0, instant 1, ..., instant T. Reachability theory
// guarantees every open value is contained in both adjacent instant values;
// with `clamp_open` (the tau = 0 path) the open value is clamped to that
// encodable intersection instead.
class ReachAssembler {
 public:
  ReachAssembler(Time eta, Time tau, VertexId nodes, Time horizon,
                 bool clamp_open = false)
      : clamp_open_(clamp_open) {
    out_.kind = StreamKind::reach;
    out_.eta = eta;
    out_.tau = tau;
    out_.nodes = nodes;
    out_.horizon = horizon;
  }

  void push_instant(Time a, const ArcSet& arcs) {
    assert(a == next_epoch_);
    // Close open epoch a-1 now that P(a) is known.
    if (a > 0) {
      std::vector<ArcKey> downs;
      for (ArcKey k : up_) {
        bool stay = pending_open_.count(k) && (!clamp_open_ || arcs.count(k));
        if (!stay) downs.push_back(k);
      }
      emit(a - 1, EventType::down, downs);
    }
    std::vector<ArcKey> ups;
    for (ArcKey k : arcs)
      if (!up_.count(k)) ups.push_back(k);
    emit(a, EventType::up, ups);
    for (ArcKey k : ups) up_.insert(k);
#ifndef NDEBUG
    if (!clamp_open_) {
      // Every arc alive on the open epoch must still be present at a.
      for (ArcKey k : up_) assert(arcs.count(k));
    }
#endif
    instant_ = arcs;
    pending_open_.clear();
    ++next_epoch_;
  }

  void push_open([[maybe_unused]] Time a, const ArcSet& arcs) {
    assert(a == next_epoch_ - 1);
    pending_open_.clear();
    for (ArcKey k : arcs)
      if (!clamp_open_ || instant_.count(k)) pending_open_.insert(k);
  }

  EventStream finish() {
    std::vector<ArcKey> downs(up_.begin(), up_.end());
    emit(next_epoch_ - 1, EventType::down, downs);
    up_.clear();
    return std::move(out_);
  }

 private:
  void emit(Time t, EventType type, std::vector<ArcKey>& keys) {
    std::sort(keys.begin(), keys.end());
    for (ArcKey k : keys) {
      out_.events.push_back({t, type, arc_from(k), arc_to(k)});
      if (type == EventType::down) up_.erase(k);
    }
  }

  bool clamp_open_;
  EventStream out_;
  ArcSet up_, instant_, pending_open_;
  Time next_epoch_ = 0;
};

// Rebuilds a stream from its full grid sampling; with matching metadata the
// result equals the original (grid samples determine a regular stream).
inline EventStream assemble_from_grid(const EventStream& like,
                                      bool clamp_open = false) {
  if (like.kind == StreamKind::contact) {
    // Contact epochs have P = Q; presence runs become [a, b) intervals.
    std::map<ArcKey, std::vector<Interval>> acc;
    std::unordered_map<ArcKey, Time> open;
    sweep_grid(like, [&](SamplePoint p, const ArcSet& set) {
      if (p.open) return;
      for (ArcKey k : set)
        if (!open.count(k)) open.emplace(k, p.epoch);
      for (auto it = open.begin(); it != open.end();) {
        if (!set.count(it->first)) {
          acc[it->first].push_back({it->second, p.epoch});
          it = open.erase(it);
        } else {
          ++it;
        }
      }
    });
    for (auto& [k, t] : open) acc[k].push_back({t, like.horizon});
    EventStream s = like;
    PairIntervals pairs(acc.begin(), acc.end());
    s.events = events_from_intervals(pairs);
    return s;
  }
  ReachAssembler assembler(like.eta, like.tau, like.nodes, like.horizon,
                           clamp_open);
  sweep_grid(like, [&](SamplePoint p, const ArcSet& set) {
    if (p.open)
      assembler.push_open(p.epoch, set);
    else
      assembler.push_instant(p.epoch, set);
  });
  return assembler.finish();
}

}  // namespace trg
