#pragma once

// Event-stream representation of time-varying graphs. A stream is a sorted
// sequence of arc/edge UP and DOWN events over integer times in units of the
// resolution eta. Two interval conventions coexist:
//
//   contact : undirected edges, half-open presence [up, down). An edge is
//             present at instant `up`, on every instant and open epoch before
//             `down`, and absent at instant `down`.
//   reach   : directed arcs, closed presence [up, down]. An arc is present at
//             instants up..down and on open epochs (t, t+1) for up <= t < down.
//             up == down encodes an ephemeral arc present at a single instant.
//
// Both conventions are eta-regular: the topology is constant on every open
// epoch (k, k+1) and contained in the snapshot at k.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace trg {

using VertexId = std::uint32_t;
using Time = std::int64_t;
using ArcKey = std::uint64_t;

inline ArcKey arc_key(VertexId u, VertexId v) {
  return (static_cast<ArcKey>(u) << 32) | v;
}
inline VertexId arc_from(ArcKey a) { return static_cast<VertexId>(a >> 32); }
inline VertexId arc_to(ArcKey a) { return static_cast<VertexId>(a & 0xffffffffu); }

using ArcSet = std::unordered_set<ArcKey>;

enum class StreamKind { contact, reach };
enum class EventType { up, down };

struct Event {
  Time t;
  EventType type;
  VertexId u, v;

  friend bool operator==(const Event&, const Event&) = default;
};

// Canonical order: (t, UP before DOWN, lexicographic endpoints).
inline bool event_less(const Event& a, const Event& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.type != b.type) return a.type == EventType::up;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

struct EventStream {
  StreamKind kind = StreamKind::contact;
  Time eta = 1;        // resolution, positive, abstract units
  Time tau = 0;        // edge traversal time in units of eta
  VertexId nodes = 0;  // vertices are 0..nodes-1
  Time horizon = 0;    // events lie in [0, horizon]
  std::vector<Event> events;

  friend bool operator==(const EventStream&, const EventStream&) = default;

  bool same_shape(const EventStream& o) const {
    return kind == o.kind && eta == o.eta && nodes == o.nodes &&
           horizon == o.horizon;
  }
};

// A point of the sample grid {0, 1/2, 1, ..., T}: the instant `epoch` or the
// open interval (epoch, epoch+1).
struct SamplePoint {
  Time epoch = 0;
  bool open = false;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct Snapshot {
  SamplePoint at;
  std::vector<std::pair<VertexId, VertexId>> arcs;  // sorted

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

class StreamError : public std::runtime_error {
 public:
  StreamError(std::string code, std::string what)
      : std::runtime_error(std::move(what)), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ParseError : public StreamError {
 public:
  ParseError(std::string code, int line, const std::string& what)
      : StreamError(std::move(code),
                    "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Presence interval in units of eta. Meaning depends on the stream kind:
// [up, down) for contact, [up, down] for reach.
struct Interval {
  Time up, down;
  friend bool operator==(const Interval&, const Interval&) = default;
};

using PairIntervals = std::vector<std::pair<ArcKey, std::vector<Interval>>>;

// Groups events into per-pair interval lists. Assumes a canonical stream.
inline PairIntervals to_intervals(const EventStream& s) {
  std::vector<std::pair<ArcKey, std::vector<Interval>>> out;
  std::unordered_map<ArcKey, std::size_t> index;
  std::unordered_map<ArcKey, Time> open;
  for (const Event& e : s.events) {
    ArcKey key = arc_key(e.u, e.v);
    if (e.type == EventType::up) {
      open.emplace(key, e.t);
    } else {
      auto it = open.find(key);
      if (it == open.end())
        throw StreamError("DownWithoutUp", "down event without matching up");
      auto idx = index.find(key);
      if (idx == index.end()) {
        idx = index.emplace(key, out.size()).first;
        out.push_back({key, {}});
      }
      out[idx->second].second.push_back({it->second, e.t});
      open.erase(it);
    }
  }
  if (!open.empty())
    throw StreamError("UnclosedInterval", "up event without matching down");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// Rebuilds a canonical event vector from per-pair interval lists.
inline std::vector<Event> events_from_intervals(const PairIntervals& pairs) {
  std::vector<Event> events;
  for (const auto& [key, ivs] : pairs) {
    for (const Interval& iv : ivs) {
      events.push_back({iv.up, EventType::up, arc_from(key), arc_to(key)});
      events.push_back({iv.down, EventType::down, arc_from(key), arc_to(key)});
    }
  }
  std::sort(events.begin(), events.end(), event_less);
  return events;
}

// Sweeps the full sample grid in order: instant 0, open 0, instant 1, ...,
// instant T. The visitor receives the current arc set, which it must not
// retain across calls.
template <class Visitor>
void sweep_grid(const EventStream& s, Visitor&& visit) {
  ArcSet current;
  std::size_t i = 0;
  const std::size_t n = s.events.size();
  for (Time a = 0; a <= s.horizon; ++a) {
    if (s.kind == StreamKind::contact) {
      // Downs take effect at the instant itself.
      for (; i < n && s.events[i].t == a; ++i) {
        const Event& e = s.events[i];
        if (e.type == EventType::up)
          current.insert(arc_key(e.u, e.v));
        else
          current.erase(arc_key(e.u, e.v));
      }
      visit(SamplePoint{a, false}, current);
      if (a < s.horizon) visit(SamplePoint{a, true}, current);
    } else {
      // Ups first (instant value), then downs (open-interval value).
      for (; i < n && s.events[i].t == a && s.events[i].type == EventType::up;
           ++i)
        current.insert(arc_key(s.events[i].u, s.events[i].v));
      visit(SamplePoint{a, false}, current);
      for (; i < n && s.events[i].t == a; ++i)
        current.erase(arc_key(s.events[i].u, s.events[i].v));
      if (a < s.horizon) visit(SamplePoint{a, true}, current);
    }
  }
}

inline std::vector<std::pair<VertexId, VertexId>> sorted_pairs(
    const ArcSet& set) {
  std::vector<ArcKey> keys(set.begin(), set.end());
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(keys.size());
  for (ArcKey k : keys) out.push_back({arc_from(k), arc_to(k)});
  return out;
}

// P(t) for integer t, Q(k) for t = k + 1/2, under the stream's convention.
inline Snapshot snapshot_at(const EventStream& s, SamplePoint t) {
  if (t.epoch < 0 || t.epoch > s.horizon || (t.open && t.epoch == s.horizon))
    throw StreamError("TimeOutOfRange", "sample point outside [0, horizon]");
  Snapshot snap;
  snap.at = t;
  sweep_grid(s, [&](SamplePoint p, const ArcSet& set) {
    if (p == t) snap.arcs = sorted_pairs(set);
  });
  return snap;
}

// Parses "4" or "4.5" into a sample point.
inline SamplePoint parse_sample_point(const std::string& text) {
  std::string head = text;
  bool open = false;
  if (auto dot = text.find('.'); dot != std::string::npos) {
    if (text.substr(dot) != ".5")
      throw StreamError("BadSamplePoint",
                        "sample points are integers or half-integers");
    head = text.substr(0, dot);
    open = true;
  }
  try {
    return SamplePoint{std::stoll(head), open};
  } catch (const std::exception&) {
    throw StreamError("BadSamplePoint", "cannot parse time '" + text + "'");
  }
}

}  // namespace trg
