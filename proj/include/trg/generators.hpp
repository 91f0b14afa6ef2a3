#pragma once

// Seeded synthetic contact-trace generators: random waypoint motion with
// range-based beaconed connectivity, and an independent two-state Markov
// chain per edge. Identical configuration and seed give byte-identical
// output. Uniform variates are derived from raw mt19937_64 words so results
// do not depend on library distribution internals.

#include <cmath>
#include <random>

#include "trg/stream.hpp"
#include "trg/stream_io.hpp"

namespace trg {

struct RwpConfig {
  VertexId nodes = 0;
  double width = 0, height = 0;   // meters
  double speed_min = 0, speed_max = 0;  // m/s; one epoch is one second
  double range = 0;               // transmission range, meters
  Time beacon_period = 1;         // units of eta
  Time duration = 0;              // T, units of eta
  Time warmup = 0;                // epochs simulated and discarded
  double pause = 0;               // pause on waypoint arrival, seconds
  Time eta = 1;
  Time tau = 1;
  std::uint64_t seed = 0;
};

struct MarkovEdgeConfig {
  VertexId nodes = 0;
  double up_rate = 0, down_rate = 0;  // per-epoch transition probabilities
  Time duration = 0;
  Time eta = 1;
  Time tau = 1;
  std::uint64_t seed = 0;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Walker {
  double x = 0, y = 0;
  double tx = 0, ty = 0;  // current waypoint
  double speed = 1;
  double pause_left = 0;
};

inline void pick_waypoint(Walker& w, std::mt19937_64& rng, const RwpConfig& cfg) {
  w.tx = uniform(rng, 0, cfg.width);
  w.ty = uniform(rng, 0, cfg.height);
  w.speed = uniform(rng, cfg.speed_min, cfg.speed_max);
}

inline void advance(Walker& w, double dt, std::mt19937_64& rng,
                    const RwpConfig& cfg) {
  while (dt > 0) {
    if (w.pause_left > 0) {
      double step = std::min(w.pause_left, dt);
      w.pause_left -= step;
      dt -= step;
      continue;
    }
    double dx = w.tx - w.x, dy = w.ty - w.y;
    double dist = std::sqrt(dx * dx + dy * dy);
    double reach_time = dist / w.speed;
    if (reach_time > dt) {
      double f = dt * w.speed / dist;
      w.x += dx * f;
      w.y += dy * f;
      return;
    }
    w.x = w.tx;
    w.y = w.ty;
    dt -= reach_time;
    w.pause_left = cfg.pause;
    pick_waypoint(w, rng, cfg);
  }
}

}  // namespace detail

// Nodes move between uniform waypoints; an undirected edge is present during
// [kP, (k+1)P) iff the pairwise distance is within range at beacon instant
// kP. Stationarity is approximated by discarding a warm-up window.
inline EventStream generate_rwp(const RwpConfig& cfg) {
  if (cfg.nodes == 0) throw StreamError("BadConfig", "nodes must be positive");
  if (cfg.width <= 0 || cfg.height <= 0)
    throw StreamError("BadConfig", "degenerate area");
  if (cfg.speed_min <= 0 || cfg.speed_max < cfg.speed_min)
    throw StreamError("BadConfig", "speeds must be positive");
  if (cfg.range <= 0) throw StreamError("BadConfig", "range must be positive");
  if (cfg.beacon_period < 1 || cfg.duration < 0 || cfg.warmup < 0 ||
      cfg.pause < 0)
    throw StreamError("BadConfig", "invalid time parameters");

  std::mt19937_64 rng(detail::mix_seed(cfg.seed, 0));
  std::vector<detail::Walker> walkers(cfg.nodes);
  for (auto& w : walkers) {
    w.x = detail::uniform(rng, 0, cfg.width);
    w.y = detail::uniform(rng, 0, cfg.height);
    detail::pick_waypoint(w, rng, cfg);
  }
  for (Time t = 0; t < cfg.warmup; ++t)
    for (auto& w : walkers) detail::advance(w, 1.0, rng, cfg);

  // Beacon sampling: connectivity is evaluated at multiples of the beacon
  // period and held for one period.
  std::vector<ContactInterval> intervals;
  std::unordered_map<ArcKey, Time> open;
  const double range2 = cfg.range * cfg.range;
  for (Time t = 0; t < cfg.duration; ++t) {
    if (t % cfg.beacon_period == 0) {
      for (VertexId u = 0; u < cfg.nodes; ++u) {
        for (VertexId v = u + 1; v < cfg.nodes; ++v) {
          double dx = walkers[u].x - walkers[v].x;
          double dy = walkers[u].y - walkers[v].y;
          bool near = dx * dx + dy * dy <= range2;
          ArcKey key = arc_key(u, v);
          auto it = open.find(key);
          if (near && it == open.end()) {
            open.emplace(key, t);
          } else if (!near && it != open.end()) {
            intervals.push_back({u, v, it->second * cfg.eta, t * cfg.eta});
            open.erase(it);
          }
        }
      }
    }
    for (auto& w : walkers) detail::advance(w, 1.0, rng, cfg);
  }
  for (const auto& [key, since] : open)
    intervals.push_back({arc_from(key), arc_to(key), since * cfg.eta,
                         cfg.duration * cfg.eta});
  return import_contact_trace(intervals, cfg.eta, cfg.tau, cfg.nodes,
                              cfg.duration);
}

// Every unordered pair evolves as an independent two-state chain, one step
// per epoch, starting down. Up-runs become half-open contact intervals.
inline EventStream generate_markov(const MarkovEdgeConfig& cfg) {
  if (cfg.nodes == 0) throw StreamError("BadConfig", "nodes must be positive");
  if (cfg.up_rate < 0 || cfg.up_rate > 1 || cfg.down_rate < 0 ||
      cfg.down_rate > 1)
    throw StreamError("BadConfig", "rates must lie in [0, 1]");
  if (cfg.duration < 0) throw StreamError("BadConfig", "invalid duration");

  std::vector<ContactInterval> intervals;
  std::uint64_t pair_index = 0;
  for (VertexId u = 0; u < cfg.nodes; ++u) {
    for (VertexId v = u + 1; v < cfg.nodes; ++v, ++pair_index) {
      std::mt19937_64 rng(detail::mix_seed(cfg.seed, pair_index));
      bool up = false;
      Time since = 0;
      for (Time t = 1; t < cfg.duration; ++t) {
        double p = detail::uniform01(rng);
        bool next = up ? (p >= cfg.down_rate) : (p < cfg.up_rate);
        if (next && !up) since = t;
        if (!next && up)
          intervals.push_back({u, v, since * cfg.eta, t * cfg.eta});
        up = next;
      }
      if (up)
        intervals.push_back({u, v, since * cfg.eta, cfg.duration * cfg.eta});
    }
  }
  return import_contact_trace(intervals, cfg.eta, cfg.tau, cfg.nodes,
                              cfg.duration);
}

// Flat key=value configuration files (one pair per line, '#' comments).
inline std::map<std::string, std::string> parse_kv_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("MalformedConfig", lineno, "expected key=value");
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace trg
