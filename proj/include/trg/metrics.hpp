#pragma once

// Per-epoch connectivity metrics over reachability streams. Metrics read the
// open-interval (mid-epoch) value of each epoch: the time spent exactly at
// epoch starts has measure zero, so instant-only ephemeral arcs never affect
// averages.

#include <cmath>
#include <cstdio>

#include "trg/stream.hpp"

namespace trg {

struct EpochMetrics {
  Time epoch = 0;
  std::size_t arcs = 0;       // ||R_k||
  double density = 0.0;       // arcs / N(N-1)
  std::size_t sym_pairs = 0;  // unordered pairs connected both ways
  std::size_t asym_pairs = 0; // unordered pairs connected one way
  double asymmetry = 0.0;     // asym / (asym + sym); 0 for arc-free epochs
  std::size_t ds_size = 0;    // greedy time-varying dominating set size
};

struct MetricsAverages {
  double density = 0.0;
  double asymmetry = 0.0;
  double ds_size = 0.0;  // normalized by N
};

struct MetricsSeries {
  VertexId nodes = 0;
  Time epochs = 0;
  std::vector<EpochMetrics> per_epoch;
  MetricsAverages averages;
};

struct TvdsSeries {
  std::vector<std::pair<Time, std::vector<VertexId>>> changes;
  std::vector<std::size_t> size_per_epoch;
};

inline bool dominates(const std::vector<VertexId>& set, const ArcSet& arcs,
                      VertexId n) {
  std::vector<bool> covered(n, false);
  for (VertexId u : set) {
    covered[u] = true;
    for (ArcKey k : arcs)
      if (arc_from(k) == u) covered[arc_to(k)] = true;
  }
  for (VertexId v = 0; v < n; ++v)
    if (!covered[v]) return false;
  return true;
}

namespace detail {

// Greedy dominating set: repeatedly add the vertex covering the most
// uncovered vertices (itself plus out-neighbors); ties prefer members of the
// previous set, then the lowest id.
inline std::vector<VertexId> greedy_dominating_set(
    const ArcSet& arcs, VertexId n, const std::vector<VertexId>& previous) {
  std::vector<std::vector<VertexId>> out_adj(n);
  for (ArcKey k : arcs) out_adj[arc_from(k)].push_back(arc_to(k));
  std::vector<bool> in_previous(n, false);
  for (VertexId u : previous) in_previous[u] = true;

  std::vector<bool> covered(n, false);
  std::size_t uncovered = n;
  std::vector<VertexId> set;
  while (uncovered > 0) {
    VertexId best = 0;
    std::size_t best_gain = 0;
    bool best_prev = false;
    for (VertexId u = 0; u < n; ++u) {
      std::size_t gain = covered[u] ? 0 : 1;
      for (VertexId v : out_adj[u]) gain += covered[v] ? 0 : 1;
      if (gain == 0) continue;
      if (gain > best_gain || (gain == best_gain && in_previous[u] && !best_prev)) {
        best = u;
        best_gain = gain;
        best_prev = in_previous[u];
      }
    }
    set.push_back(best);
    if (!covered[best]) {
      covered[best] = true;
      --uncovered;
    }
    for (VertexId v : out_adj[best])
      if (!covered[v]) {
        covered[v] = true;
        --uncovered;
      }
  }
  std::sort(set.begin(), set.end());
  return set;
}

}  // namespace detail

// Event-driven dominating-set series: the set is rebuilt only at epochs whose
// arc set changed and whose change broke domination.
inline TvdsSeries tvds_series(const EventStream& r) {
  if (r.kind != StreamKind::reach)
    throw StreamError("KindMismatch", "metrics need a reach stream");
  TvdsSeries series;
  std::vector<VertexId> current;
  bool have_current = false;
  ArcSet prev_arcs;
  sweep_grid(r, [&](SamplePoint p, const ArcSet& arcs) {
    if (!p.open) return;
    bool changed = !have_current || arcs != prev_arcs;
    if (changed && (!have_current || !dominates(current, arcs, r.nodes))) {
      current = detail::greedy_dominating_set(arcs, r.nodes, current);
      series.changes.push_back({p.epoch, current});
    }
    have_current = true;
    prev_arcs = arcs;
    series.size_per_epoch.push_back(current.size());
  });
  return series;
}

inline MetricsSeries compute_metrics(const EventStream& r) {
  if (r.kind != StreamKind::reach)
    throw StreamError("KindMismatch", "metrics need a reach stream");
  MetricsSeries series;
  series.nodes = r.nodes;
  series.epochs = r.horizon;
  const double possible_arcs =
      static_cast<double>(r.nodes) * (r.nodes > 0 ? r.nodes - 1 : 0);

  TvdsSeries tvds = tvds_series(r);
  Time epoch = 0;
  sweep_grid(r, [&](SamplePoint p, const ArcSet& arcs) {
    if (!p.open) return;
    EpochMetrics em;
    em.epoch = epoch;
    em.arcs = arcs.size();
    em.density = possible_arcs > 0 ? em.arcs / possible_arcs : 0.0;
    std::size_t sym_arcs = 0;
    for (ArcKey k : arcs)
      if (arcs.count(arc_key(arc_to(k), arc_from(k)))) ++sym_arcs;
    em.sym_pairs = sym_arcs / 2;
    em.asym_pairs = em.arcs - sym_arcs;
    std::size_t connected_pairs = em.sym_pairs + em.asym_pairs;
    em.asymmetry = connected_pairs > 0
                       ? static_cast<double>(em.asym_pairs) / connected_pairs
                       : 0.0;
    em.ds_size = tvds.size_per_epoch[static_cast<std::size_t>(epoch)];
    series.per_epoch.push_back(em);
    ++epoch;
  });

  if (!series.per_epoch.empty()) {
    double density = 0, asymmetry = 0, ds = 0;
    for (const EpochMetrics& em : series.per_epoch) {
      density += em.density;
      asymmetry += em.asymmetry;
      ds += static_cast<double>(em.ds_size);
    }
    double n = static_cast<double>(series.per_epoch.size());
    series.averages.density = density / n;
    series.averages.asymmetry = asymmetry / n;
    series.averages.ds_size = ds / (n * r.nodes);
  }
  return series;
}

// Per-epoch fractions of the N(N-1)/2 unordered pairs connected in both
// directions / exactly one direction.
inline std::vector<std::pair<double, double>> pair_connectivity_series(
    const EventStream& r) {
  MetricsSeries series = compute_metrics(r);
  double pairs = static_cast<double>(r.nodes) *
                 (r.nodes > 0 ? r.nodes - 1 : 0) / 2.0;
  std::vector<std::pair<double, double>> out;
  out.reserve(series.per_epoch.size());
  for (const EpochMetrics& em : series.per_epoch)
    out.push_back(pairs > 0
                      ? std::pair<double, double>{em.sym_pairs / pairs,
                                                  em.asym_pairs / pairs}
                      : std::pair<double, double>{0.0, 0.0});
  return out;
}

// Fixed 6-decimal formatting keeps golden files stable.
inline std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

inline std::string metrics_csv(const MetricsSeries& series) {
  std::string out = "epoch,arcs,density,sym_pairs,asym_pairs,asymmetry,ds_size\n";
  for (const EpochMetrics& em : series.per_epoch) {
    out += std::to_string(em.epoch) + "," + std::to_string(em.arcs) + "," +
           format_fixed(em.density) + "," + std::to_string(em.sym_pairs) +
           "," + std::to_string(em.asym_pairs) + "," +
           format_fixed(em.asymmetry) + "," + std::to_string(em.ds_size) +
           "\n";
  }
  return out;
}

}  // namespace trg
