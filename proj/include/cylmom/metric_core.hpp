#pragma once

// Length-metric primitives on sampled metric spaces: polyline lengths,
// graph-induced length metrics, shortest-path and geodesic predicates, and a
// sampled convexity checker.  All distances are extended reals; +inf marks
// unreachable pairs.

#include "cylmom/common.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <utility>

namespace cylmom {

// A metric space handle: points are coordinate vectors, dist is the metric.
struct MetricSpace {
  std::function<double(const Vec&, const Vec&)> dist;
};

inline MetricSpace euclidean_space() {
  return MetricSpace{[](const Vec& a, const Vec& b) { return (a - b).norm(); }};
}

// Ordered sample points together with the metric they live in.
struct Polyline {
  MetricSpace space;
  std::vector<Vec> points;
};

// Sum of consecutive distances.  A one-point polyline has length zero.
inline double polyline_length(const Polyline& c) {
  if (c.points.empty()) throw std::invalid_argument("polyline_length: empty polyline");
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    len += c.space.dist(c.points[i], c.points[i + 1]);
  }
  return len;
}

namespace detail {

struct GraphMetricState {
  std::vector<Vec> samples;
  std::vector<std::vector<std::pair<int, double>>> adj;  // node -> (node, weight)
  std::map<int, std::vector<double>> dijkstra_cache;     // source -> distances
};

inline const std::vector<double>& dijkstra_from(GraphMetricState& st, int src) {
  auto it = st.dijkstra_cache.find(src);
  if (it != st.dijkstra_cache.end()) return it->second;
  const int n = static_cast<int>(st.samples.size());
  std::vector<double> dist(n, kInf);
  dist[src] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : st.adj[u]) {
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  return st.dijkstra_cache.emplace(src, std::move(dist)).first->second;
}

}  // namespace detail

// Length metric induced on a sample set by graph shortest paths.  Edge weights
// are base-space distances of adjacent samples; pairs in different graph
// components are at distance +inf.
class GraphMetric {
 public:
  GraphMetric(std::vector<Vec> samples, const std::vector<std::pair<int, int>>& adjacency,
              const MetricSpace& base)
      : st_(std::make_shared<detail::GraphMetricState>()) {
    st_->samples = std::move(samples);
    const int n = static_cast<int>(st_->samples.size());
    if (n == 0) throw std::invalid_argument("GraphMetric: no samples");
    st_->adj.resize(n);
    for (auto [i, j] : adjacency) {
      if (i < 0 || j < 0 || i >= n || j >= n) {
        throw std::invalid_argument("GraphMetric: adjacency index out of range");
      }
      if (i == j) continue;
      double w = base.dist(st_->samples[i], st_->samples[j]);
      if (!(w >= 0.0)) throw std::invalid_argument("GraphMetric: negative or NaN edge weight");
      if (!std::isfinite(w)) continue;
      st_->adj[i].push_back({j, w});
      st_->adj[j].push_back({i, w});
    }
  }

  double between(int i, int j) const { return detail::dijkstra_from(*st_, i)[j]; }

  const std::vector<double>& from(int i) const { return detail::dijkstra_from(*st_, i); }

  int size() const { return static_cast<int>(st_->samples.size()); }

  const std::vector<Vec>& samples() const { return st_->samples; }

  // Metric handle over the sample points themselves.  Arguments must coincide
  // with sample coordinates (matched exactly, then within 1e-9).
  MetricSpace space() const {
    auto st = st_;
    return MetricSpace{[st](const Vec& a, const Vec& b) {
      int ia = locate(*st, a);
      int ib = locate(*st, b);
      return detail::dijkstra_from(*st, ia)[ib];
    }};
  }

 private:
  static int locate(const detail::GraphMetricState& st, const Vec& p) {
    int best = -1;
    double best_d = kInf;
    for (std::size_t i = 0; i < st.samples.size(); ++i) {
      if (st.samples[i].size() != p.size()) {
        throw std::invalid_argument("GraphMetric: point dimension mismatch");
      }
      double d = (st.samples[i] - p).norm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best_d > 1e-9) {
      throw std::invalid_argument("GraphMetric: point is not one of the samples");
    }
    return best;
  }

  std::shared_ptr<detail::GraphMetricState> st_;
};

inline GraphMetric induced_length_metric(std::vector<Vec> samples,
                                         const std::vector<std::pair<int, int>>& adjacency,
                                         const MetricSpace& base) {
  return GraphMetric(std::move(samples), adjacency, base);
}

// True when the polyline realizes the distance between its endpoints:
// length <= dist(first, last) + tol.
inline bool is_shortest_path(const Polyline& c, double tol) {
  if (c.points.size() < 2) return true;
  double len = polyline_length(c);
  double d = c.space.dist(c.points.front(), c.points.back());
  return len <= d + tol;
}

// True when every window of at most `window` consecutive points is a shortest
// path.  A closed loop can be a geodesic without being a shortest path.
inline bool is_geodesic(const Polyline& c, int window, double tol) {
  if (window < 2) throw std::invalid_argument("is_geodesic: window must be >= 2");
  const int n = static_cast<int>(c.points.size());
  for (int i = 0; i < n; ++i) {
    for (int w = 2; w <= window && i + w <= n; ++w) {
      Polyline sub{c.space, {c.points.begin() + i, c.points.begin() + i + w}};
      if (!is_shortest_path(sub, tol)) return false;
    }
  }
  return true;
}

// Enumerates connecting paths between two points.  An empty result means no
// geodesic is available for the pair.
using GeodesicOracle = std::function<std::vector<Polyline>(const Vec&, const Vec&)>;

struct ConvexityReport {
  bool is_convex = true;
  std::optional<std::pair<int, int>> witness_pair;  // worst failing sample pair
  double max_gap = 0.0;  // largest over pairs of the best path's set clearance
  int pairs_checked = 0;
};

struct ConvexityOptions {
  double tol = kEpsMetric;
  int pair_budget = 2000;   // pairs beyond this are subsampled deterministically
  std::uint64_t seed = 17;  // subsampling seed
};

// Checks that some oracle path between every (sampled) pair of subset points
// stays within tol of the subset samples.  With a minimizing-geodesic oracle
// this tests convexity; with an oracle that also enumerates non-minimizing
// geodesics it tests weak convexity.
inline ConvexityReport check_convex_subset(const std::vector<Vec>& samples,
                                           const MetricSpace& space, const GeodesicOracle& oracle,
                                           const ConvexityOptions& opt = {}) {
  ConvexityReport rep;
  const int n = static_cast<int>(samples.size());
  if (n < 2) return rep;

  std::vector<std::pair<int, int>> pairs;
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  if (total <= opt.pair_budget) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  } else {
    std::mt19937_64 rng(opt.seed);
    std::vector<std::pair<int, int>> seen;
    while (static_cast<int>(pairs.size()) < opt.pair_budget) {
      int i = uniform_int(rng, 0, n - 1);
      int j = uniform_int(rng, 0, n - 1);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) != pairs.end()) continue;
      pairs.push_back({i, j});
    }
  }

  auto clearance = [&](const Vec& w) {
    double best = kInf;
    for (const Vec& s : samples) best = std::min(best, space.dist(w, s));
    return best;
  };

  for (auto [i, j] : pairs) {
    ++rep.pairs_checked;
    auto paths = oracle(samples[i], samples[j]);
    double pair_gap = kInf;  // no path at all -> unverifiable pair
    for (const Polyline& path : paths) {
      double g = 0.0;
      for (const Vec& w : path.points) g = std::max(g, clearance(w));
      pair_gap = std::min(pair_gap, g);
      if (pair_gap <= opt.tol) break;
    }
    if (pair_gap > rep.max_gap) {
      rep.max_gap = pair_gap;
      if (pair_gap > opt.tol) rep.witness_pair = {i, j};
    }
    if (pair_gap > opt.tol) rep.is_convex = false;
  }
  return rep;
}

}  // namespace cylmom
