#pragma once

// Local-to-global harness over sampled maps: fiber-component quotients, the
// induced quotient pseudometric, the three local conditions (fiber
// connectedness, openness onto the image, convexity of small images) and
// sampled weak-convexity verification of the image.
//
// Everything here is a finite-sample proxy: verdicts depend on the mesh, the
// fiber bucketing scale and the declared coverage threshold, and every report
// carries that disclaimer.

#include "cylmom/common.hpp"
#include "cylmom/flat_cylinder.hpp"
#include "cylmom/metric_core.hpp"

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>

namespace cylmom {

struct TargetSpace {
  int dim = 0;
  std::optional<ClosedSubgroup> quotient;  // empty: Euclidean R^dim
  MetricSpace space;
};

inline TargetSpace euclidean_target(int dim) {
  return TargetSpace{dim, std::nullopt, euclidean_space()};
}

inline TargetSpace cylinder_target(const ClosedSubgroup& H) {
  return TargetSpace{H.ambient_dim, H, cylinder_space(H)};
}

// Minimizing geodesics between target points (all ties).
inline std::vector<Polyline> target_minimizing_geodesics(const TargetSpace& T, const Vec& a,
                                                         const Vec& b, int steps = 16) {
  std::vector<Polyline> out;
  if (!T.quotient) {
    Polyline seg{T.space, {}};
    for (int j = 0; j <= steps; ++j) seg.points.push_back(a + (b - a) * (double(j) / steps));
    out.push_back(std::move(seg));
    return out;
  }
  const ClosedSubgroup& H = *T.quotient;
  CylinderPoint p{a}, q{b};
  for (const auto& lift : enumerate_minimizing_lifts(H, p, q)) {
    out.push_back(geodesic_polyline(H, p, q, lift, steps));
  }
  return out;
}

// Geodesics including non-minimizing ones, lattice coefficients expanded by
// box_radius around the closest-vector center; sorted by length.
inline std::vector<Polyline> target_geodesics_expanded(const TargetSpace& T, const Vec& a,
                                                       const Vec& b, int steps = 16,
                                                       int box_radius = 3) {
  if (!T.quotient) return target_minimizing_geodesics(T, a, b, steps);
  const ClosedSubgroup& H = *T.quotient;
  CylinderPoint p{a}, q{b};
  std::vector<Polyline> out;
  for (const auto& lift : lifts_in_expanded_box(H, p, q, box_radius)) {
    out.push_back(geodesic_polyline(H, p, q, lift, steps));
  }
  return out;
}

// A map sampled on a mesh: domain points with adjacency, values in a target
// space (canonical representatives).  interior may be empty (all interior) or
// flag points with a complete, artifact-free neighborhood.
struct SampledMap {
  std::vector<Vec> domain_points;
  std::vector<std::pair<int, int>> adjacency;
  std::vector<Vec> values;
  TargetSpace target;
  std::vector<bool> interior;

  bool is_interior(int i) const { return interior.empty() || interior[i]; }
};

inline void validate_sampled_map(const SampledMap& f) {
  const int n = static_cast<int>(f.domain_points.size());
  if (n == 0) throw std::invalid_argument("SampledMap: empty");
  if (f.values.size() != f.domain_points.size()) {
    throw std::invalid_argument("SampledMap: values/domain size mismatch");
  }
  if (!f.interior.empty() && f.interior.size() != f.domain_points.size()) {
    throw std::invalid_argument("SampledMap: interior flag size mismatch");
  }
  for (const Vec& v : f.values) {
    if (v.size() != f.target.dim) throw std::invalid_argument("SampledMap: value dim mismatch");
  }
  for (auto [i, j] : f.adjacency) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("SampledMap: adjacency index out of range");
    }
  }
}

using ValueFn = std::function<Vec(const Vec&)>;

// Uniform grid on a box, axis-neighbor adjacency, faces marked non-interior.
inline SampledMap box_mesh(const Vec& lo, const Vec& hi, const std::vector<int>& res,
                           const ValueFn& value, const TargetSpace& target) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d || static_cast<int>(res.size()) != d || d == 0) {
    throw std::invalid_argument("box_mesh: dimension mismatch");
  }
  long long total = 1;
  for (int r : res) {
    if (r < 2) throw std::invalid_argument("box_mesh: resolution must be >= 2");
    total *= r;
    if (total > 2'000'000) throw std::invalid_argument("box_mesh: too many nodes");
  }
  SampledMap f;
  f.target = target;
  std::vector<long long> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * res[a - 1];
  std::vector<int> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    Vec x(d);
    bool boundary = false;
    for (int a = 0; a < d; ++a) {
      x[a] = lo[a] + (hi[a] - lo[a]) * (double(idx[a]) / (res[a] - 1));
      boundary = boundary || idx[a] == 0 || idx[a] == res[a] - 1;
    }
    f.domain_points.push_back(x);
    f.values.push_back(value(x));
    f.interior.push_back(!boundary);
    for (int a = 0; a < d; ++a) {
      if (idx[a] + 1 < res[a]) f.adjacency.push_back({int(flat), int(flat + stride[a])});
    }
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < res[a]) break;
      idx[a] = 0;
    }
  }
  return f;
}

// Uniform grid on a torus with finite periods, wraparound adjacency, no
// boundary (all points interior).
inline SampledMap wrapped_grid_mesh(const Vec& periods, int res, const ValueFn& value,
                                    const TargetSpace& target) {
  const int d = static_cast<int>(periods.size());
  if (d == 0 || res < 3) throw std::invalid_argument("wrapped_grid_mesh: bad arguments");
  long long total = 1;
  for (int a = 0; a < d; ++a) {
    if (!std::isfinite(periods[a])) {
      throw std::invalid_argument("wrapped_grid_mesh: periods must be finite");
    }
    total *= res;
    if (total > 2'000'000) throw std::invalid_argument("wrapped_grid_mesh: too many nodes");
  }
  SampledMap f;
  f.target = target;
  std::vector<long long> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * res;
  std::vector<int> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    Vec x(d);
    for (int a = 0; a < d; ++a) x[a] = periods[a] * (double(idx[a]) / res);
    f.domain_points.push_back(x);
    f.values.push_back(value(x));
    for (int a = 0; a < d; ++a) {
      long long nb = flat - idx[a] * stride[a] + ((idx[a] + 1) % res) * stride[a];
      f.adjacency.push_back({int(flat), int(nb)});
    }
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < res) break;
      idx[a] = 0;
    }
  }
  return f;
}

// Polar product mesh on C^m intersected with the closed ball of radius R.
// Ring radii are area-uniform, r_i = R sqrt(i / n_r), so the ball constraint
// is the exact integer condition sum_f i_f <= n_r; nodes with slack are
// interior.  The value callback receives z = (x_1, y_1, ..., x_m, y_m).
inline SampledMap polar_ball_mesh(int m, double R, int n_r, int n_theta, const ValueFn& value,
                                  const TargetSpace& target) {
  if (m < 1 || R <= 0.0 || n_r < 2 || n_theta < 4) {
    throw std::invalid_argument("polar_ball_mesh: bad arguments");
  }
  const int F = 1 + n_r * n_theta;  // factor nodes: origin plus rings
  double fn = 1.0;
  for (int f = 0; f < m; ++f) fn *= F;
  if (fn > 2'000'000) throw std::invalid_argument("polar_ball_mesh: too many nodes");

  auto ring_of = [&](int node) { return node == 0 ? 0 : 1 + (node - 1) / n_theta; };
  std::vector<double> ring_r(n_r + 1);
  for (int i = 0; i <= n_r; ++i) ring_r[i] = R * std::sqrt(double(i) / n_r);
  auto coords_of = [&](int node) -> std::pair<double, double> {
    if (node == 0) return {0.0, 0.0};
    int i = ring_of(node), j = (node - 1) % n_theta;
    double th = 2.0 * kPi * j / n_theta;
    return {ring_r[i] * std::cos(th), ring_r[i] * std::sin(th)};
  };
  std::vector<std::vector<int>> fadj(F);
  auto fnode = [&](int i, int j) { return 1 + (i - 1) * n_theta + ((j % n_theta + n_theta) % n_theta); };
  for (int j = 0; j < n_theta; ++j) {
    fadj[0].push_back(fnode(1, j));
    fadj[fnode(1, j)].push_back(0);
  }
  for (int i = 1; i <= n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      fadj[fnode(i, j)].push_back(fnode(i, j + 1));
      fadj[fnode(i, j + 1)].push_back(fnode(i, j));
      if (i < n_r) {
        fadj[fnode(i, j)].push_back(fnode(i + 1, j));
        fadj[fnode(i + 1, j)].push_back(fnode(i, j));
      }
    }
  }

  const long long total = static_cast<long long>(std::llround(fn));
  std::vector<int> keep_id(total, -1);
  std::vector<int> comp(m, 0);
  SampledMap f;
  f.target = target;
  std::vector<std::vector<int>> node_comps;
  for (long long flat = 0; flat < total; ++flat) {
    int ring_sum = 0;
    for (int a = 0; a < m; ++a) ring_sum += ring_of(comp[a]);
    if (ring_sum <= n_r) {
      keep_id[flat] = static_cast<int>(f.domain_points.size());
      Vec z(2 * m);
      for (int a = 0; a < m; ++a) {
        auto [x, y] = coords_of(comp[a]);
        z[2 * a] = x;
        z[2 * a + 1] = y;
      }
      f.domain_points.push_back(z);
      f.values.push_back(value(z));
      f.interior.push_back(ring_sum < n_r);
      node_comps.push_back(comp);
    }
    for (int a = 0; a < m; ++a) {
      if (++comp[a] < F) break;
      comp[a] = 0;
    }
  }
  std::vector<long long> stride(m, 1);
  for (int a = 1; a < m; ++a) stride[a] = stride[a - 1] * F;
  for (long long flat = 0; flat < total; ++flat) {
    if (keep_id[flat] < 0) continue;
    const auto& c = node_comps[keep_id[flat]];
    for (int a = 0; a < m; ++a) {
      for (int nb : fadj[c[a]]) {
        if (nb <= c[a]) continue;  // dedupe within the factor
        long long nbflat = flat + (nb - c[a]) * stride[a];
        if (keep_id[nbflat] >= 0) f.adjacency.push_back({keep_id[flat], keep_id[nbflat]});
      }
    }
  }
  return f;
}

// Product of two sampled maps with combined values.
inline SampledMap product_mesh(const SampledMap& A, const SampledMap& B,
                               const std::function<Vec(const Vec&, const Vec&)>& combine,
                               const TargetSpace& target) {
  const long long na = static_cast<long long>(A.domain_points.size());
  const long long nb = static_cast<long long>(B.domain_points.size());
  if (na * nb > 2'000'000) throw std::invalid_argument("product_mesh: too many nodes");
  SampledMap f;
  f.target = target;
  auto flat = [&](long long a, long long b) { return static_cast<int>(a * nb + b); };
  for (long long a = 0; a < na; ++a) {
    for (long long b = 0; b < nb; ++b) {
      Vec x(A.domain_points[a].size() + B.domain_points[b].size());
      x << A.domain_points[a], B.domain_points[b];
      f.domain_points.push_back(x);
      f.values.push_back(combine(A.values[a], B.values[b]));
      f.interior.push_back(A.is_interior(static_cast<int>(a)) &&
                           B.is_interior(static_cast<int>(b)));
    }
  }
  for (auto [i, j] : A.adjacency) {
    for (long long b = 0; b < nb; ++b) f.adjacency.push_back({flat(i, b), flat(j, b)});
  }
  for (auto [i, j] : B.adjacency) {
    for (long long a = 0; a < na; ++a) f.adjacency.push_back({flat(a, i), flat(a, j)});
  }
  return f;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[y] = x;
    return true;
  }
};

// Canonical deduplicated edge list (i < j).
inline std::vector<std::pair<int, int>> canonical_edges(const SampledMap& f) {
  std::set<std::pair<int, int>> s;
  const int n = static_cast<int>(f.domain_points.size());
  for (auto [i, j] : f.adjacency) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("SampledMap: adjacency index out of range");
    }
    if (i == j) continue;
    s.insert({std::min(i, j), std::max(i, j)});
  }
  return {s.begin(), s.end()};
}

// Cheap lower bound on the target distance of two values, used to prefilter
// the quadratic proximity scan.
struct ValueKey {
  Vec t;     // lattice coordinates (empty when Euclidean)
  Vec free;  // representative minus its lattice-span component
};

inline std::vector<ValueKey> value_keys(const TargetSpace& T, const std::vector<Vec>& values) {
  std::vector<ValueKey> keys(values.size());
  if (!T.quotient || T.quotient->b() == 0) {
    for (std::size_t i = 0; i < values.size(); ++i) keys[i] = {Vec(0), values[i]};
    return keys;
  }
  const ClosedSubgroup& H = *T.quotient;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Vec t = lattice_coords(H, values[i]);
    keys[i] = {t, values[i] - H.lat.transpose() * t};
  }
  return keys;
}

inline double value_lower_bound(const TargetSpace& T, const ValueKey& a, const ValueKey& b) {
  double lb = 0.0;
  for (int c = 0; c < a.free.size(); ++c) lb = std::max(lb, std::abs(a.free[c] - b.free[c]));
  if (a.t.size() > 0) {
    const double sigma = T.quotient->sigma_min;
    for (int c = 0; c < a.t.size(); ++c) {
      double d = std::abs(a.t[c] - b.t[c]);
      d = std::min(d - std::floor(d), std::ceil(d) - d);  // wrapped to nearest integer
      lb = std::max(lb, sigma * d);
    }
  }
  return lb;
}

inline std::vector<ValueKey> value_keys(const SampledMap& f) {
  return value_keys(f.target, f.values);
}

}  // namespace detail

struct FiberQuotient {
  std::vector<int> bucket_of;      // point -> fiber bucket (value cluster)
  std::vector<int> component_of;   // point -> fiber component (global ids)
  std::vector<Vec> bucket_value;   // bucket -> representative value
  std::vector<int> component_bucket;  // component -> bucket
  std::vector<int> component_rep;    // component -> one member point
  std::vector<std::pair<int, int>> edges;   // canonical domain edges
  std::vector<double> edge_image_length;    // target distance across each edge
  std::vector<std::vector<std::pair<int, double>>> weighted_adj;  // image-length weights
  std::map<std::pair<int, int>, double> quotient_edges;  // touching components
  int domain_components = 0;
  double eps_fiber = 0.0;
  std::vector<std::string> warnings;
};

// Buckets values by single-linkage at eps_fiber, splits each bucket into
// connected components of the domain graph, and assembles the component
// quotient with minimal image distances across touching components.
inline FiberQuotient build_fiber_quotient(const SampledMap& f, double eps_fiber,
                                          int fragmentation_bound = -1) {
  if (!(eps_fiber > 0.0)) throw std::invalid_argument("build_fiber_quotient: eps_fiber must be > 0");
  const int n = static_cast<int>(f.domain_points.size());
  if (n == 0) throw std::invalid_argument("build_fiber_quotient: empty map");
  if (f.values.size() != f.domain_points.size()) {
    throw std::invalid_argument("build_fiber_quotient: values/domain size mismatch");
  }
  FiberQuotient q;
  q.eps_fiber = eps_fiber;
  q.edges = detail::canonical_edges(f);

  // Single-linkage value clustering with a prefiltered quadratic scan.
  auto keys = detail::value_keys(f);
  detail::UnionFind buckets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (detail::value_lower_bound(f.target, keys[i], keys[j]) > eps_fiber) continue;
      if (f.target.space.dist(f.values[i], f.values[j]) <= eps_fiber) buckets.unite(i, j);
    }
  }
  q.bucket_of.resize(n);
  std::map<int, int> bucket_ids;
  for (int i = 0; i < n; ++i) {
    int root = buckets.find(i);
    auto [it, fresh] = bucket_ids.emplace(root, static_cast<int>(bucket_ids.size()));
    q.bucket_of[i] = it->second;
    if (fresh) q.bucket_value.push_back(f.values[i]);
  }

  q.edge_image_length.reserve(q.edges.size());
  for (auto [i, j] : q.edges) {
    q.edge_image_length.push_back(f.target.space.dist(f.values[i], f.values[j]));
  }

  // Single-linkage can chain two far blobs of one bucket through a lone
  // spurious mesh edge.  A bridge in the intra-bucket graph whose removal
  // leaves two substantial sides (>= 4 points each) is cut, keeping the
  // components separate, with a warning.  Genuine merges are witnessed by
  // several edges (fibers on the built-in meshes are cycles or tori).
  std::vector<char> cut(q.edges.size(), 0);
  int cut_count = 0;
  {
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    detail::UnionFind pre(n);
    for (std::size_t e = 0; e < q.edges.size(); ++e) {
      auto [i, j] = q.edges[e];
      if (q.bucket_of[i] != q.bucket_of[j]) continue;
      adj[i].push_back({j, static_cast<int>(e)});
      adj[j].push_back({i, static_cast<int>(e)});
      pre.unite(i, j);
    }
    std::vector<int> pre_size(n, 0);
    for (int p = 0; p < n; ++p) ++pre_size[pre.find(p)];
    std::vector<int> tin(n, -1), low(n, 0), sub(n, 1);
    int timer = 0;
    std::function<void(int, int)> dfs = [&](int v, int pe) {
      tin[v] = low[v] = timer++;
      for (auto [to, e] : adj[v]) {
        if (e == pe) continue;
        if (tin[to] != -1) {
          low[v] = std::min(low[v], tin[to]);
        } else {
          dfs(to, e);
          sub[v] += sub[to];
          low[v] = std::min(low[v], low[to]);
          if (low[to] > tin[v]) {
            int total = pre_size[pre.find(v)];
            if (std::min(sub[to], total - sub[to]) >= 4) {
              cut[e] = 1;
              ++cut_count;
            }
          }
        }
      }
    };
    for (int v = 0; v < n; ++v) {
      if (tin[v] == -1 && !adj[v].empty()) dfs(v, -1);
    }
  }
  if (cut_count > 0) {
    q.warnings.push_back("possible over-merge: cut " + std::to_string(cut_count) +
                         " single-edge junction(s) between blobs of one fiber bucket");
  }

  // Fiber components: connectivity inside each bucket, cut edges excluded.
  detail::UnionFind comps(n);
  for (std::size_t e = 0; e < q.edges.size(); ++e) {
    auto [i, j] = q.edges[e];
    if (q.bucket_of[i] == q.bucket_of[j] && !cut[e]) comps.unite(i, j);
  }
  q.component_of.resize(n);
  std::map<int, int> comp_ids;
  for (int i = 0; i < n; ++i) {
    int root = comps.find(i);
    auto [it, fresh] = comp_ids.emplace(root, static_cast<int>(comp_ids.size()));
    q.component_of[i] = it->second;
    if (fresh) {
      q.component_bucket.push_back(q.bucket_of[i]);
      q.component_rep.push_back(i);
    }
  }

  q.weighted_adj.assign(n, {});
  for (std::size_t e = 0; e < q.edges.size(); ++e) {
    auto [i, j] = q.edges[e];
    q.weighted_adj[i].push_back({j, q.edge_image_length[e]});
    q.weighted_adj[j].push_back({i, q.edge_image_length[e]});
  }

  // Quotient edges between touching components.
  for (std::size_t e = 0; e < q.edges.size(); ++e) {
    auto [i, j] = q.edges[e];
    int a = q.component_of[i], b = q.component_of[j];
    if (a == b) continue;
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = q.quotient_edges.find(key);
    double w = q.edge_image_length[e];
    if (it == q.quotient_edges.end() || w < it->second) q.quotient_edges[key] = w;
  }

  // Whole-domain connectivity.
  detail::UnionFind dom(n);
  for (auto [i, j] : q.edges) dom.unite(i, j);
  std::set<int> roots;
  for (int i = 0; i < n; ++i) roots.insert(dom.find(i));
  q.domain_components = static_cast<int>(roots.size());
  if (q.domain_components > 1) {
    q.warnings.push_back("domain graph is disconnected (" +
                         std::to_string(q.domain_components) + " components)");
  }

  // Injective maps legitimately have one component per point, so the
  // fragmentation warning is off unless a bound is configured.
  const int bound = fragmentation_bound > 0 ? fragmentation_bound : n;
  if (static_cast<int>(comp_ids.size()) > bound) {
    q.warnings.push_back("fiber fragmentation: " + std::to_string(comp_ids.size()) +
                         " components exceed the bound " + std::to_string(bound) +
                         " (eps_fiber below the value noise?)");
  }

  return q;
}

// Quotient pseudometric from one fiber component to all others: infimum over
// domain paths of the image length, computed as a multi-source Dijkstra with
// image-length edge weights.  +inf outside the domain component.
inline std::vector<double> dtilde_from(const SampledMap& f, const FiberQuotient& q, int comp) {
  const int n = static_cast<int>(f.domain_points.size());
  const int nc = static_cast<int>(q.component_bucket.size());
  if (comp < 0 || comp >= nc) throw std::invalid_argument("dtilde_from: component out of range");
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int i = 0; i < n; ++i) {
    if (q.component_of[i] == comp) {
      dist[i] = 0.0;
      pq.push({0.0, i});
    }
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : q.weighted_adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
    }
  }
  std::vector<double> out(nc, kInf);
  for (int i = 0; i < n; ++i) {
    out[q.component_of[i]] = std::min(out[q.component_of[i]], dist[i]);
  }
  return out;
}

inline double dtilde(const SampledMap& f, const FiberQuotient& q, int comp_a, int comp_b) {
  const int nc = static_cast<int>(q.component_bucket.size());
  if (comp_b < 0 || comp_b >= nc) throw std::invalid_argument("dtilde: component out of range");
  if (comp_a == comp_b) return 0.0;
  return dtilde_from(f, q, comp_a)[comp_b];
}

// Multi-source hop distances in the domain graph (BFS).
inline std::vector<int> hop_distances(const SampledMap& f, const std::vector<int>& sources) {
  const int n = static_cast<int>(f.domain_points.size());
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : detail::canonical_edges(f)) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> hop(n, -1);
  std::vector<int> frontier;
  for (int s : sources) {
    hop[s] = 0;
    frontier.push_back(s);
  }
  int level = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    ++level;
    for (int u : frontier) {
      for (int v : adj[u]) {
        if (hop[v] == -1) {
          hop[v] = level;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return hop;
}

struct LocalConditionsOptions {
  int radius_hops = 2;
  double coverage_threshold = 0.95;  // declared LOI proxy threshold
  double tol_convexity = -1.0;       // < 0: per-ball auto, 2x max local image edge
  int geodesic_steps = 16;
};

struct PointCheck {
  bool skipped = false;
  bool lfc = true;
  bool loi = true;
  bool lcd = true;
  double rho = 0.0;  // LOI openness radius proxy
  std::string witness;
};

struct LocalConditionsReport {
  std::vector<PointCheck> points;
  int interior_checked = 0;
  double lfc_fraction = 1.0;
  double loi_fraction = 1.0;
  double lcd_fraction = 1.0;
  double all_fraction = 1.0;
  std::vector<int> failing_interior;
  std::vector<std::string> warnings;
  std::string proxy_note;
};

// Checks (LFC) local fiber connectedness, (LOI) local openness onto the
// image, and (LCD) local convexity of ball images, per sample point.
inline LocalConditionsReport check_local_conditions(const SampledMap& f, const FiberQuotient& q,
                                                    const LocalConditionsOptions& opt = {}) {
  const int n = static_cast<int>(f.domain_points.size());
  LocalConditionsReport rep;
  rep.points.resize(n);
  rep.proxy_note =
      "finite-sample proxies: LOI uses a declared coverage threshold of " +
      std::to_string(opt.coverage_threshold) +
      " over bucket values inside the reach radius; verdicts depend on mesh resolution";

  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : q.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  auto bucket_keys = detail::value_keys(f.target, q.bucket_value);

  int lfc_ok = 0, loi_ok = 0, lcd_ok = 0, all_ok = 0;
  for (int x = 0; x < n; ++x) {
    PointCheck& pc = rep.points[x];
    if (adj[x].empty()) {
      pc.skipped = true;
      rep.warnings.push_back("point " + std::to_string(x) + " is isolated; skipped");
      continue;
    }
    // Graph ball of radius_hops around x.
    std::map<int, int> hop;  // point -> hops
    hop[x] = 0;
    std::vector<int> frontier = {x};
    for (int level = 1; level <= opt.radius_hops; ++level) {
      std::vector<int> next;
      for (int u : frontier) {
        for (int v : adj[u]) {
          if (!hop.count(v)) {
            hop[v] = level;
            next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
    std::vector<int> ball;
    std::vector<int> rim;  // ball boundary plus interior-artifact points
    for (auto [p, h] : hop) {
      ball.push_back(p);
      if (h == opt.radius_hops || !f.is_interior(p)) rim.push_back(p);
    }

    // LFC: the ball meets at most one component of each fiber bucket.
    {
      std::map<int, std::set<int>> comps_per_bucket;
      for (int p : ball) comps_per_bucket[q.bucket_of[p]].insert(q.component_of[p]);
      for (auto& [bucket, comps] : comps_per_bucket) {
        if (comps.size() > 1) {
          pc.lfc = false;
          std::ostringstream os;
          os << "ball meets " << comps.size() << " components of fiber bucket " << bucket;
          pc.witness = os.str();
          break;
        }
      }
    }

    // Largest image edge inside the ball, the local image scale for LCD.
    double max_edge = 0.0;
    for (int p : ball) {
      for (int v : adj[p]) {
        if (hop.count(v)) {
          max_edge = std::max(max_edge, f.target.space.dist(f.values[p], f.values[v]));
        }
      }
    }

    // LOI: the ball image must attain every bucket value strictly inside the
    // relative ball of radius rho = half the least image distance from f(x)
    // to the rim image.  rho = 0 (rim touches the fiber of x) is vacuous.
    {
      double rho = kInf;
      for (int p : rim) rho = std::min(rho, f.target.space.dist(f.values[x], f.values[p]));
      if (rim.empty()) rho = 0.0;
      rho *= 0.5;
      pc.rho = rho;
      if (rho > 0.0) {
        std::set<int> ball_buckets;
        for (int p : ball) ball_buckets.insert(q.bucket_of[p]);
        detail::ValueKey xkey = detail::value_keys(f.target, {f.values[x]})[0];
        int candidates = 0, covered = 0;
        for (std::size_t b = 0; b < q.bucket_value.size(); ++b) {
          if (detail::value_lower_bound(f.target, bucket_keys[b], xkey) >= rho) continue;
          if (f.target.space.dist(q.bucket_value[b], f.values[x]) >= rho) continue;
          ++candidates;
          if (ball_buckets.count(static_cast<int>(b))) ++covered;
        }
        if (candidates > 0 &&
            static_cast<double>(covered) / candidates < opt.coverage_threshold) {
          pc.loi = false;
          if (pc.witness.empty()) {
            std::ostringstream os;
            os << "image ball coverage " << covered << "/" << candidates
               << " below threshold at rho=" << rho;
            pc.witness = os.str();
          }
        }
      }
    }

    // LCD: the ball image is convex within tolerance.
    {
      std::set<int> ball_buckets;
      for (int p : ball) ball_buckets.insert(q.bucket_of[p]);
      std::vector<Vec> image;
      for (int b : ball_buckets) image.push_back(q.bucket_value[b]);
      double tol = opt.tol_convexity >= 0.0 ? opt.tol_convexity : 2.0 * max_edge + 1e-12;
      GeodesicOracle oracle = [&](const Vec& a, const Vec& b) {
        return target_minimizing_geodesics(f.target, a, b, opt.geodesic_steps);
      };
      auto conv = check_convex_subset(image, f.target.space, oracle, {.tol = tol});
      if (!conv.is_convex) {
        pc.lcd = false;
        if (pc.witness.empty()) {
          std::ostringstream os;
          os << "ball image not convex: gap " << conv.max_gap << " exceeds " << tol;
          pc.witness = os.str();
        }
      }
    }

    if (f.is_interior(x)) {
      ++rep.interior_checked;
      lfc_ok += pc.lfc;
      loi_ok += pc.loi;
      lcd_ok += pc.lcd;
      bool all = pc.lfc && pc.loi && pc.lcd;
      all_ok += all;
      if (!all) rep.failing_interior.push_back(x);
    }
  }
  if (rep.interior_checked > 0) {
    rep.lfc_fraction = static_cast<double>(lfc_ok) / rep.interior_checked;
    rep.loi_fraction = static_cast<double>(loi_ok) / rep.interior_checked;
    rep.lcd_fraction = static_cast<double>(lcd_ok) / rep.interior_checked;
    rep.all_fraction = static_cast<double>(all_ok) / rep.interior_checked;
  }
  return rep;
}

struct WeakConvexityOptions {
  double tol = -1.0;  // < 0: auto, 2x the largest image edge length
  int pair_budget = 300;
  std::uint64_t seed = 23;
  int geodesic_steps = 32;
  int lattice_box = 3;
  bool weak = true;  // false: minimizing geodesics only (plain convexity)
};

struct PairWitness {
  int i = 0, j = 0;  // bucket-value indices
  bool ok = false;
  VecI lift_coeffs;
  double lift_norm = 0.0;
  double gap = kInf;
};

struct WeakConvexityReport {
  ConvexityReport base;
  std::vector<PairWitness> witnesses;
  int unique_values = 0;
  double tol = 0.0;
};

// Verifies that every sampled pair of image values is joined by some geodesic
// (minimizing first, then longer lifts when weak = true) staying within tol
// of the sampled image.
inline WeakConvexityReport verify_weak_convexity(const SampledMap& f, const FiberQuotient& q,
                                                 const WeakConvexityOptions& opt = {}) {
  WeakConvexityReport rep;
  const auto& uniq = q.bucket_value;
  rep.unique_values = static_cast<int>(uniq.size());
  double tol = opt.tol;
  if (tol < 0.0) {
    double max_edge = 0.0;
    for (double w : q.edge_image_length) max_edge = std::max(max_edge, w);
    tol = 2.0 * max_edge + 1e-12;
  }
  rep.tol = tol;

  const int n = rep.unique_values;
  std::vector<std::pair<int, int>> pairs;
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  if (total <= opt.pair_budget) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  } else {
    std::mt19937_64 rng(opt.seed);
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < opt.pair_budget) {
      int i = uniform_int(rng, 0, n - 1);
      int j = uniform_int(rng, 0, n - 1);
      if (i != j) chosen.insert({std::min(i, j), std::max(i, j)});
    }
    pairs.assign(chosen.begin(), chosen.end());
  }

  auto clearance = [&](const Vec& w) {
    double best = kInf;
    for (const Vec& s : uniq) best = std::min(best, f.target.space.dist(w, s));
    return best;
  };

  for (auto [i, j] : pairs) {
    ++rep.base.pairs_checked;
    PairWitness pw;
    pw.i = i;
    pw.j = j;
    std::vector<std::pair<Polyline, std::pair<VecI, double>>> candidates;
    if (f.target.quotient) {
      const ClosedSubgroup& H = *f.target.quotient;
      CylinderPoint p{uniq[i]}, qq{uniq[j]};
      auto lifts = opt.weak ? lifts_in_expanded_box(H, p, qq, opt.lattice_box)
                            : enumerate_minimizing_lifts(H, p, qq);
      for (const auto& lift : lifts) {
        candidates.push_back({geodesic_polyline(H, p, qq, lift, opt.geodesic_steps),
                              {lift.lattice_coeffs, lift.norm}});
      }
    } else {
      for (auto& g : target_minimizing_geodesics(f.target, uniq[i], uniq[j], opt.geodesic_steps)) {
        candidates.push_back({std::move(g), {VecI(0), (uniq[i] - uniq[j]).norm()}});
      }
    }
    for (auto& [path, meta] : candidates) {
      double g = 0.0;
      for (const Vec& w : path.points) {
        g = std::max(g, clearance(w));
        if (g > pw.gap) break;
      }
      if (g < pw.gap) {
        pw.gap = g;
        pw.lift_coeffs = meta.first;
        pw.lift_norm = meta.second;
      }
      if (pw.gap <= tol) break;
    }
    pw.ok = pw.gap <= tol;
    if (!pw.ok) {
      rep.base.is_convex = false;
      if (pw.gap > rep.base.max_gap) rep.base.witness_pair = {i, j};
    }
    rep.base.max_gap = std::max(rep.base.max_gap, pw.gap);
    if (rep.witnesses.size() < 128) rep.witnesses.push_back(pw);
  }
  return rep;
}

struct FiberReport {
  std::map<int, int> histogram;  // component count per bucket -> bucket count
  std::vector<int> multi_component_buckets;
  bool all_connected = true;
};

inline FiberReport fiber_connectivity_report(const FiberQuotient& q) {
  FiberReport rep;
  std::map<int, int> comps_per_bucket;
  for (int b : q.component_bucket) ++comps_per_bucket[b];
  for (auto [bucket, count] : comps_per_bucket) {
    ++rep.histogram[count];
    if (count > 1) {
      rep.all_connected = false;
      if (rep.multi_component_buckets.size() < 64) {
        rep.multi_component_buckets.push_back(bucket);
      }
    }
  }
  return rep;
}

}  // namespace cylmom
