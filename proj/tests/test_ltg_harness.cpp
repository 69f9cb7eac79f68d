#include <catch2/catch_amalgamated.hpp>

#include "cylmom/builtin_examples.hpp"
#include "cylmom/ltg_harness.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace cylmom;

namespace {


std::set<std::pair<int, int>> edge_set(const SampledMap& f) {
  std::set<std::pair<int, int>> s;
  for (auto [i, j] : f.adjacency) s.insert({std::min(i, j), std::max(i, j)});
  return s;
}

std::map<int, int> degree_histogram(const SampledMap& f) {
  std::vector<int> deg(f.domain_points.size(), 0);
  for (auto [i, j] : edge_set(f)) {
    ++deg[i];
    ++deg[j];
  }
  std::map<int, int> h;
  for (int d : deg) ++h[d];
  return h;
}

// Independent Bellman-Ford oracle for dtilde: multi-source shortest paths
// over the domain graph with image-distance weights.
double brute_dtilde(const SampledMap& f, const FiberQuotient& q, int ca, int cb) {
  const int n = static_cast<int>(f.domain_points.size());
  std::vector<double> dist(n, kInf);
  for (int i = 0; i < n; ++i) {
    if (q.component_of[i] == ca) dist[i] = 0.0;
  }
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (auto [i, j] : f.adjacency) {
      double w = f.target.space.dist(f.values[i], f.values[j]);
      if (dist[i] + w < dist[j]) {
        dist[j] = dist[i] + w;
        changed = true;
      }
      if (dist[j] + w < dist[i]) {
        dist[i] = dist[j] + w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double best = kInf;
  for (int i = 0; i < n; ++i) {
    if (q.component_of[i] == cb) best = std::min(best, dist[i]);
  }
  return best;
}

SampledMap path_map(const std::vector<double>& values) {
  SampledMap f;
  f.target = euclidean_target(1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    f.domain_points.push_back(Vec::Constant(1, double(i)));
    f.values.push_back(Vec::Constant(1, values[i]));
    if (i + 1 < values.size()) f.adjacency.push_back({int(i), int(i + 1)});
  }
  return f;
}

ClosedSubgroup circle_group(double period) {
  Mat lat(1, 1);
  lat(0, 0) = period;
  return make_closed_subgroup(1, Mat(0, 1), lat);
}

}  // namespace

TEST_CASE("box mesh has documented shape", "[ltg][mesh]") {
  auto ident = [](const Vec& x) -> Vec { return x; };
  auto f = box_mesh(Vec::Zero(1), Vec::Ones(1), {5}, ident, euclidean_target(1));
  REQUIRE(f.domain_points.size() == 5);
  REQUIRE(edge_set(f).size() == 4);
  REQUIRE(f.domain_points[1][0] == Catch::Approx(0.25).margin(1e-15));
  REQUIRE_FALSE(f.is_interior(0));
  REQUIRE(f.is_interior(2));
  REQUIRE_FALSE(f.is_interior(4));

  Vec lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 2;
  auto g = box_mesh(lo, hi, {3, 4}, ident, euclidean_target(2));
  REQUIRE(g.domain_points.size() == 12);
  REQUIRE(edge_set(g).size() == 17);
  int interior = 0;
  for (std::size_t i = 0; i < g.domain_points.size(); ++i) interior += g.is_interior(int(i));
  REQUIRE(interior == 2);

  REQUIRE_THROWS_AS(box_mesh(lo, hi, {1, 4}, ident, euclidean_target(2)),
                    std::invalid_argument);
}

TEST_CASE("wrapped grid mesh is a regular torus graph", "[ltg][mesh]") {
  Vec periods = Vec::Constant(2, 2 * kPi);
  auto f = wrapped_grid_mesh(periods, 8, [](const Vec& x) -> Vec { return x; },
                             euclidean_target(2));
  REQUIRE(f.domain_points.size() == 64);
  REQUIRE(edge_set(f).size() == 128);
  auto hist = degree_histogram(f);
  REQUIRE(hist.size() == 1);
  REQUIRE(hist.at(4) == 64);
  REQUIRE(f.is_interior(0));

  Vec bad = Vec::Constant(1, kInf);
  REQUIRE_THROWS_AS(wrapped_grid_mesh(bad, 8, [](const Vec& x) -> Vec { return x; },
                                      euclidean_target(1)),
                    std::invalid_argument);
}

TEST_CASE("polar ball mesh matches a brute-force enumeration", "[ltg][mesh]") {
  auto ident = [](const Vec& z) -> Vec { return z; };

  SECTION("single factor") {
    auto f = polar_ball_mesh(1, 1.0, 2, 4, ident, euclidean_target(2));
    REQUIRE(f.domain_points.size() == 9);
    REQUIRE(edge_set(f).size() == 16);
    int interior = 0;
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) interior += f.is_interior(int(i));
    REQUIRE(interior == 5);
    // area-uniform rings: r_1 = sqrt(1/2), r_2 = 1
    double rmax = 0.0, rmid = 0.0;
    for (const Vec& z : f.domain_points) {
      double r = z.norm();
      rmax = std::max(rmax, r);
      if (r > 0.1 && r < 0.9) rmid = std::max(rmid, r);
    }
    REQUIRE(rmax == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(rmid == Catch::Approx(std::sqrt(0.5)).margin(1e-15));
  }

  SECTION("two factors against brute force") {
    const int n_r = 2, n_theta = 4;
    auto f = polar_ball_mesh(2, 1.0, n_r, n_theta, ident, euclidean_target(4));

    // Independent enumeration: factor nodes are (ring, sector) with ring 0
    // the origin; keep pairs with ring sums <= n_r.
    struct FNode {
      int ring, sector;
    };
    std::vector<FNode> fnodes;
    fnodes.push_back({0, 0});
    for (int i = 1; i <= n_r; ++i) {
      for (int j = 0; j < n_theta; ++j) fnodes.push_back({i, j});
    }
    auto factor_adjacent = [&](const FNode& a, const FNode& b) {
      if (a.ring == 0 || b.ring == 0) return a.ring + b.ring == 1;
      if (a.ring == b.ring) {
        int dj = std::abs(a.sector - b.sector);
        return dj == 1 || dj == n_theta - 1;
      }
      return std::abs(a.ring - b.ring) == 1 && a.sector == b.sector;
    };
    std::vector<std::pair<FNode, FNode>> kept;
    for (const auto& a : fnodes) {
      for (const auto& b : fnodes) {
        if (a.ring + b.ring <= n_r) kept.push_back({a, b});
      }
    }
    REQUIRE(f.domain_points.size() == kept.size());
    REQUIRE(kept.size() == 33);

    auto coords = [&](const FNode& a) -> std::pair<double, double> {
      if (a.ring == 0) return {0.0, 0.0};
      double r = std::sqrt(double(a.ring) / n_r);
      double th = 2.0 * kPi * a.sector / n_theta;
      return {r * std::cos(th), r * std::sin(th)};
    };
    auto locate = [&](const FNode& a, const FNode& b) {
      auto [x1, y1] = coords(a);
      auto [x2, y2] = coords(b);
      for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
        Vec z = f.domain_points[i];
        if (std::abs(z[0] - x1) < 1e-12 && std::abs(z[1] - y1) < 1e-12 &&
            std::abs(z[2] - x2) < 1e-12 && std::abs(z[3] - y2) < 1e-12) {
          return int(i);
        }
      }
      return -1;
    };
    std::set<std::pair<int, int>> brute;
    int brute_interior = 0;
    for (std::size_t a = 0; a < kept.size(); ++a) {
      int ia = locate(kept[a].first, kept[a].second);
      REQUIRE(ia >= 0);
      brute_interior += kept[a].first.ring + kept[a].second.ring < n_r;
      REQUIRE(f.is_interior(ia) == (kept[a].first.ring + kept[a].second.ring < n_r));
      for (std::size_t b = a + 1; b < kept.size(); ++b) {
        bool adj = (factor_adjacent(kept[a].first, kept[b].first) &&
                    kept[a].second.ring == kept[b].second.ring &&
                    kept[a].second.sector == kept[b].second.sector) ||
                   (factor_adjacent(kept[a].second, kept[b].second) &&
                    kept[a].first.ring == kept[b].first.ring &&
                    kept[a].first.sector == kept[b].first.sector);
        if (adj) {
          int ib = locate(kept[b].first, kept[b].second);
          brute.insert({std::min(ia, ib), std::max(ia, ib)});
        }
      }
    }
    REQUIRE(brute_interior == 9);
    REQUIRE(edge_set(f) == brute);
  }
}

TEST_CASE("product mesh combines factors", "[ltg][mesh]") {
  auto ident = [](const Vec& x) -> Vec { return x; };
  auto a = box_mesh(Vec::Zero(1), Vec::Ones(1), {3}, ident, euclidean_target(1));
  auto b = box_mesh(Vec::Zero(1), Vec::Constant(1, 2.0), {3}, ident, euclidean_target(1));
  auto p = product_mesh(a, b, [](const Vec& u, const Vec& v) -> Vec { return u + v; },
                        euclidean_target(1));
  REQUIRE(p.domain_points.size() == 9);
  REQUIRE(edge_set(p).size() == 12);
  int interior = 0;
  for (std::size_t i = 0; i < p.domain_points.size(); ++i) interior += p.is_interior(int(i));
  REQUIRE(interior == 1);
  REQUIRE(p.domain_points[5].size() == 2);
  REQUIRE(p.values[8][0] == Catch::Approx(3.0).margin(1e-15));
  validate_sampled_map(p);
}

TEST_CASE("fiber quotient on synthetic maps", "[ltg][quotient]") {
  auto ident = [](const Vec& x) -> Vec { return x; };
  Vec lo = Vec::Zero(2), hi = Vec::Ones(2);

  SECTION("identity map: every point its own component") {
    auto f = box_mesh(lo, hi, {4, 4}, ident, euclidean_target(2));
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.bucket_value.size() == 16);
    REQUIRE(q.component_bucket.size() == 16);
    auto rep = fiber_connectivity_report(q);
    REQUIRE(rep.all_connected);
    REQUIRE(rep.histogram.at(1) == 16);
  }

  SECTION("constant map: one component") {
    auto f = box_mesh(lo, hi, {4, 4}, [](const Vec&) -> Vec { return Vec::Zero(1); },
                      euclidean_target(1));
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.bucket_value.size() == 1);
    REQUIRE(q.component_bucket.size() == 1);
    REQUIRE(dtilde(f, q, 0, 0) == 0.0);
  }

  SECTION("coordinate projection: connected column fibers") {
    auto f = box_mesh(lo, hi, {5, 5}, [](const Vec& x) -> Vec { return x.head(1); },
                      euclidean_target(1));
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.bucket_value.size() == 5);
    REQUIRE(q.component_bucket.size() == 5);
    REQUIRE(fiber_connectivity_report(q).all_connected);
    // adjacent columns touch at image distance exactly 1/4
    for (const auto& [key, w] : q.quotient_edges) REQUIRE(w == 0.25);
    REQUIRE(q.quotient_edges.size() == 4);

    // quotient distance equals the value gap, via the oracle and exactly
    int c0 = -1, c4 = -1;
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
      if (std::abs(f.values[i][0] - 0.0) < 1e-15) c0 = q.component_of[i];
      if (std::abs(f.values[i][0] - 1.0) < 1e-15) c4 = q.component_of[i];
    }
    REQUIRE(dtilde(f, q, c0, c4) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(dtilde(f, q, c0, c4) == Catch::Approx(brute_dtilde(f, q, c0, c4)).margin(1e-12));
    auto row = dtilde_from(f, q, c0);
    REQUIRE(row[c0] == 0.0);
    REQUIRE(row[c4] == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("bucketing scale is single-linkage at eps") {
    auto f = path_map({0.0, 5e-10, 3e-9});
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.bucket_value.size() == 2);
    REQUIRE(q.bucket_of[0] == q.bucket_of[1]);
    REQUIRE(q.bucket_of[0] != q.bucket_of[2]);
    REQUIRE_THROWS_AS(build_fiber_quotient(f, 0.0), std::invalid_argument);
  }

  SECTION("disconnected domain warns and dtilde is infinite") {
    SampledMap f;
    f.target = euclidean_target(1);
    f.domain_points = {Vec::Zero(1), Vec::Ones(1)};
    f.values = {Vec::Zero(1), Vec::Zero(1)};
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.domain_components == 2);
    REQUIRE(q.component_bucket.size() == 2);
    bool warned = false;
    for (const auto& w : q.warnings) warned = warned || w.find("disconnected") != std::string::npos;
    REQUIRE(warned);
    REQUIRE(dtilde(f, q, 0, 1) == kInf);
  }

  SECTION("single-edge junction between blobs is cut with a warning") {
    // two 4-cycles of equal value joined by one edge
    SampledMap f;
    f.target = euclidean_target(1);
    for (int i = 0; i < 8; ++i) {
      f.domain_points.push_back(Vec::Constant(1, double(i)));
      f.values.push_back(Vec::Zero(1));
    }
    f.adjacency = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {3, 4}};
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.component_bucket.size() == 2);
    REQUIRE(fiber_connectivity_report(q).histogram.at(2) == 1);
    bool warned = false;
    for (const auto& w : q.warnings) warned = warned || w.find("junction") != std::string::npos;
    REQUIRE(warned);

    // a short path fiber is left intact (sides below the blob threshold)
    auto g = path_map({0, 0, 0, 0, 0, 0, 0});
    auto qg = build_fiber_quotient(g, 1e-9);
    REQUIRE(qg.component_bucket.size() == 1);
  }

  SECTION("fragmentation warning fires at a configured bound") {
    auto f = box_mesh(lo, hi, {4, 4}, ident, euclidean_target(2));
    auto q = build_fiber_quotient(f, 1e-9, 4);
    bool warned = false;
    for (const auto& w : q.warnings) warned = warned || w.find("fragmentation") != std::string::npos;
    REQUIRE(warned);
    auto quiet = build_fiber_quotient(f, 1e-9);
    for (const auto& w : quiet.warnings) REQUIRE(w.find("fragmentation") == std::string::npos);
  }
}

TEST_CASE("builtin torus meshes reproduce the fiber structure", "[ltg][builtin]") {
  SECTION("standard: connected circle fibers") {
    auto ex = make_torus_example("t2-standard");
    REQUIRE(std::abs(ex.holonomy.group.shortest_lattice - 2 * kPi) <= 1e-9);
    auto f = torus_momentum_mesh(ex, 16);
    REQUIRE(f.domain_points.size() == 256);
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
      double expect = reduce_mod(f.domain_points[i][1], 2 * kPi);
      REQUIRE(f.values[i][0] == Catch::Approx(expect).margin(1e-12));
    }
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = fiber_connectivity_report(q);
    REQUIRE(q.bucket_value.size() == 16);
    REQUIRE(rep.all_connected);
    REQUIRE(rep.histogram.at(1) == 16);
  }

  SECTION("doubled: every fiber two components in the circle presentation") {
    auto ex = make_torus_example("t2-doubled");
    REQUIRE(std::abs(ex.holonomy.group.shortest_lattice - 4 * kPi) <= 1e-9);
    REQUIRE(ex.mesh_group.shortest_lattice == Catch::Approx(2 * kPi).margin(1e-12));
    auto f = torus_momentum_mesh(ex, 16);
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
      double expect = reduce_mod(2.0 * f.domain_points[i][1], 2 * kPi);
      REQUIRE(std::min(std::abs(f.values[i][0] - expect),
                       2 * kPi - std::abs(f.values[i][0] - expect)) < 1e-9);
    }
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = fiber_connectivity_report(q);
    REQUIRE(q.bucket_value.size() == 8);
    REQUIRE(q.component_bucket.size() == 16);
    REQUIRE_FALSE(rep.all_connected);
    REQUIRE(rep.histogram.size() == 1);
    REQUIRE(rep.histogram.at(2) == 8);

    // the two components over one value are far apart in the quotient metric
    int ca = -1, cb = -1;
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
      if (q.bucket_of[i] == q.bucket_of[0] && q.component_of[i] != q.component_of[0]) {
        ca = q.component_of[0];
        cb = q.component_of[i];
        break;
      }
    }
    REQUIRE(ca >= 0);
    double dt = dtilde(f, q, ca, cb);
    REQUIRE(dt == Catch::Approx(brute_dtilde(f, q, ca, cb)).margin(1e-12));
    REQUIRE(dt == Catch::Approx(2 * kPi).margin(1e-9));
    REQUIRE(dt > injectivity_radius(ex.mesh_group));
    // while their image values coincide
    REQUIRE(f.target.space.dist(q.bucket_value[q.component_bucket[ca]],
                                q.bucket_value[q.component_bucket[cb]]) == 0.0);
  }

  SECTION("full translation action: injective momentum") {
    auto ex = make_torus_example("r2-on-t2");
    auto f = torus_momentum_mesh(ex, 12);
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(q.bucket_value.size() == 144);
    REQUIRE(fiber_connectivity_report(q).all_connected);

    // spot-check the local isometry of the quotient metric
    auto row = dtilde_from(f, q, q.component_of[0]);
    const double mesh_step = 2 * kPi / 12;
    for (int target_pt : {1, 12, 25}) {
      int c = q.component_of[target_pt];
      double dy = f.target.space.dist(f.values[0], f.values[target_pt]);
      REQUIRE(std::abs(row[c] - dy) <= 2 * mesh_step);
      REQUIRE(row[c] == Catch::Approx(brute_dtilde(f, q, q.component_of[0], c)).margin(1e-12));
    }
  }

  SECTION("linear representation: connected torus fibers over a triangle") {
    auto ex = make_rep_example();
    auto f = rep_momentum_mesh(ex, 4, 8);
    const double A = 0.5 * ex.radius * ex.radius;
    for (std::size_t i = 0; i < f.domain_points.size(); ++i) {
      const Vec& z = f.domain_points[i];
      double a1 = 0.5 * (z[0] * z[0] + z[1] * z[1]);
      double a2 = 0.5 * (z[2] * z[2] + z[3] * z[3]);
      REQUIRE(f.values[i][0] == Catch::Approx(a1).margin(1e-12));
      REQUIRE(f.values[i][1] == Catch::Approx(a2).margin(1e-12));
      REQUIRE(a1 + a2 <= A + 1e-9);
    }
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = fiber_connectivity_report(q);
    REQUIRE(rep.all_connected);
    // image values form the exact discrete triangle {A (i, j) / n_r : i + j <= n_r}
    REQUIRE(q.bucket_value.size() == 15);
    bool corner = false, far1 = false, far2 = false;
    for (const Vec& v : q.bucket_value) {
      corner = corner || v.norm() < 1e-12;
      far1 = far1 || (std::abs(v[0] - A) < 1e-9 && std::abs(v[1]) < 1e-12);
      far2 = far2 || (std::abs(v[1] - A) < 1e-9 && std::abs(v[0]) < 1e-12);
    }
    REQUIRE(corner);
    REQUIRE(far1);
    REQUIRE(far2);
  }
}

TEST_CASE("local conditions on reference maps", "[ltg][local]") {
  SECTION("linear projection passes everywhere") {
    auto f = box_mesh(Vec::Zero(2), Vec::Ones(2), {7, 7},
                      [](const Vec& x) -> Vec { return x.head(1); }, euclidean_target(1));
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = check_local_conditions(f, q);
    REQUIRE(rep.interior_checked == 25);
    REQUIRE(rep.lfc_fraction == 1.0);
    REQUIRE(rep.loi_fraction == 1.0);
    REQUIRE(rep.lcd_fraction == 1.0);
    REQUIRE(rep.failing_interior.empty());
    REQUIRE_FALSE(rep.proxy_note.empty());
  }

  SECTION("builtin torus examples pass everywhere") {
    for (const char* name : {"t2-standard", "t2-doubled"}) {
      auto ex = make_torus_example(name);
      auto f = torus_momentum_mesh(ex, 16);
      auto q = build_fiber_quotient(f, 1e-9);
      auto rep = check_local_conditions(f, q);
      INFO(name);
      REQUIRE(rep.interior_checked == 256);
      REQUIRE(rep.all_fraction == 1.0);
      // the rim of every ball touches the fiber, so the openness radius
      // degenerates and LOI is vacuous on these meshes
      REQUIRE(rep.points[0].rho == 0.0);
    }
  }

  SECTION("openness failure when nearby image values live far away") {
    SampledMap f = path_map({0.0, 0.5, 0.5, 0.1, 0.1});
    auto q = build_fiber_quotient(f, 1e-9);
    LocalConditionsOptions opt;
    opt.radius_hops = 1;
    auto rep = check_local_conditions(f, q, opt);
    REQUIRE_FALSE(rep.points[0].loi);
    REQUIRE(rep.points[0].rho == Catch::Approx(0.25).margin(1e-12));
    REQUIRE_FALSE(rep.points[0].witness.empty());
    REQUIRE(rep.points[0].lfc);
    REQUIRE(rep.points[0].lcd);
    for (int i = 1; i < 5; ++i) REQUIRE(rep.points[i].loi);
    REQUIRE(rep.failing_interior == std::vector<int>{0});
  }

  SECTION("fiber-connectedness failure at a fold") {
    SampledMap f = path_map({1.0, 0.5, 0.0, 0.5, 1.0});
    auto q = build_fiber_quotient(f, 1e-9);
    REQUIRE(fiber_connectivity_report(q).histogram.at(2) == 2);
    LocalConditionsOptions opt;
    opt.radius_hops = 1;
    auto rep = check_local_conditions(f, q, opt);
    REQUIRE_FALSE(rep.points[2].lfc);
    REQUIRE_FALSE(rep.points[2].witness.empty());
    REQUIRE(rep.points[2].loi);
    REQUIRE(rep.points[2].lcd);
    for (int i : {0, 1, 3, 4}) REQUIRE(rep.points[i].lfc);
    REQUIRE(rep.failing_interior == std::vector<int>{2});
  }

  SECTION("convexity failure against an explicit tolerance") {
    SampledMap f;
    f.target = cylinder_target(circle_group(2 * kPi));
    for (int i = 0; i < 3; ++i) f.domain_points.push_back(Vec::Constant(1, double(i)));
    f.values = {Vec::Zero(1), Vec::Zero(1), Vec::Constant(1, kPi)};
    f.adjacency = {{0, 1}, {1, 2}};
    auto q = build_fiber_quotient(f, 1e-9);
    LocalConditionsOptions opt;
    opt.radius_hops = 1;
    opt.tol_convexity = 0.1;
    auto rep = check_local_conditions(f, q, opt);
    REQUIRE_FALSE(rep.points[1].lcd);
    REQUIRE_FALSE(rep.points[1].witness.empty());
  }

  SECTION("isolated points are skipped with a warning") {
    SampledMap f;
    f.target = euclidean_target(1);
    f.domain_points = {Vec::Zero(1), Vec::Ones(1), Vec::Constant(1, 2.0)};
    f.values = {Vec::Zero(1), Vec::Zero(1), Vec::Zero(1)};
    f.adjacency = {{0, 1}};
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = check_local_conditions(f, q);
    REQUIRE(rep.points[2].skipped);
    REQUIRE_FALSE(rep.warnings.empty());
  }
}

TEST_CASE("weak convexity on cylinder images", "[ltg][convexity]") {
  SECTION("full circle image is weakly convex") {
    auto ex = make_torus_example("t2-standard");
    auto f = torus_momentum_mesh(ex, 16);
    auto q = build_fiber_quotient(f, 1e-9);
    auto rep = verify_weak_convexity(f, q);
    REQUIRE(rep.unique_values == 16);
    REQUIRE(rep.base.is_convex);
    REQUIRE(rep.base.pairs_checked == 120);
    REQUIRE(rep.base.max_gap <= rep.tol);
    REQUIRE_FALSE(rep.witnesses.empty());
  }

  SECTION("two antipodal points are not weakly convex") {
    SampledMap f;
    f.target = cylinder_target(circle_group(2 * kPi));
    f.domain_points = {Vec::Zero(1), Vec::Ones(1)};
    f.values = {Vec::Zero(1), Vec::Constant(1, kPi)};
    f.adjacency = {{0, 1}};
    auto q = build_fiber_quotient(f, 1e-9);
    WeakConvexityOptions opt;
    opt.tol = 0.1;
    auto rep = verify_weak_convexity(f, q, opt);
    REQUIRE_FALSE(rep.base.is_convex);
    REQUIRE(rep.base.witness_pair.has_value());
    REQUIRE(rep.base.max_gap == Catch::Approx(kPi / 2).margin(1e-9));
  }

  SECTION("long arc: weakly convex but not convex") {
    SampledMap f;
    f.target = cylinder_target(circle_group(2 * kPi));
    const int n = 51;
    for (int i = 0; i < n; ++i) {
      f.domain_points.push_back(Vec::Constant(1, double(i)));
      f.values.push_back(Vec::Constant(1, 5.0 * i / (n - 1)));
      if (i + 1 < n) f.adjacency.push_back({i, i + 1});
    }
    auto q = build_fiber_quotient(f, 1e-9);
    WeakConvexityOptions opt;
    opt.pair_budget = 2000;
    opt.weak = false;
    auto strict = verify_weak_convexity(f, q, opt);
    REQUIRE_FALSE(strict.base.is_convex);
    opt.weak = true;
    auto weak = verify_weak_convexity(f, q, opt);
    REQUIRE(weak.base.is_convex);
    // the witnessing geodesic for the endpoints is the long lift through the
    // arc, not the minimizing one through the gap
    bool found = false;
    for (const auto& w : weak.witnesses) {
      const Vec& a = q.bucket_value[w.i];
      const Vec& b = q.bucket_value[w.j];
      if (std::abs(f.target.space.dist(a, b) - (2 * kPi - 5.0)) < 1e-9 &&
          std::abs(std::abs(a[0] - b[0]) - 5.0) < 1e-9) {
        found = true;
        REQUIRE(w.ok);
        REQUIRE(w.lift_norm == Catch::Approx(5.0).margin(1e-9));
      }
    }
    REQUIRE(found);
  }

  SECTION("deterministic subsampling under a pair budget") {
    auto ex = make_torus_example("r2-on-t2");
    auto f = torus_momentum_mesh(ex, 8);
    auto q = build_fiber_quotient(f, 1e-9);
    WeakConvexityOptions opt;
    opt.pair_budget = 50;
    auto a = verify_weak_convexity(f, q, opt);
    auto b = verify_weak_convexity(f, q, opt);
    REQUIRE(a.base.pairs_checked == 50);
    REQUIRE(a.base.pairs_checked == b.base.pairs_checked);
    REQUIRE(a.base.max_gap == b.base.max_gap);
    REQUIRE(a.base.is_convex);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
      REQUIRE(a.witnesses[i].i == b.witnesses[i].i);
      REQUIRE(a.witnesses[i].gap == b.witnesses[i].gap);
    }
  }
}

TEST_CASE("quotient metric axioms on a builtin mesh", "[ltg][quotient]") {
  auto ex = make_torus_example("t2-doubled");
  auto f = torus_momentum_mesh(ex, 12);
  auto q = build_fiber_quotient(f, 1e-9);
  const int nc = static_cast<int>(q.component_bucket.size());
  REQUIRE(nc == 12);
  std::vector<std::vector<double>> d(nc);
  for (int c = 0; c < nc; ++c) d[c] = dtilde_from(f, q, c);
  for (int a = 0; a < nc; ++a) {
    REQUIRE(d[a][a] == 0.0);
    for (int b = 0; b < nc; ++b) {
      REQUIRE(d[a][b] == Catch::Approx(d[b][a]).margin(1e-9));
      if (a != b) REQUIRE(d[a][b] > 0.0);
      // d_Y between projected values is a lower bound
      double dy = f.target.space.dist(q.bucket_value[q.component_bucket[a]],
                                      q.bucket_value[q.component_bucket[b]]);
      REQUIRE(dy <= d[a][b] + 1e-9);
      for (int c = 0; c < nc; ++c) {
        REQUIRE(d[a][b] <= d[a][c] + d[c][b] + 1e-9);
      }
    }
  }
}
