#include <catch2/catch_amalgamated.hpp>

#include "cylmom/builtin_examples.hpp"
#include "cylmom/normal_form.hpp"

using namespace cylmom;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("representation momentum has the quadratic normal form", "[normal-form]") {
  auto rep = make_torus_representation(Mat::Identity(2, 2));
  Vec z(4);
  z << 1, 0, 0, 2;
  Vec J = rep_momentum(rep, z);
  REQUIRE(J[0] == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(J[1] == Catch::Approx(2.0).margin(1e-15));

  REQUIRE_THROWS_AS(rep_momentum(rep, Vec::Zero(3)), std::invalid_argument);
  REQUIRE_THROWS_AS(make_torus_representation(Mat(0, 2)), std::invalid_argument);
}

TEST_CASE("momentum gradient matches central differences", "[normal-form]") {
  Mat w(3, 2);
  w << 1, 2, 0, 1, -1, 3;
  auto rep = make_torus_representation(w);
  Vec xi(2);
  xi << 0.7, -0.3;
  Vec z(6);
  z << 0.2, -0.5, 1.1, 0.4, -0.9, 0.3;

  Vec grad = rep_momentum_gradient(rep, xi, z);
  const double h = 1e-6;
  for (int i = 0; i < z.size(); ++i) {
    Vec zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    double fd = (rep_momentum(rep, zp).dot(xi) - rep_momentum(rep, zm).dot(xi)) / (2 * h);
    REQUIRE(grad[i] == Catch::Approx(fd).margin(1e-8));
  }
}

TEST_CASE("image cone samples stay in the weight simplex", "[normal-form]") {
  auto rep = make_torus_representation(Mat::Identity(2, 2));
  auto pts = rep_image_cone(rep, 2.0, 200);
  const double scale = 2.0;  // radius^2 / 2
  REQUIRE(pts.size() == 203);
  REQUIRE(pts[0].norm() == 0.0);
  REQUIRE((pts[1] - scale * Vec::Unit(2, 0)).norm() < 1e-15);
  REQUIRE((pts[2] - scale * Vec::Unit(2, 1)).norm() < 1e-15);
  for (const Vec& v : pts) {
    REQUIRE(v.minCoeff() >= -1e-12);
    REQUIRE(v.sum() <= scale + 1e-12);
  }
}

TEST_CASE("slice splitting construction is validated", "[normal-form]") {
  Mat chu_q = mat2(0, -1, 1, 0);
  auto split = make_slice_splitting(Mat::Identity(2, 2), 0, 0, 2, chu_q);
  REQUIRE(split.k == 2);
  REQUIRE(split.q_rows().rows() == 2);

  REQUIRE_THROWS_AS(make_slice_splitting(Mat::Identity(2, 2), 1, 0, 2, chu_q),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_slice_splitting(2.0 * Mat::Identity(2, 2), 0, 0, 2, chu_q),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_slice_splitting(Mat::Identity(2, 2), 0, 0, 2, mat2(0, 1, 1, 0)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_slice_splitting(Mat::Identity(2, 2), 0, 0, 2, Mat::Zero(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("splitting from a Chu matrix separates free and twisted blocks", "[normal-form]") {
  SECTION("zero pairing is entirely free") {
    auto split = splitting_from_chu(Mat::Zero(1, 1));
    REQUIRE(split.dim_m == 1);
    REQUIRE(split.dim_q == 0);
    REQUIRE(std::abs(std::abs(split.m_rows()(0, 0)) - 1.0) < 1e-12);
  }

  SECTION("invertible pairing is entirely twisted, and is reconstructed") {
    Mat chu = mat2(0, 1, -1, 0);
    auto split = splitting_from_chu(chu);
    REQUIRE(split.dim_m == 0);
    REQUIRE(split.dim_q == 2);
    Mat rebuilt = split.q_rows().transpose() * split.chu_q * split.q_rows();
    REQUIRE((rebuilt - chu).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("rank-deficient pairing keeps its kernel as the free block") {
    Mat chu = Mat::Zero(3, 3);
    chu(0, 1) = 1;
    chu(1, 0) = -1;
    auto split = splitting_from_chu(chu);
    REQUIRE(split.dim_m == 1);
    REQUIRE(split.dim_q == 2);
    REQUIRE((chu * split.m_rows().transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Mat rebuilt = split.q_rows().transpose() * split.chu_q * split.q_rows();
    REQUIRE((rebuilt - chu).cwiseAbs().maxCoeff() < 1e-12);
  }

  REQUIRE_THROWS_AS(splitting_from_chu(mat2(0, 1, 1, 0)), std::invalid_argument);
}

TEST_CASE("local normal form evaluates the twisted cocycle", "[normal-form]") {
  auto split = make_slice_splitting(Mat::Identity(2, 2), 0, 0, 2, mat2(0, -1, 1, 0));
  auto rep = make_torus_representation(Mat::Identity(1, 1));
  Vec g1(2), g2(2);
  g1 << 1, 0;
  g2 << 0, 1;
  Vec k1 = local_normal_form(split, rep, g1, Vec(0), Vec(0));
  Vec k2 = local_normal_form(split, rep, g2, Vec(0), Vec(0));
  REQUIRE(k1[0] == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(k1[1] == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(k2[0] == Catch::Approx(-1.0).margin(1e-15));
  REQUIRE(k2[1] == Catch::Approx(0.0).margin(1e-15));

  REQUIRE_THROWS_AS(local_normal_form(split, rep, g1, Vec(0), Vec::Zero(2)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(local_normal_form(split, rep, Vec::Zero(3), Vec(0), Vec(0)),
                    std::invalid_argument);
}

TEST_CASE("local normal form matches the builtin model cocycles", "[normal-form]") {
  SECTION("full translation action: purely twisted block") {
    auto ex = make_torus_example("r2-on-t2");
    Mat chu = chu_map(ex.model, reduce_point(ex.model, Vec::Zero(2)));
    auto split = splitting_from_chu(chu);
    REQUIRE(split.dim_q == 2);
    auto rep = make_torus_representation(Mat::Identity(1, 1));
    std::mt19937_64 rng(7);
    for (int s = 0; s < 20; ++s) {
      Vec g(2);
      g << uniform_in(rng, -0.1, 0.1), uniform_in(rng, -0.1, 0.1);
      Vec lnf = local_normal_form(split, rep, g, Vec(0), Vec(0));
      // the model-side increment of K along the group direction G^T g
      Vec delta = tangent_momentum(ex.model, reduce_point(ex.model, Vec::Zero(2)),
                                   ex.model.generators.transpose() * g);
      REQUIRE((lnf - delta).cwiseAbs().maxCoeff() < 1e-12);
      REQUIRE((lnf - chu * g).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SECTION("circle action on the torus: purely free block") {
    auto ex = make_torus_example("t2-standard");
    Mat chu = chu_map(ex.model, reduce_point(ex.model, Vec::Zero(2)));
    REQUIRE(chu.cwiseAbs().maxCoeff() < 1e-15);
    auto split = splitting_from_chu(chu);
    REQUIRE(split.dim_m == 1);
    auto rep = make_torus_representation(Mat::Identity(1, 1));
    for (double rho : {-0.4, 0.0, 0.3}) {
      Vec lnf = local_normal_form(split, rep, Vec::Zero(1), Vec::Constant(1, rho), Vec(0));
      REQUIRE(std::abs(std::abs(lnf[0]) - std::abs(rho)) < 1e-15);
    }
  }
}

TEST_CASE("chart consistency fits the additive constant", "[normal-form]") {
  SECTION("circle action: free chart is exact") {
    auto ex = make_torus_example("t2-standard");
    auto split = splitting_from_chu(chu_map(ex.model, reduce_point(ex.model, Vec::Zero(2))));
    auto cc = chart_consistency(ex.model, split, ex.basepoint, ex.base_value);
    REQUIRE(cc.samples == 81);
    REQUIRE(cc.max_residual <= 1e-12);
    REQUIRE(cc.constant.cwiseAbs().maxCoeff() <= 1e-12);
  }

  SECTION("translation action: twisted chart is exact") {
    auto ex = make_torus_example("r2-on-t2");
    auto split = splitting_from_chu(chu_map(ex.model, reduce_point(ex.model, Vec::Zero(2))));
    auto cc = chart_consistency(ex.model, split, ex.basepoint, ex.base_value);
    REQUIRE(cc.samples == 81);
    REQUIRE(cc.max_residual <= 1e-12);
  }

  SECTION("rejects vertex blocks and bad charts") {
    auto ex = make_torus_example("t2-standard");
    auto vertex = make_slice_splitting(Mat::Identity(1, 1), 1, 0, 0, Mat(0, 0));
    REQUIRE_THROWS_AS(chart_consistency(ex.model, vertex, ex.basepoint, ex.base_value),
                      std::invalid_argument);
    auto split = splitting_from_chu(chu_map(ex.model, reduce_point(ex.model, Vec::Zero(2))));
    REQUIRE_THROWS_AS(chart_consistency(ex.model, split, ex.basepoint, ex.base_value, 0.5, 1),
                      std::invalid_argument);
  }
}

TEST_CASE("normal form meshes expose the factor maps", "[normal-form]") {
  auto split = make_slice_splitting(Mat::Identity(3, 3), 0, 1, 2, mat2(0, -1, 1, 0));
  auto rep = make_torus_representation(Mat::Identity(1, 1));
  NormalFormMeshOptions opt;
  opt.m_res = 5;
  opt.g_res = 5;
  auto parts = normal_form_part_maps(split, rep, opt);
  REQUIRE(parts.size() == 2);
  REQUIRE(parts[0].first == "free");
  REQUIRE(parts[1].first == "twisted");
  REQUIRE(parts[0].second.domain_points.size() == 5);
  REQUIRE(parts[1].second.domain_points.size() == 25);
  // the free factor moves along the m-row of the basis
  REQUIRE(parts[0].second.values[0].size() == 3);
  REQUIRE((parts[0].second.values[0] - Vec::Unit(3, 0) * (-1.0)).norm() < 1e-12);
}

TEST_CASE("local properties hold on model splittings", "[normal-form]") {
  SECTION("free plus twisted") {
    auto split = make_slice_splitting(Mat::Identity(3, 3), 0, 1, 2, mat2(0, -1, 1, 0));
    auto rep = make_torus_representation(Mat::Identity(1, 1));
    NormalFormMeshOptions opt;
    opt.m_res = 5;
    opt.g_res = 5;
    auto report = check_local_properties(split, rep, opt);
    REQUIRE(report.parts.size() == 3);
    REQUIRE(report.parts[2].first == "product");
    REQUIRE(report.all_pass);
    REQUIRE(report.min_all_fraction == 1.0);
    REQUIRE(report.product_fibers.all_connected);
    REQUIRE(report.product_fibers.histogram.at(1) == 125);
  }

  SECTION("vertex block from a linear representation") {
    auto split = make_slice_splitting(Mat::Identity(2, 2), 2, 0, 0, Mat(0, 0));
    auto rep = make_torus_representation(Mat::Identity(2, 2));
    NormalFormMeshOptions opt;
    opt.z_rings = 3;
    opt.z_sectors = 8;
    auto report = check_local_properties(split, rep, opt);
    REQUIRE(report.parts.size() == 1);
    REQUIRE(report.parts[0].first == "vertex");
    REQUIRE(report.all_pass);
    REQUIRE(report.product_fibers.all_connected);
  }
}
