#pragma once

// Built-in example models: flat-torus actions with their holonomy and
// momentum data, and a linear torus representation on C^2, each with a mesh
// builder producing a SampledMap for the verification harness.

#include "cylmom/holonomy_momentum.hpp"
#include "cylmom/ltg_harness.hpp"
#include "cylmom/normal_form.hpp"

#include <string>

namespace cylmom {

struct TorusExample {
  std::string name;
  SymplecticTorusModel model;
  HolonomyResult holonomy;
  // Target subgroup for the sampled presentation.  Equals the holonomy group
  // except for t2-doubled, whose fiber analysis uses the compact circle
  // presentation exp(2 i phi_2) (a coarser closed subgroup containing the
  // holonomy), where the disconnected fibers appear.
  ClosedSubgroup mesh_group;
  Vec basepoint;
  Vec base_value;
};

struct RepExample {
  std::string name;
  TorusRepresentation rep;
  double radius = 1.5;
};

inline SymplecticTorusModel flat_t2_model(double form_scale, const Mat& generators) {
  Mat omega(2, 2);
  omega << 0, form_scale, -form_scale, 0;
  Vec periods = Vec::Constant(2, 2 * kPi);
  return make_torus_model(omega, periods, generators);
}

// t2-standard: one circle acting on T^2, K = phi_2 mod 2 pi.
// t2-doubled: same action with the form doubled, K = 2 phi_2; sampled in the
//   circle presentation every fiber has two components.
// r2-on-t2: the full translation action, K a bijection onto R^2 / 2 pi Z^2.
inline TorusExample make_torus_example(const std::string& name) {
  Mat G;
  double scale = 1.0;
  if (name == "t2-standard") {
    G = Mat(1, 2);
    G << 1, 0;
  } else if (name == "t2-doubled") {
    G = Mat(1, 2);
    G << 1, 0;
    scale = 2.0;
  } else if (name == "r2-on-t2") {
    G = Mat::Identity(2, 2);
  } else {
    throw std::invalid_argument("make_torus_example: unknown example " + name);
  }
  TorusExample ex;
  ex.name = name;
  ex.model = flat_t2_model(scale, G);
  ex.basepoint = Vec::Zero(2);
  ex.base_value = Vec::Zero(ex.model.k());
  ex.holonomy = holonomy_group(ex.model, ex.basepoint);
  ex.mesh_group = ex.holonomy.group;
  if (name == "t2-doubled") {
    Mat lat(1, 1);
    lat(0, 0) = 2 * kPi;
    ex.mesh_group = make_closed_subgroup(1, Mat(0, 1), lat);
  }
  return ex;
}

// linear-torus-rep: T^2 acting on C^2 with weights e_1, e_2 restricted to the
// ball |z| <= radius; the image is the full triangle spanned by the weights.
inline RepExample make_rep_example() {
  RepExample ex;
  ex.name = "linear-torus-rep";
  ex.rep = make_torus_representation(Mat::Identity(2, 2));
  ex.radius = 1.5;
  return ex;
}

inline SampledMap torus_momentum_mesh(const TorusExample& ex, int resolution) {
  TargetSpace target = cylinder_target(ex.mesh_group);
  return wrapped_grid_mesh(ex.model.periods, resolution,
                           [&ex](const Vec& lift) -> Vec {
                             return momentum_at(ex.model, ex.mesh_group, ex.basepoint,
                                                ex.base_value, lift)
                                 .rep;
                           },
                           target);
}

inline SampledMap rep_momentum_mesh(const RepExample& ex, int n_r, int n_theta) {
  TargetSpace target = euclidean_target(ex.rep.torus_rank());
  return polar_ball_mesh(ex.rep.complex_dim(), ex.radius, n_r, n_theta,
                         [&ex](const Vec& z) -> Vec { return rep_momentum(ex.rep, z); },
                         target);
}

struct ExampleInfo {
  std::string name;
  std::string kind;  // "torus-model" or "linear-rep"
  std::string description;
};

inline std::vector<ExampleInfo> list_builtin_examples() {
  return {
      {"t2-standard", "torus-model",
       "circle acting on the flat two-torus; cylinder-valued momentum phi_2 mod 2 pi"},
      {"t2-doubled", "torus-model",
       "doubled symplectic form on the flat two-torus; every momentum fiber has two components"},
      {"r2-on-t2", "torus-model",
       "full translation action on the flat two-torus; momentum is a torus-valued bijection"},
      {"linear-torus-rep", "linear-rep",
       "linear T^2 representation on C^2 over a ball; image is a triangle in R^2"},
  };
}

// Mesh for any built-in example.  For torus models, resolution is the grid
// size per axis; for the linear representation it sets the ring count
// (resolution / 4) and sector count (resolution).
inline SampledMap build_example_mesh(const std::string& name, int resolution) {
  if (resolution < 8) throw std::invalid_argument("build_example_mesh: resolution must be >= 8");
  if (name == "linear-torus-rep") {
    RepExample ex = make_rep_example();
    return rep_momentum_mesh(ex, std::max(2, resolution / 4), std::max(8, resolution));
  }
  return torus_momentum_mesh(make_torus_example(name), resolution);
}

}  // namespace cylmom
