#pragma once

// Local normal form of the momentum map near an orbit: vertex part (momentum
// of a linear torus representation), free part (linear in the slice
// coordinate) and twisted part (driven by an invertible Chu pairing), plus
// sampled verification that the normal form satisfies the local conditions.

#include "cylmom/common.hpp"
#include "cylmom/ltg_harness.hpp"

#include <string>
#include <utility>

namespace cylmom {

// Linear torus representation on C^m: row j of weights is the weight of the
// j-th complex coordinate in the dual algebra R^kprime.
struct TorusRepresentation {
  Mat weights;

  int complex_dim() const { return static_cast<int>(weights.rows()); }
  int torus_rank() const { return static_cast<int>(weights.cols()); }
};

inline TorusRepresentation make_torus_representation(const Mat& weights) {
  if (weights.rows() == 0 || weights.cols() == 0) {
    throw std::invalid_argument("make_torus_representation: empty weight matrix");
  }
  if (!weights.allFinite()) {
    throw std::invalid_argument("make_torus_representation: weights must be finite");
  }
  return {weights};
}

// J_V(z) = 1/2 sum_j |z_j|^2 alpha_j with z = (x_1, y_1, ..., x_m, y_m).
inline Vec rep_momentum(const TorusRepresentation& rep, const Vec& z) {
  if (z.size() != 2 * rep.complex_dim()) {
    throw std::invalid_argument("rep_momentum: z must have one (re, im) pair per weight");
  }
  Vec out = Vec::Zero(rep.torus_rank());
  for (int j = 0; j < rep.complex_dim(); ++j) {
    double r2 = z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1];
    out += 0.5 * r2 * rep.weights.row(j).transpose();
  }
  return out;
}

// Gradient of z -> <J_V(z), xi>: block j equals (alpha_j . xi) z_j.
inline Vec rep_momentum_gradient(const TorusRepresentation& rep, const Vec& xi, const Vec& z) {
  if (xi.size() != rep.torus_rank() || z.size() != 2 * rep.complex_dim()) {
    throw std::invalid_argument("rep_momentum_gradient: dimension mismatch");
  }
  Vec out(z.size());
  for (int j = 0; j < rep.complex_dim(); ++j) {
    double c = rep.weights.row(j).dot(xi);
    out[2 * j] = c * z[2 * j];
    out[2 * j + 1] = c * z[2 * j + 1];
  }
  return out;
}

// Sample of the image of the ball |z| <= radius: nonnegative simplex
// combinations of the weights scaled by radius^2 / 2, corners included.
inline std::vector<Vec> rep_image_cone(const TorusRepresentation& rep, double radius,
                                       int samples, std::uint64_t seed = 11) {
  if (radius <= 0.0 || samples < 0) throw std::invalid_argument("rep_image_cone: bad arguments");
  const int m = rep.complex_dim();
  const double scale = 0.5 * radius * radius;
  std::vector<Vec> out;
  out.push_back(Vec::Zero(rep.torus_rank()));
  for (int j = 0; j < m; ++j) out.push_back(scale * rep.weights.row(j).transpose());
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    // Dirichlet(1,...,1) over the solid simplex sum s_j <= 1.
    Vec e(m + 1);
    for (int j = 0; j <= m; ++j) e[j] = -std::log(uniform01(rng));
    Vec v = Vec::Zero(rep.torus_rank());
    for (int j = 0; j < m; ++j) v += (e[j] / e.sum()) * scale * rep.weights.row(j).transpose();
    out.push_back(v);
  }
  return out;
}

// Orthogonal splitting of the dual algebra R^k into the vertex block (image
// of the fixed-point representation), the free block and the twisted block
// with an invertible Chu pairing.  Rows of basis are grouped gm | m | q.
struct SliceSplitting {
  int k = 0;
  int dim_gm = 0, dim_m = 0, dim_q = 0;
  Mat basis;
  Mat chu_q;

  Mat gm_rows() const { return basis.topRows(dim_gm); }
  Mat m_rows() const { return basis.middleRows(dim_gm, dim_m); }
  Mat q_rows() const { return basis.bottomRows(dim_q); }
};

inline SliceSplitting make_slice_splitting(const Mat& basis, int dim_gm, int dim_m, int dim_q,
                                           const Mat& chu_q) {
  const int k = static_cast<int>(basis.rows());
  if (dim_gm < 0 || dim_m < 0 || dim_q < 0 || dim_gm + dim_m + dim_q != k ||
      basis.cols() != k || k == 0) {
    throw std::invalid_argument("make_slice_splitting: inconsistent dimensions");
  }
  if ((basis * basis.transpose() - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("make_slice_splitting: basis rows must be orthonormal");
  }
  if (chu_q.rows() != dim_q || chu_q.cols() != dim_q) {
    throw std::invalid_argument("make_slice_splitting: chu_q must be dim_q x dim_q");
  }
  if (dim_q > 0) {
    if ((chu_q + chu_q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("make_slice_splitting: chu_q must be antisymmetric");
    }
    if (!Eigen::FullPivLU<Mat>(chu_q).isInvertible()) {
      throw std::invalid_argument("make_slice_splitting: chu_q must be invertible");
    }
  }
  return {k, dim_gm, dim_m, dim_q, basis, chu_q};
}

// Splitting induced by a Chu matrix alone (no vertex block): the kernel of
// chu carries the free directions, its image the twisted ones.
inline SliceSplitting splitting_from_chu(const Mat& chu) {
  const int k = static_cast<int>(chu.rows());
  if (k == 0 || chu.cols() != k) throw std::invalid_argument("splitting_from_chu: bad matrix");
  if ((chu + chu.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("splitting_from_chu: matrix must be antisymmetric");
  }
  Eigen::JacobiSVD<Mat> svd(chu, Eigen::ComputeFullU);
  double top = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-12 * std::max(1.0, top)) ++rank;
  }
  const int dim_q = rank, dim_m = k - rank;
  Mat basis(k, k);
  basis.topRows(dim_m) = svd.matrixU().rightCols(dim_m).transpose();
  basis.bottomRows(dim_q) = svd.matrixU().leftCols(dim_q).transpose();
  Mat bq = basis.bottomRows(dim_q);
  return make_slice_splitting(basis, 0, dim_m, dim_q, Mat(bq * chu * bq.transpose()));
}

// Momentum map of the local model Y = G x m* x V in ambient coordinates:
//   K(g, rho, z) = Bgm^T J_V(z) + Bm^T rho + Bq^T (chu_q gq),  gq = Bq g.
// The twisted sign matches the cocycle K(m + G^T g) - K(m) = Chu g.
inline Vec local_normal_form(const SliceSplitting& split, const TorusRepresentation& rep,
                             const Vec& g, const Vec& rho, const Vec& z) {
  if (split.dim_gm > 0 && rep.torus_rank() != split.dim_gm) {
    throw std::invalid_argument("local_normal_form: vertex rep rank must equal dim_gm");
  }
  if (split.dim_gm == 0 && z.size() != 0) {
    throw std::invalid_argument("local_normal_form: no vertex block, z must be empty");
  }
  if (g.size() != split.k || rho.size() != split.dim_m) {
    throw std::invalid_argument("local_normal_form: dimension mismatch");
  }
  Vec out = Vec::Zero(split.k);
  if (split.dim_gm > 0) out += split.gm_rows().transpose() * rep_momentum(rep, z);
  if (split.dim_m > 0) out += split.m_rows().transpose() * rho;
  if (split.dim_q > 0) {
    Vec gq = split.q_rows() * g;
    out += split.q_rows().transpose() * (split.chu_q * gq);
  }
  return out;
}

struct NormalFormMeshOptions {
  double g_extent = 1.0;
  int g_res = 7;
  double m_extent = 1.0;
  int m_res = 7;
  double z_radius = 1.0;
  int z_rings = 4;
  int z_sectors = 12;
  double eps_fiber = 1e-9;
};

// The three factor maps of the local model as sampled meshes, with shared
// Euclidean target R^k; empty name slots are skipped.
inline std::vector<std::pair<std::string, SampledMap>> normal_form_part_maps(
    const SliceSplitting& split, const TorusRepresentation& rep,
    const NormalFormMeshOptions& opt = {}) {
  std::vector<std::pair<std::string, SampledMap>> parts;
  const TargetSpace target = euclidean_target(split.k);
  if (split.dim_gm > 0) {
    const int m = rep.complex_dim();
    parts.push_back({"vertex", polar_ball_mesh(m, opt.z_radius, opt.z_rings, opt.z_sectors,
                                               [&](const Vec& z) -> Vec {
                                                 return split.gm_rows().transpose() *
                                                        rep_momentum(rep, z);
                                               },
                                               target)});
  }
  if (split.dim_m > 0) {
    Vec lo = Vec::Constant(split.dim_m, -opt.m_extent);
    Vec hi = Vec::Constant(split.dim_m, opt.m_extent);
    parts.push_back({"free", box_mesh(lo, hi, std::vector<int>(split.dim_m, opt.m_res),
                                      [&](const Vec& rho) -> Vec {
                                        return split.m_rows().transpose() * rho;
                                      },
                                      target)});
  }
  if (split.dim_q > 0) {
    Vec lo = Vec::Constant(split.dim_q, -opt.g_extent);
    Vec hi = Vec::Constant(split.dim_q, opt.g_extent);
    parts.push_back({"twisted", box_mesh(lo, hi, std::vector<int>(split.dim_q, opt.g_res),
                                         [&](const Vec& gq) -> Vec {
                                           return split.q_rows().transpose() *
                                                  (split.chu_q * gq);
                                         },
                                         target)});
  }
  if (parts.empty()) throw std::invalid_argument("normal_form_part_maps: empty splitting");
  return parts;
}

// Consistency of the local normal form with the globally transported
// momentum over a chart around the basepoint: there must be a constant c
// with  K(base + G^T g + N rho) - base_value = local_normal_form(g, rho) + c
// where the slice directions N lift the free block through the momentum
// tangent map.  The constant is fitted by least squares (the mean residual)
// and the maximum deviation from it is reported.
struct ChartConsistency {
  Vec constant;
  double max_residual = 0.0;
  int samples = 0;
};

template <typename Model>
inline ChartConsistency chart_consistency(const Model& model, const SliceSplitting& split,
                                          const Vec& base, const Vec& base_value,
                                          double extent = 0.5, int res = 9) {
  const int k = model.k();
  if (split.k != k) throw std::invalid_argument("chart_consistency: splitting rank mismatch");
  if (split.dim_gm != 0) {
    throw std::invalid_argument("chart_consistency: vertex blocks have no torus chart");
  }
  if (res < 2 || extent <= 0.0) throw std::invalid_argument("chart_consistency: bad chart");
  const Mat gw = model.generators * model.omega;  // tangent map of K, k x dim
  Mat slice_dirs(model.dim, split.dim_m);         // min-norm lift of the free block
  if (split.dim_m > 0) {
    slice_dirs = Eigen::CompleteOrthogonalDecomposition<Mat>(gw).solve(
        Mat(split.m_rows().transpose()));
  }
  auto rep = make_torus_representation(Mat::Identity(1, 1));  // unused (no vertex block)

  const int axes = k + split.dim_m;
  std::vector<Vec> residuals;
  std::vector<int> idx(axes, 0);
  while (true) {
    Vec g(k), rho(split.dim_m);
    for (int i = 0; i < k; ++i) g[i] = -extent + 2.0 * extent * idx[i] / (res - 1);
    for (int i = 0; i < split.dim_m; ++i) {
      rho[i] = -extent + 2.0 * extent * idx[k + i] / (res - 1);
    }
    Vec lift = base + model.generators.transpose() * g + slice_dirs * rho;
    Vec value = base_value + gw * (lift - base);  // chart-sized: no projection
    residuals.push_back(value - base_value - local_normal_form(split, rep, g, rho, Vec(0)));
    int ax = 0;
    for (; ax < axes; ++ax) {
      if (++idx[ax] < res) break;
      idx[ax] = 0;
    }
    if (ax == axes) break;
  }
  ChartConsistency out;
  out.samples = static_cast<int>(residuals.size());
  out.constant = Vec::Zero(k);
  for (const Vec& r : residuals) out.constant += r;
  out.constant /= static_cast<double>(residuals.size());
  for (const Vec& r : residuals) {
    out.max_residual = std::max(out.max_residual, (r - out.constant).cwiseAbs().maxCoeff());
  }
  return out;
}

struct NormalFormReport {
  std::vector<std::pair<std::string, LocalConditionsReport>> parts;
  FiberReport product_fibers;
  double min_all_fraction = 1.0;
  bool all_pass = true;
};

// Runs the local-condition checks on every factor of the local model and on
// their product.
inline NormalFormReport check_local_properties(const SliceSplitting& split,
                                               const TorusRepresentation& rep,
                                               const NormalFormMeshOptions& mopt = {},
                                               const LocalConditionsOptions& copt = {}) {
  auto factor_maps = normal_form_part_maps(split, rep, mopt);
  std::vector<std::pair<std::string, SampledMap>> maps = factor_maps;
  if (factor_maps.size() > 1) {
    SampledMap prod = factor_maps[0].second;
    for (std::size_t i = 1; i < factor_maps.size(); ++i) {
      prod = product_mesh(prod, factor_maps[i].second,
                          [](const Vec& a, const Vec& b) -> Vec { return a + b; },
                          prod.target);
    }
    maps.push_back({"product", std::move(prod)});
  }
  NormalFormReport rep_out;
  for (auto& [name, map] : maps) {
    auto q = build_fiber_quotient(map, mopt.eps_fiber);
    auto lc = check_local_conditions(map, q, copt);
    rep_out.min_all_fraction = std::min(rep_out.min_all_fraction, lc.all_fraction);
    rep_out.all_pass = rep_out.all_pass && lc.all_fraction == 1.0;
    if (name == "product" || maps.size() == 1) rep_out.product_fibers = fiber_connectivity_report(q);
    rep_out.parts.push_back({name, std::move(lc)});
  }
  return rep_out;
}

}  // namespace cylmom
