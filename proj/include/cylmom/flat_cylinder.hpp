#pragma once

// Flat cylinders R^n / H for a closed subgroup H = span(V) + Z-lattice.
// Canonical representatives, quotient distance via bounded lattice
// enumeration (closest-vector search), minimizing-lift enumeration, straight
// geodesics and the injectivity radius.

#include "cylmom/common.hpp"
#include "cylmom/metric_core.hpp"

#include <algorithm>
#include <memory>

namespace cylmom {

struct ClosedSubgroup {
  int ambient_dim = 0;
  Mat subspace_basis;  // a x n, rows span the connected subgroup part V
  Mat lattice_basis;   // b x n, rows generate the discrete part

  // Derived data (filled by make_closed_subgroup).
  Mat v_ortho;            // a x n, orthonormal rows spanning V
  Mat lat;                // b x n, lattice rows projected off V
  Mat gram_inv;           // b x b, inverse Gram matrix of lat rows
  double sigma_min = kInf;        // smallest singular value of lat
  double shortest_lattice = kInf; // min over k != 0 of |k . lat|

  int a() const { return static_cast<int>(subspace_basis.rows()); }
  int b() const { return static_cast<int>(lattice_basis.rows()); }
};

struct CylinderPoint {
  Vec rep;  // canonical: zero V-component, lattice coordinates in [0, 1)
  const ClosedSubgroup* group = nullptr;  // optional backpointer, not owned
};

struct GeodesicLift {
  Vec displacement;     // x - y - h for some h in H, projected off V
  VecI lattice_coeffs;  // the integer part of h in the projected lattice basis
  double norm = 0.0;
};

namespace detail {

inline Vec project_off_subspace(const ClosedSubgroup& H, const Vec& x) {
  if (H.a() == 0) return x;
  return x - H.v_ortho.transpose() * (H.v_ortho * x);
}

// Enumerates lattice shifts near w.  Returns the minimal norm of w - lat^T k;
// when out != nullptr, fills it with every shift of norm <= min + eps_gap,
// sorted by (norm, lexicographic coefficients).
inline double cvp_enumerate(const ClosedSubgroup& H, const Vec& w, double eps_gap,
                            std::vector<GeodesicLift>* out) {
  const int b = H.b();
  if (b == 0) {
    if (out) out->push_back(GeodesicLift{w, VecI(0), w.norm()});
    return w.norm();
  }
  Vec t = H.gram_inv * (H.lat * w);
  VecI k0(b);
  for (int i = 0; i < b; ++i) k0[i] = static_cast<int>(std::llround(t[i]));
  const double r0 = (w - H.lat.transpose() * k0.cast<double>()).norm();
  const double width = (r0 + eps_gap) / H.sigma_min + 1e-12;

  VecI lo(b), hi(b);
  long long count = 1;
  for (int i = 0; i < b; ++i) {
    lo[i] = std::min<int>(k0[i], static_cast<int>(std::ceil(t[i] - width)));
    hi[i] = std::max<int>(k0[i], static_cast<int>(std::floor(t[i] + width)));
    count *= hi[i] - lo[i] + 1;
  }
  if (count > 2'000'000) {
    throw UnsupportedRegime("flat_cylinder: lattice enumeration box too large");
  }

  double best = kInf;
  std::vector<std::pair<VecI, double>> kept;
  VecI k = lo;
  Vec cand(w.size());
  for (;;) {
    cand = w - H.lat.transpose() * k.cast<double>();
    double nrm = cand.norm();
    if (nrm < best) best = nrm;
    if (out && nrm <= best + eps_gap) kept.push_back({k, nrm});
    int d = 0;
    while (d < b && k[d] == hi[d]) {
      k[d] = lo[d];
      ++d;
    }
    if (d == b) break;
    ++k[d];
  }
  if (out) {
    for (auto& [kk, nrm] : kept) {
      if (nrm <= best + eps_gap) {
        out->push_back(GeodesicLift{w - H.lat.transpose() * kk.cast<double>(), kk, nrm});
      }
    }
    std::sort(out->begin(), out->end(), [](const GeodesicLift& x, const GeodesicLift& y) {
      if (x.norm != y.norm) return x.norm < y.norm;
      for (int i = 0; i < x.lattice_coeffs.size(); ++i) {
        if (x.lattice_coeffs[i] != y.lattice_coeffs[i]) {
          return x.lattice_coeffs[i] < y.lattice_coeffs[i];
        }
      }
      return false;
    });
  }
  return best;
}

}  // namespace detail

// Builds and validates H = span(subspace rows) + Z-span(lattice rows) in R^n.
inline ClosedSubgroup make_closed_subgroup(int ambient_dim, Mat subspace, Mat lattice) {
  if (ambient_dim <= 0) throw std::invalid_argument("ClosedSubgroup: ambient_dim must be >= 1");
  if (subspace.size() == 0) subspace = Mat(0, ambient_dim);
  if (lattice.size() == 0) lattice = Mat(0, ambient_dim);
  if (subspace.cols() != ambient_dim || lattice.cols() != ambient_dim) {
    throw std::invalid_argument("ClosedSubgroup: generator dimension mismatch");
  }
  ClosedSubgroup H;
  H.ambient_dim = ambient_dim;
  H.subspace_basis = subspace;
  H.lattice_basis = lattice;

  const int a = H.a(), b = H.b();
  if (a + b > ambient_dim) {
    throw std::invalid_argument("ClosedSubgroup: more generators than ambient dimensions");
  }
  if (a + b > 0) {
    Mat stacked(a + b, ambient_dim);
    if (a > 0) stacked.topRows(a) = subspace;
    if (b > 0) stacked.bottomRows(b) = lattice;
    Eigen::JacobiSVD<Mat> svd(stacked);
    if (svd.singularValues()(a + b - 1) <= 1e-9 * svd.singularValues()(0)) {
      throw std::invalid_argument(
          "ClosedSubgroup: subspace and lattice generators must be linearly independent");
    }
  }

  if (a > 0) {
    Eigen::HouseholderQR<Mat> qr(subspace.transpose());
    Mat q = qr.householderQ() * Mat::Identity(ambient_dim, a);
    H.v_ortho = q.transpose();
  } else {
    H.v_ortho = Mat(0, ambient_dim);
  }

  H.lat = Mat(b, ambient_dim);
  for (int i = 0; i < b; ++i) {
    H.lat.row(i) = detail::project_off_subspace(H, lattice.row(i).transpose()).transpose();
  }
  if (b > 0) {
    Eigen::JacobiSVD<Mat> svd(H.lat);
    H.sigma_min = svd.singularValues()(b - 1);
    H.gram_inv = (H.lat * H.lat.transpose()).inverse();

    double min_row = kInf;
    for (int i = 0; i < b; ++i) min_row = std::min(min_row, H.lat.row(i).norm());
    int box = std::max(1, static_cast<int>(std::ceil(min_row / H.sigma_min)));
    if (std::pow(2.0 * box + 1.0, b) > 5e6) {
      throw UnsupportedRegime("ClosedSubgroup: lattice too skew for enumeration");
    }
    VecI k = VecI::Constant(b, -box);
    for (;;) {
      if (k.squaredNorm() != 0) {
        double nrm = (H.lat.transpose() * k.cast<double>()).norm();
        H.shortest_lattice = std::min(H.shortest_lattice, nrm);
      }
      int d = 0;
      while (d < b && k[d] == box) {
        k[d] = -box;
        ++d;
      }
      if (d == b) break;
      ++k[d];
    }
    if (H.shortest_lattice < 1e-9) {
      throw std::invalid_argument("ClosedSubgroup: lattice part is not discrete");
    }
  }
  return H;
}

inline ClosedSubgroup trivial_subgroup(int ambient_dim) {
  return make_closed_subgroup(ambient_dim, Mat(0, ambient_dim), Mat(0, ambient_dim));
}

// Canonical representative of mu + H.
inline CylinderPoint project(const ClosedSubgroup& H, const Vec& mu) {
  if (mu.size() != H.ambient_dim) throw std::invalid_argument("project: dimension mismatch");
  Vec w = detail::project_off_subspace(H, mu);
  if (H.b() > 0) {
    Vec t = H.gram_inv * (H.lat * w);
    Vec kf(t.size());
    for (int i = 0; i < t.size(); ++i) kf[i] = std::floor(t[i]);
    w -= H.lat.transpose() * kf;
  }
  return CylinderPoint{w, &H};
}

// Fractional lattice coordinates of a representative (empty when b = 0).
inline Vec lattice_coords(const ClosedSubgroup& H, const Vec& rep) {
  if (H.b() == 0) return Vec(0);
  return H.gram_inv * (H.lat * rep);
}

// Quotient distance: min over h in H of |p - q - h|.  Accepts arbitrary
// representatives, not only canonical ones.
inline double cyl_distance(const ClosedSubgroup& H, const CylinderPoint& p,
                           const CylinderPoint& q) {
  Vec w = detail::project_off_subspace(H, p.rep - q.rep);
  return detail::cvp_enumerate(H, w, 0.0, nullptr);
}

// All lifts of the segment p -> q whose length is within eps_gap of minimal,
// sorted by (norm, lexicographic lattice coefficients).
inline std::vector<GeodesicLift> enumerate_minimizing_lifts(const ClosedSubgroup& H,
                                                            const CylinderPoint& p,
                                                            const CylinderPoint& q,
                                                            double eps_gap = kEpsGap) {
  Vec w = detail::project_off_subspace(H, q.rep - p.rep);
  std::vector<GeodesicLift> lifts;
  detail::cvp_enumerate(H, w, eps_gap, &lifts);
  return lifts;
}

// Every lift whose lattice coefficients lie within box_radius of the CVP
// center, sorted by norm; used for weak-convexity searches over
// non-minimizing geodesics.
inline std::vector<GeodesicLift> lifts_in_expanded_box(const ClosedSubgroup& H,
                                                       const CylinderPoint& p,
                                                       const CylinderPoint& q, int box_radius) {
  Vec w = detail::project_off_subspace(H, q.rep - p.rep);
  const int b = H.b();
  if (b == 0) return {GeodesicLift{w, VecI(0), w.norm()}};
  Vec t = H.gram_inv * (H.lat * w);
  VecI k(b);
  for (int i = 0; i < b; ++i) k[i] = static_cast<int>(std::llround(t[i])) - box_radius;
  VecI lo = k, hi = k + VecI::Constant(b, 2 * box_radius);
  std::vector<GeodesicLift> lifts;
  for (;;) {
    Vec disp = w - H.lat.transpose() * k.cast<double>();
    lifts.push_back(GeodesicLift{disp, k, disp.norm()});
    int d = 0;
    while (d < b && k[d] == hi[d]) {
      k[d] = lo[d];
      ++d;
    }
    if (d == b) break;
    ++k[d];
  }
  std::sort(lifts.begin(), lifts.end(),
            [](const GeodesicLift& x, const GeodesicLift& y) { return x.norm < y.norm; });
  return lifts;
}

// Metric handle for the quotient; safe to use with arbitrary representatives.
inline MetricSpace cylinder_space(const ClosedSubgroup& H) {
  auto hp = std::make_shared<const ClosedSubgroup>(H);
  return MetricSpace{[hp](const Vec& x, const Vec& y) {
    Vec w = detail::project_off_subspace(*hp, x - y);
    return detail::cvp_enumerate(*hp, w, 0.0, nullptr);
  }};
}

// Projection of the straight segment from p along the given lift, sampled at
// steps+1 points (canonical representatives).
inline Polyline geodesic_polyline(const ClosedSubgroup& H, const CylinderPoint& p,
                                  const CylinderPoint& q, const GeodesicLift& lift, int steps) {
  if (steps < 1) throw std::invalid_argument("geodesic_polyline: steps must be >= 1");
  Polyline poly{cylinder_space(H), {}};
  poly.points.reserve(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    double s = static_cast<double>(j) / steps;
    poly.points.push_back(project(H, p.rep + s * lift.displacement).rep);
  }
  (void)q;  // endpoint is p + displacement, which projects onto q by construction
  return poly;
}

// Half the shortest nonzero projected lattice vector; +inf without a lattice.
inline double injectivity_radius(const ClosedSubgroup& H) {
  return H.b() == 0 ? kInf : 0.5 * H.shortest_lattice;
}

// Group operations on the cylinder (the quotient is an Abelian group).
inline CylinderPoint cyl_add(const ClosedSubgroup& H, const CylinderPoint& p,
                             const CylinderPoint& q) {
  return project(H, p.rep + q.rep);
}

inline CylinderPoint cyl_sub(const ClosedSubgroup& H, const CylinderPoint& p,
                             const CylinderPoint& q) {
  return project(H, p.rep - q.rep);
}

}  // namespace cylmom
