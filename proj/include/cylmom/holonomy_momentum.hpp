#pragma once

// Holonomy of the flat momentum connection on M x g* and the induced
// cylinder-valued momentum map.  For the constant models the connection form
// pairs generators with omega, so transport along a polyline is a telescoping
// line integral; loop transports generate a finitely generated subgroup of
// g* = R^k whose closedness is validated before building the quotient.

#include "cylmom/common.hpp"
#include "cylmom/flat_cylinder.hpp"
#include "cylmom/symplectic_models.hpp"

#include <numeric>

namespace cylmom {

struct TransportResult {
  Vec delta_nu;                  // accumulated covector increment in R^k
  double estimated_error = 0.0;  // composite trapezoid vs halved segments
};

// Line integral of the contraction forms along a lift polyline.
inline TransportResult parallel_transport(const SymplecticTorusModel& model,
                                          const std::vector<Vec>& path) {
  if (path.empty()) throw std::invalid_argument("parallel_transport: empty path");
  const int k = model.k();
  TransportResult out;
  out.delta_nu = Vec::Zero(k);
  Vec refined = Vec::Zero(k);
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const Vec& p = path[j];
    const Vec& q = path[j + 1];
    if (p.size() != model.dim) throw std::invalid_argument("parallel_transport: bad point");
    Vec d = q - p;
    Vec mid = 0.5 * (p + q);
    for (int i = 0; i < k; ++i) {
      Vec a_p = contraction_form(model, reduce_point(model, p), i);
      Vec a_q = contraction_form(model, reduce_point(model, q), i);
      Vec a_m = contraction_form(model, reduce_point(model, mid), i);
      out.delta_nu[i] += 0.5 * (a_p.dot(d) + a_q.dot(d));
      refined[i] += 0.25 * (a_p.dot(d) + a_m.dot(d)) + 0.25 * (a_m.dot(d) + a_q.dot(d));
    }
  }
  out.estimated_error = k > 0 ? (out.delta_nu - refined).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

namespace detail {

// Best rational p/q with q <= qmax approximating x within tol (continued
// fractions).  Returns false when no denominator up to qmax fits.
inline bool rationalize(double x, long long qmax, double tol, long long& p_out,
                        long long& q_out) {
  long long p0 = 1, q0 = 0;  // convergents
  long long p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (std::abs(x - static_cast<double>(p1) / q1) <= tol) {
      p_out = p1;
      q_out = q1;
      return true;
    }
    if (frac < 1e-15) break;
    double inv = 1.0 / frac;
    long long a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  if (std::abs(x - static_cast<double>(p1) / q1) <= tol) {
    p_out = p1;
    q_out = q1;
    return true;
  }
  return false;
}

// Row basis of the integer lattice generated by the given rows (Euclidean
// elimination; entries stay small at desk scale).
inline std::vector<std::vector<long long>> integer_lattice_basis(
    std::vector<std::vector<long long>> rows, int cols) {
  std::vector<std::vector<long long>> basis;
  int col = 0;
  while (col < cols && !rows.empty()) {
    for (;;) {
      int pivot = -1;
      long long best = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        long long v = std::llabs(rows[r][col]);
        if (v != 0 && (pivot < 0 || v < best)) {
          pivot = static_cast<int>(r);
          best = v;
        }
      }
      if (pivot < 0) break;
      bool others = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(r) == pivot || rows[r][col] == 0) continue;
        long long q = rows[r][col] / rows[pivot][col];
        for (int c = 0; c < cols; ++c) rows[r][c] -= q * rows[pivot][c];
        if (rows[r][col] != 0) others = true;
      }
      if (!others) {
        basis.push_back(rows[pivot]);
        rows.erase(rows.begin() + pivot);
        break;
      }
    }
    // drop rows that became zero
    std::erase_if(rows, [&](const std::vector<long long>& r) {
      return std::all_of(r.begin(), r.end(), [](long long v) { return v == 0; });
    });
    ++col;
  }
  return basis;
}

// Builds a lattice basis for the subgroup of R^k generated by the transports.
// Rationally dependent generators refine the lattice; irrational dependence
// means the subgroup is not closed and is refused.
inline Mat assemble_holonomy_lattice(int k, const std::vector<Vec>& transports) {
  std::vector<Vec> basis;
  auto stack = [&]() {
    Mat m(static_cast<int>(basis.size()), k);
    for (std::size_t i = 0; i < basis.size(); ++i) m.row(i) = basis[i].transpose();
    return m;
  };
  for (const Vec& g_raw : transports) {
    Vec g = g_raw;
    if (g.norm() <= 1e-9) continue;
    if (basis.empty()) {
      basis.push_back(g);
      continue;
    }
    ClosedSubgroup cur = make_closed_subgroup(k, Mat(0, k), stack());
    std::vector<GeodesicLift> lifts;
    detail::cvp_enumerate(cur, g, 0.0, &lifts);
    Vec red = lifts[0].displacement;  // g reduced by its nearest lattice point
    if (red.norm() <= 1e-9) continue;

    Mat b = stack();
    Eigen::ColPivHouseholderQR<Mat> qr(b.transpose());
    Vec t = qr.solve(red);
    double span_resid = (b.transpose() * t - red).norm();
    if (span_resid > 1e-9) {
      basis.push_back(red);
      continue;
    }

    // red lies in span(basis) but not in the lattice: refine rationally.
    t = qr.solve(g);  // coordinates of the raw transport
    const int nb = static_cast<int>(basis.size());
    std::vector<long long> p(nb), q(nb);
    long long denom = 1;
    for (int i = 0; i < nb; ++i) {
      if (!rationalize(t[i], 64, 1e-6, p[i], q[i])) {
        throw UnsupportedRegime(
            "holonomy closure not supported: irrational ratio between loop transports");
      }
      denom = std::lcm(denom, q[i]);
      if (denom > 1'000'000) {
        throw UnsupportedRegime("holonomy closure not supported: denominators overflow");
      }
    }
    std::vector<std::vector<long long>> rows;
    for (int i = 0; i < nb; ++i) {
      std::vector<long long> r(nb, 0);
      r[i] = denom;
      rows.push_back(r);
    }
    std::vector<long long> extra(nb);
    for (int i = 0; i < nb; ++i) extra[i] = p[i] * (denom / q[i]);
    rows.push_back(extra);
    auto reduced = integer_lattice_basis(rows, nb);
    if (static_cast<int>(reduced.size()) != nb) {
      throw InternalError("holonomy lattice refinement lost rank");
    }
    std::vector<Vec> next;
    for (const auto& r : reduced) {
      Vec v = Vec::Zero(k);
      for (int i = 0; i < nb; ++i) v += (static_cast<double>(r[i]) / denom) * basis[i];
      next.push_back(v);
    }
    basis = std::move(next);
  }
  return stack();
}

}  // namespace detail

struct HolonomyResult {
  ClosedSubgroup group;
  Mat loop_transports;  // one row per fundamental loop
};

// Hamiltonian holonomy generated by the fundamental-loop transports.  The
// connected part is always trivial here: a finitely generated subgroup either
// is a lattice or fails closedness and is refused.
inline HolonomyResult holonomy_group(const SymplecticTorusModel& model, const Vec& base,
                                     int steps = 32) {
  auto loops = loop_basis(model, base, steps);
  const int k = model.k();
  HolonomyResult out;
  out.loop_transports = Mat(static_cast<int>(loops.size()), k);
  std::vector<Vec> transports;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    Vec d = parallel_transport(model, loops[i].points).delta_nu;
    out.loop_transports.row(i) = d.transpose();
    transports.push_back(d);
  }
  Mat lattice = detail::assemble_holonomy_lattice(k, transports);
  try {
    out.group = make_closed_subgroup(k, Mat(0, k), lattice);
  } catch (const std::invalid_argument& e) {
    throw UnsupportedRegime(std::string("holonomy closure not supported: ") + e.what());
  }
  return out;
}

struct MomentumValue {
  CylinderPoint value;
  Vec basepoint;   // lift coordinates of the reference point
  Vec base_value;  // chosen representative of K(basepoint)
};

// Momentum value at the endpoint of a lift path from the basepoint.
inline MomentumValue momentum_map(const SymplecticTorusModel& model, const ClosedSubgroup& H,
                                  const Vec& base, const Vec& base_value,
                                  const std::vector<Vec>& path) {
  if (path.empty()) throw std::invalid_argument("momentum_map: empty path");
  if (base_value.size() != model.k()) {
    throw std::invalid_argument("momentum_map: base value must live in R^k");
  }
  Vec start = reduce_point(model, path.front()).coords;
  Vec base_red = reduce_point(model, base).coords;
  if ((start - base_red).norm() > 1e-9) {
    throw std::invalid_argument("momentum_map: path must start at the basepoint");
  }
  TransportResult tr = parallel_transport(model, path);
  return MomentumValue{project(H, base_value + tr.delta_nu), base, base_value};
}

// Momentum value along the straight lift segment from base to the point.
inline CylinderPoint momentum_at(const SymplecticTorusModel& model, const ClosedSubgroup& H,
                                 const Vec& base, const Vec& base_value, const Vec& lift) {
  Vec delta = model.generators * (model.omega * (lift - base));
  return project(H, base_value + delta);
}

// Differential of the momentum map: <nu, xi_i> = omega(xi_i, v).
inline Vec tangent_momentum(const SymplecticTorusModel& model, const ModelPoint& m, const Vec& v) {
  if (m.coords.size() != model.dim || v.size() != model.dim) {
    throw std::invalid_argument("tangent_momentum: dimension mismatch");
  }
  return model.generators * (model.omega * v);
}

inline int momentum_rank(const SymplecticTorusModel& model) {
  if (model.k() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(model.generators * model.omega);
  return static_cast<int>(svd.rank());
}

// Rows span ker(T_m K) = the omega-orthogonal of the generator span.
inline Mat momentum_kernel_basis(const SymplecticTorusModel& model) {
  Mat gw = model.generators * model.omega;
  Eigen::FullPivLU<Mat> lu(gw);
  if (lu.dimensionOfKernel() == 0) return Mat(0, model.dim);
  return lu.kernel().transpose();
}

// Validates invariance of h along the generators at sampled points.
inline void require_invariant(const SymplecticTorusModel& model, const ModelFunction& h,
                              double tol = 1e-5, std::uint64_t seed = 2027) {
  std::mt19937_64 rng(seed);
  for (int s = 0; s < 32; ++s) {
    Vec x(model.dim);
    for (int i = 0; i < model.dim; ++i) {
      double hi = std::isfinite(model.periods[i]) ? model.periods[i] : 2.0;
      x[i] = uniform_in(rng, 0.0, hi);
    }
    Vec grad = detail::fd_gradient(model, h, x);
    for (int i = 0; i < model.k(); ++i) {
      double deriv = grad.dot(model.generators.row(i).transpose());
      if (std::abs(deriv) > tol * (1.0 + grad.norm())) {
        throw std::invalid_argument("noether_check: h is not invariant under the generators");
      }
    }
  }
}

// Max cylinder drift of K along the flow of an invariant Hamiltonian.
inline double noether_check(const SymplecticTorusModel& model, const ClosedSubgroup& H,
                            const ModelFunction& h, const Vec& base, const Vec& base_value,
                            const Vec& start_lift, double t, double dt, int checkpoints = 16) {
  require_invariant(model, h);
  FlowResult flow = hamiltonian_flow(model, h, start_lift, t, dt);
  std::vector<Vec> to_start = {base, start_lift};
  CylinderPoint k0 = momentum_map(model, H, base, base_value, to_start).value;
  double drift = 0.0;
  const auto& traj = flow.trajectory;
  const std::size_t stride = std::max<std::size_t>(1, traj.size() / checkpoints);
  for (std::size_t s = 0; s < traj.size(); s += stride) {
    std::vector<Vec> path = {base};
    path.insert(path.end(), traj.begin(), traj.begin() + s + 1);
    CylinderPoint ks = momentum_map(model, H, base, base_value, path).value;
    drift = std::max(drift, cyl_distance(H, ks, k0));
  }
  std::vector<Vec> full = {base};
  full.insert(full.end(), traj.begin(), traj.end());
  CylinderPoint kend = momentum_map(model, H, base, base_value, full).value;
  return std::max(drift, cyl_distance(H, kend, k0));
}

// Cocycle sigma(g) = K(Phi_g(m)) - K(m); validated m-independent by sampling.
inline CylinderPoint nonequivariance_cocycle(const SymplecticTorusModel& model,
                                             const ClosedSubgroup& H, const Vec& g,
                                             const Vec& base, const Vec& base_value,
                                             int samples = 8, std::uint64_t seed = 5151) {
  std::mt19937_64 rng(seed);
  CylinderPoint sigma;
  for (int s = 0; s < samples; ++s) {
    Vec m = base;
    if (s > 0) {
      for (int i = 0; i < model.dim; ++i) {
        double hi = std::isfinite(model.periods[i]) ? model.periods[i] : 2.0;
        m[i] += uniform_in(rng, 0.0, hi);
      }
    }
    CylinderPoint km = momentum_at(model, H, base, base_value, m);
    CylinderPoint kgm = momentum_at(model, H, base, base_value, translate_lift(model, m, g));
    CylinderPoint diff = cyl_sub(H, kgm, km);
    if (s == 0) {
      sigma = diff;
    } else if (cyl_distance(H, diff, sigma) > 1e-9) {
      throw InternalError("nonequivariance_cocycle: point dependence detected");
    }
  }
  return sigma;
}

// Functions on the quotient cylinder (must be constant on H-orbits).
using CylFunction = std::function<double(const CylinderPoint&)>;

// Poisson bracket on the cylinder through the Chu pairing:
// {f,g}(at) = grad(f.pi)^T Psi(m_ref) grad(g.pi), central differences on g*.
inline double poisson_bracket(const SymplecticTorusModel& model, const ClosedSubgroup& H,
                              const CylFunction& f, const CylFunction& g, const CylinderPoint& at,
                              const ModelPoint& m_ref) {
  const int k = model.k();
  if (at.rep.size() != k) throw std::invalid_argument("poisson_bracket: value dim mismatch");
  double step = std::min(1e-4, injectivity_radius(H) / 10.0);
  auto grad = [&](const CylFunction& fn) {
    Vec gr(k);
    Vec mu = at.rep;
    for (int i = 0; i < k; ++i) {
      mu[i] = at.rep[i] + step;
      double fp = fn(project(H, mu));
      mu[i] = at.rep[i] - step;
      double fm = fn(project(H, mu));
      mu[i] = at.rep[i];
      gr[i] = (fp - fm) / (2.0 * step);
    }
    return gr;
  };
  Mat psi = chu_map(model, m_ref);
  return grad(f).dot(psi * grad(g));
}

// Canonical bracket of two functions on the model, for cross-checks:
// {F,G} = omega(X_F, X_G) = -grad F^T omega^{-1} grad G.
inline double poisson_bracket_on_model(const SymplecticTorusModel& model, const ModelFunction& F,
                                       const ModelFunction& G, const Vec& lift) {
  Vec gf = detail::fd_gradient(model, F, lift);
  Vec gg = detail::fd_gradient(model, G, lift);
  return -gf.dot(model.omega_inv * gg);
}

}  // namespace cylmom
