#pragma once

// Flat symplectic models on T^c x R^{2n-c}: a constant symplectic matrix, a
// period vector (+inf entries mark unbounded coordinates) and constant
// commuting generator fields.  Supplies contraction one-forms, the Chu
// pairing, RK4 Hamiltonian flows and a basis of fundamental loops.

#include "cylmom/common.hpp"
#include "cylmom/metric_core.hpp"

#include <functional>

namespace cylmom {

struct SymplecticTorusModel {
  int dim = 0;     // 2n
  Mat omega;       // dim x dim, antisymmetric, invertible
  Vec periods;     // dim entries, +inf for R factors
  Mat generators;  // k x dim rows, the constant fields xi_M

  Mat omega_inv;   // derived

  int k() const { return static_cast<int>(generators.rows()); }
};

struct ModelPoint {
  Vec coords;  // reduced into [0, period_i) coordinate-wise
};

// Point-to-value map on the model; arguments are reduced representatives.
using ModelFunction = std::function<double(const ModelPoint&)>;

inline ModelPoint reduce_point(const SymplecticTorusModel& model, const Vec& raw) {
  if (raw.size() != model.dim) throw std::invalid_argument("reduce_point: dimension mismatch");
  Vec r(raw.size());
  for (int i = 0; i < raw.size(); ++i) r[i] = reduce_mod(raw[i], model.periods[i]);
  return ModelPoint{r};
}

inline SymplecticTorusModel make_torus_model(const Mat& omega, const Vec& periods,
                                             const Mat& generators) {
  SymplecticTorusModel m;
  m.dim = static_cast<int>(omega.rows());
  if (omega.cols() != m.dim || m.dim == 0) {
    throw std::invalid_argument("model: omega must be square and nonempty");
  }
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("model: omega must be antisymmetric");
  }
  Eigen::FullPivLU<Mat> lu(omega);
  if (!lu.isInvertible()) throw std::invalid_argument("model: omega must be invertible");
  if (periods.size() != m.dim) throw std::invalid_argument("model: periods size mismatch");
  for (int i = 0; i < m.dim; ++i) {
    if (!(periods[i] > 0.0)) throw std::invalid_argument("model: periods must be positive");
  }
  if (generators.rows() > 0 && generators.cols() != m.dim) {
    throw std::invalid_argument("model: generator dimension mismatch");
  }
  m.omega = omega;
  m.periods = periods;
  m.generators = generators.rows() > 0 ? generators : Mat(0, m.dim);
  m.omega_inv = lu.inverse();
  return m;
}

// Covector i_{xi_M} omega at m for generator index i.  Constant fields and a
// constant form make this independent of the point; m is validated only.
inline Vec contraction_form(const SymplecticTorusModel& model, const ModelPoint& m, int i) {
  if (m.coords.size() != model.dim) {
    throw std::invalid_argument("contraction_form: point dimension mismatch");
  }
  if (i < 0 || i >= model.k()) throw std::invalid_argument("contraction_form: bad index");
  return (model.generators.row(i) * model.omega).transpose();
}

// Chu pairing Psi_ij = omega(xi_i, xi_j); antisymmetric k x k.
inline Mat chu_map(const SymplecticTorusModel& model, const ModelPoint& m) {
  if (m.coords.size() != model.dim) throw std::invalid_argument("chu_map: dimension mismatch");
  return model.generators * model.omega * model.generators.transpose();
}

namespace detail {

// Central-difference gradient of h at reduced coordinates near x (lift).
inline Vec fd_gradient(const SymplecticTorusModel& model, const ModelFunction& h, const Vec& x,
                       double step = 1e-6) {
  Vec g(x.size());
  Vec e = x;
  for (int i = 0; i < x.size(); ++i) {
    e[i] = x[i] + step;
    double hp = h(reduce_point(model, e));
    e[i] = x[i] - step;
    double hm = h(reduce_point(model, e));
    e[i] = x[i];
    g[i] = (hp - hm) / (2.0 * step);
  }
  return g;
}

}  // namespace detail

struct FlowResult {
  ModelPoint end;                   // reduced endpoint
  Vec end_lift;                     // unreduced endpoint of the integrated lift
  double energy_drift = 0.0;        // |h(end) - h(start)|
  std::vector<Vec> trajectory;      // sampled lift, always contains start and end
};

// Integrates the Hamiltonian vector field X_h, sign convention
// i_{X_h} omega = dh, i.e. X_h = -omega^{-1} grad h.  Fixed-step RK4 on lift
// coordinates; the returned trajectory is continuous (no period jumps).
inline FlowResult hamiltonian_flow(const SymplecticTorusModel& model, const ModelFunction& h,
                                   const Vec& start_lift, double t, double dt,
                                   int max_trajectory_points = 4096) {
  if (start_lift.size() != model.dim) {
    throw std::invalid_argument("hamiltonian_flow: start dimension mismatch");
  }
  if (!(dt > 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("hamiltonian_flow: need t >= 0 and dt > 0");
  }
  auto field = [&](const Vec& x) -> Vec {
    return -(model.omega_inv * detail::fd_gradient(model, h, x));
  };
  const long long nsteps = static_cast<long long>(std::ceil(t / dt - 1e-12));
  const long long stride =
      std::max<long long>(1, nsteps / std::max(1, max_trajectory_points - 1));
  FlowResult out;
  Vec x = start_lift;
  out.trajectory.push_back(x);
  const double h0 = h(reduce_point(model, x));
  for (long long s = 0; s < nsteps; ++s) {
    const double step = std::min(dt, t - s * dt);
    Vec k1 = field(x);
    Vec k2 = field(x + 0.5 * step * k1);
    Vec k3 = field(x + 0.5 * step * k2);
    Vec k4 = field(x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s + 1) % stride == 0 && s + 1 < nsteps) out.trajectory.push_back(x);
  }
  out.trajectory.push_back(x);
  out.end_lift = x;
  out.end = reduce_point(model, x);
  out.energy_drift = std::abs(h(out.end) - h0);
  return out;
}

// One closed loop per finite period: coordinate i swept from 0 to period_i in
// lift coordinates (endpoints differ by a full period, reducing to the base).
inline std::vector<Polyline> loop_basis(const SymplecticTorusModel& model, const Vec& base,
                                        int steps = 32) {
  if (base.size() != model.dim) throw std::invalid_argument("loop_basis: dimension mismatch");
  if (steps < 1) throw std::invalid_argument("loop_basis: steps must be >= 1");
  std::vector<Polyline> loops;
  for (int i = 0; i < model.dim; ++i) {
    if (!std::isfinite(model.periods[i])) continue;
    Polyline loop{euclidean_space(), {}};
    for (int j = 0; j <= steps; ++j) {
      Vec p = base;
      p[i] += model.periods[i] * static_cast<double>(j) / steps;
      loop.points.push_back(p);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Group translation along the generators: Phi_g(m) = m + sum_i g_i xi_i.
inline Vec translate_lift(const SymplecticTorusModel& model, const Vec& lift, const Vec& g) {
  if (g.size() != model.k()) throw std::invalid_argument("translate_lift: group dim mismatch");
  return lift + model.generators.transpose() * g;
}

}  // namespace cylmom
