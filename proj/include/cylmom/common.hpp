#pragma once

// Shared scalar types, tolerances, exceptions and deterministic RNG helpers
// used across the cylmom headers.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylmom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecI = Eigen::VectorXi;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

// Metric axiom / degeneracy floor for distance computations.
inline constexpr double kEpsMetric = 1e-9;
// Tie window when enumerating minimizing lattice lifts.
inline constexpr double kEpsGap = 1e-7;
// Default bound for momentum drift along invariant Hamiltonian flows.
inline constexpr double kTolNoether = 1e-6;

// Input is structurally valid but outside the supported regime
// (e.g. a holonomy subgroup whose closure is not a closed subgroup).
struct UnsupportedRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed (a bug, not a user error).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// Reduce x into [0, period). Periods may be +inf, in which case x is returned.
inline double reduce_mod(double x, double period) {
  if (!std::isfinite(period)) return x;
  if (period <= 0.0) throw std::invalid_argument("reduce_mod: period must be positive");
  double r = x - period * std::floor(x / period);
  if (r >= period) r = 0.0;  // guards x = -tiny rounding up to period
  return r;
}

// Portable uniform double in [0, 1): fixed bit recipe so report content does
// not depend on the standard library's distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Vec random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform_in(rng, lo, hi);
  return v;
}

}  // namespace cylmom
