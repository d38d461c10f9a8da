#pragma once

#include <cstdint>

#include "solidangle/angle.hpp"
#include "solidangle/forms.hpp"
#include "solidangle/manifold.hpp"

namespace solidangle {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kGridTol = 1e-8;
// Relative to the diameter of M.
inline constexpr double kProximityFloor = 1e-6;
inline constexpr int kMaxQuadratureLog2 = 20;

// Phi(x) = (1/sigma_{n+1}) int_M Sec_x^* eta_z  mod 1.
struct PhiValue {
  Angle angle;
  double raw = 0.0;  // unreduced normalised integral for `pole`
  PoleFrame pole;
  std::int64_t n_samples = 0;
  double err_estimate = 0.0;
};

struct PhiAndGrad {
  PhiValue value;
  Vec grad;
};

// Candidate minimising the largest sampled <Sec_x(y), z>; margin is that
// maximum. Throws PoleNotFoundError if it exceeds kMarginThreshold and
// ProximityError if x lies on M.
PoleFrame select_pole(const ParamManifold& m, const Vec& x);

PhiValue phi(const ParamManifold& m, const Vec& x, double tol = kDefaultTol);

// Unreduced integral for a caller-chosen pole z (normalised internally).
double phi_raw_with_pole(const ParamManifold& m, const Vec& x, const Vec& z, double tol = kDefaultTol);

Vec grad_phi(const ParamManifold& m, const Vec& x, double tol = kDefaultTol);
PhiAndGrad phi_and_grad(const ParamManifold& m, const Vec& x, double tol = kDefaultTol);
// Separate convergence target for the gradient, which carries more roundoff
// than the angle close to M.
PhiAndGrad phi_and_grad(const ParamManifold& m, const Vec& x, double tol, double grad_tol);

// dist(x, M): exact (nearest_point) when x is within a few sample spacings of
// the chart, otherwise the minimum over a coarse sample set.
double distance_to(const ParamManifold& m, const Vec& x);

}  // namespace solidangle
