#pragma once

#include <cmath>
#include <vector>

#include "solidangle/lambda.hpp"
#include "solidangle/vec.hpp"

namespace solidangle {

// Largest admissible <Sec_x(y), z> over the sampled secant image.
inline constexpr double kMarginThreshold = 0.95;

// Pole direction z of the primitive eta_z together with the special
// orthogonal map sending z to e_{n+2}. margin is the largest sampled
// <Sec_x(y), z>; -1 until a selection has measured it.
struct PoleFrame {
  Vec z;
  Mat rotation;
  double margin = -1.0;
  int candidate = -1;
};

// Householder reflection onto e_last, with its first row negated so the
// determinant is +1 (the identity when z is already e_last).
PoleFrame make_pole_frame(const Vec& z);

// Fixed candidate set: +-e_i in index order, then 64 well-spread directions
// (spherical Fibonacci on S^2, a Kronecker lattice on S^3).
const std::vector<Vec>& candidate_poles(int ambient);

// Area of the unit sphere S^k (sigma_2 = 4 pi, sigma_3 = 2 pi^2).
double sphere_area(int k);

// (Sec_x^* eta_z)(t_1, ..., t_n) at y, where `tangents` holds the n frame
// vectors as columns:
//   lambda(d_{n+2}/|d|) / |d|^{n+1} * det[d_{1..n+1}, t_1..t_n]_{rows 1..n+1}
// with d = R(y - x), t_i -> R t_i. Throws ProximityError when |y - x| < 1e-12
// and PoleNotFoundError when <Sec_x(y), z> exceeds kMarginThreshold.
double eta_pullback_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents);

// Gradient of eta_pullback_density with respect to x (ambient coordinates).
Vec eta_pullback_grad_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents);
// Single component, axis in [0, n+2).
double eta_pullback_grad_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents,
                                 int axis);

// (Sec_x^* omega_{n+1})(t_1, ..., t_{n+1}) at y: det[d, t_1..t_{n+1}] / |d|^{n+2}.
double omega_pullback_density(const Vec& x, const Vec& y, const Mat& frame);

namespace detail {

// Hot-loop kernels on rotated data: d = R(y - x) (length n+2) and rotated
// tangent columns t (n columns of n+2 entries, column-major). u_out receives
// d_{n+2}/|d|; no domain checks.
template <int N>
inline double eta_kernel(const LambdaFn& lam, const double* d, const double* t, double& u_out) {
  constexpr int A = N + 2;
  double r2 = 0.0;
  for (int a = 0; a < A; ++a) r2 += d[a] * d[a];
  const double r = std::sqrt(r2);
  const double u = d[A - 1] / r;
  u_out = u;
  double det;
  if constexpr (N == 1) {
    det = d[0] * t[1] - d[1] * t[0];
  } else {
    const double* t1 = t;
    const double* t2 = t + A;
    det = d[0] * (t1[1] * t2[2] - t1[2] * t2[1]) - d[1] * (t1[0] * t2[2] - t1[2] * t2[0]) +
          d[2] * (t1[0] * t2[1] - t1[1] * t2[0]);
  }
  double scale = r;
  for (int k = 1; k < N + 1; ++k) scale *= r;
  if constexpr (N == 1) {
    return det / ((u - 1.0) * scale);
  } else {
    return lam(u) * det / scale;
  }
}

// Gradient with respect to x of the kernel above, in rotated coordinates.
template <int N>
inline void eta_grad_kernel(const LambdaFn& lam, const double* d, const double* t, double* grad, double& u_out) {
  constexpr int A = N + 2;
  double r2 = 0.0;
  for (int a = 0; a < A; ++a) r2 += d[a] * d[a];
  const double r = std::sqrt(r2);
  const double u = d[A - 1] / r;
  u_out = u;
  // cof[a] = d det / d d_a for a < N+1.
  double cof[A] = {};
  if constexpr (N == 1) {
    cof[0] = t[1];
    cof[1] = -t[0];
  } else {
    const double* t1 = t;
    const double* t2 = t + A;
    cof[0] = t1[1] * t2[2] - t1[2] * t2[1];
    cof[1] = t1[2] * t2[0] - t1[0] * t2[2];
    cof[2] = t1[0] * t2[1] - t1[1] * t2[0];
  }
  double det = 0.0;
  for (int a = 0; a < N + 1; ++a) det += d[a] * cof[a];
  double rp = r;  // |d|^{N+1}
  for (int k = 1; k < N + 1; ++k) rp *= r;
  const double l0 = lam.value(u);
  const double l1 = lam.derivative(u, 1);
  for (int a = 0; a < A; ++a) {
    const double du = (a == A - 1 ? -1.0 / r : 0.0) + d[A - 1] * d[a] / (r2 * r);
    grad[a] = (l1 * du * det + l0 * (N + 1) * d[a] / r2 * det - l0 * cof[a]) / rp;
  }
}

}  // namespace detail

}  // namespace solidangle
