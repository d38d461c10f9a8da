#pragma once

#include "solidangle/angle.hpp"
#include "solidangle/vec.hpp"

// Closed forms for the unit circle s -> (cos 2 pi s, sin 2 pi s, 0) and for
// the linear model of a codimension-2 plane. Everything is computed in real
// arithmetic and reduced mod 1 once, at the end.
namespace solidangle::oracles {

struct CylindricalPoint {
  double r = 0.0;   // distance from the axis
  double x3 = 0.0;  // height
};

CylindricalPoint to_cylindrical(const Vec& x);

// K + Heuman Lambda0 form:
//   4 pi Phi = C(r) + 2 x3 / sqrt((1+r)^2 + x3^2) K(k)
//              + pi Lambda0(arcsin(|x3| / sqrt((1-r)^2 + x3^2)), k) sgn(x3) sgn(1-r),
// k^2 = 4r / ((1+r)^2 + x3^2), C = 0, -pi, -2pi for r >, =, < 1.
// x3 = 0 gives C(r)/4pi; r = 1 uses the K-only form. Throws DomainError at (1, 0).
Angle circle_phi(CylindricalPoint p);
// Same value before reduction mod 1.
double circle_phi_real(CylindricalPoint p);

// Paxton's three-case formula in terms of the height L = |x3|, extended to
// x3 > 0 by antisymmetry.
Angle circle_phi_paxton(CylindricalPoint p);

// The form with the complete integral of the third kind, before the
// Pi -> Lambda0 reduction. Needs x3 != 0 and r != 1.
Angle circle_phi_pi_form(CylindricalPoint p);

// Derivatives along x = (1 + eps cos 2 pi lambda, 0, eps sin 2 pi lambda).
double circle_dphi_deps(double eps, double lambda);
double circle_dphi_dlambda(double eps, double lambda);

// Limit of Phi as eps -> 0+: -lambda.
Angle circle_near_limit(double lambda);

// Oriented codimension-2 affine plane V = origin + span(tangents) with unit
// normals (a1, a2). In w_i = <x - origin, a_i>, (w1, w2) = rho (cos 2 pi beta,
// sin 2 pi beta) and the chosen half-space sits at beta = sheet (1/2 gives
// {w1 <= 0, w2 = 0}). Phi = eps (beta - (sheet - 1/2)) with
// eps = sign det[a1, a2, tangents].
struct LinearModel {
  Vec origin;
  Vec a1;
  Vec a2;
  Mat tangents;
  double sheet = 0.5;

  int epsilon() const;
};

Angle linear_phi(const LinearModel& plane, const Vec& x);
Vec linear_grad(const LinearModel& plane, const Vec& x);

}  // namespace solidangle::oracles
