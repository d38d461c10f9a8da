#include "solidangle/oracles.hpp"

#include <cmath>
#include <numbers>

#include "solidangle/elliptic.hpp"
#include "solidangle/errors.hpp"

namespace solidangle::oracles {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double c_of_r(double r) {
  if (r > 1.0) return 0.0;
  if (r < 1.0) return -2.0 * kPi;
  return -kPi;
}

// k and k' for the circle; k' from its own expression so it stays accurate
// next to the circle.
elliptic::EllipticModulus circle_modulus(double r, double x3) {
  const double far = (1.0 + r) * (1.0 + r) + x3 * x3;
  const double k = std::sqrt(4.0 * r / far);
  const double kp = std::sqrt(((1.0 - r) * (1.0 - r) + x3 * x3) / far);
  return {std::min(k, 1.0), kp};
}

void check_off_circle(CylindricalPoint p) {
  if (!(p.r >= 0.0) || !std::isfinite(p.r) || !std::isfinite(p.x3)) {
    throw DomainError("circle oracle: need r >= 0 and finite coordinates");
  }
  if (p.r == 1.0 && p.x3 == 0.0) throw DomainError("circle oracle: point lies on the circle");
}

double r1_branch(double x3) {
  // Phi(1, x3) for x3 < 0.
  const double kp = std::abs(x3) / std::sqrt(4.0 + x3 * x3);
  const elliptic::EllipticModulus m{std::sqrt(4.0 / (4.0 + x3 * x3)), kp};
  return 0.25 + (2.0 * x3 / std::sqrt(4.0 + x3 * x3)) * elliptic::ellK(m) / (4.0 * kPi);
}

}  // namespace

CylindricalPoint to_cylindrical(const Vec& x) {
  if (x.size() != 3) throw DomainError("to_cylindrical: need a point of R^3");
  return {std::hypot(x[0], x[1]), x[2]};
}

double circle_phi_real(CylindricalPoint p) {
  check_off_circle(p);
  const double r = p.r;
  const double x3 = p.x3;
  if (x3 == 0.0) return c_of_r(r) / (4.0 * kPi);
  if (r == 1.0) return x3 < 0.0 ? r1_branch(x3) : -r1_branch(-x3);
  const auto m = circle_modulus(r, x3);
  const double far = std::sqrt((1.0 + r) * (1.0 + r) + x3 * x3);
  const double beta = std::asin(std::min(1.0, std::abs(x3) / std::hypot(1.0 - r, x3)));
  const double total = c_of_r(r) + 2.0 * x3 / far * elliptic::ellK(m) +
                       kPi * elliptic::heuman_lambda0(beta, m) * sgn(x3) * sgn(1.0 - r);
  return total / (4.0 * kPi);
}

Angle circle_phi(CylindricalPoint p) { return Angle(circle_phi_real(p)); }

Angle circle_phi_paxton(CylindricalPoint p) {
  check_off_circle(p);
  const double r0 = p.r;
  const double l = std::abs(p.x3);
  const double rmax = std::hypot(1.0 + r0, l);
  double value = 0.0;
  if (l == 0.0) {
    value = r0 < 1.0 ? 0.5 : 0.0;
  } else {
    const auto m = circle_modulus(r0, l);
    const double kterm = (2.0 * l / rmax) * elliptic::ellK(m) / (4.0 * kPi);
    if (r0 == 1.0) {
      value = 0.25 - kterm;
    } else {
      const double xi = std::atan(l / std::abs(1.0 - r0));
      const double lam = elliptic::heuman_lambda0(xi, m);
      value = r0 < 1.0 ? 0.5 - kterm - 0.25 * lam : -kterm + 0.25 * lam;
    }
  }
  // Paxton's display is the value at height -L.
  return Angle(p.x3 > 0.0 ? -value : value);
}

Angle circle_phi_pi_form(CylindricalPoint p) {
  check_off_circle(p);
  const double r = p.r;
  const double x3 = p.x3;
  if (x3 == 0.0 || r == 1.0) throw DomainError("circle_phi_pi_form: needs x3 != 0 and r != 1");
  const auto m = circle_modulus(r, x3);
  const double far = std::sqrt((1.0 + r) * (1.0 + r) + x3 * x3);
  const double alpha2 = 4.0 * r / ((1.0 + r) * (1.0 + r));
  const double total = c_of_r(r) + 2.0 * x3 / far * elliptic::ellK(m) +
                       2.0 * x3 * (1.0 - r) / ((1.0 + r) * far) * elliptic::ellPi(alpha2, m);
  return Angle(total / (4.0 * kPi));
}

double circle_dphi_deps(double eps, double lambda) {
  if (!(eps > 0.0)) throw DomainError("circle_dphi_deps: eps must be positive");
  const double s = std::sin(2.0 * kPi * lambda);
  const double c = std::cos(2.0 * kPi * lambda);
  const auto m = circle_modulus(1.0 + eps * c, eps * s);
  const double denom = (1.0 + eps * c) * std::sqrt(4.0 + 4.0 * eps * c + eps * eps);
  return 2.0 * s * (elliptic::ellK(m) - elliptic::ellE(m)) / denom / (4.0 * kPi);
}

double circle_dphi_dlambda(double eps, double lambda) {
  if (!(eps > 0.0)) throw DomainError("circle_dphi_dlambda: eps must be positive");
  const double s = std::sin(2.0 * kPi * lambda);
  const double c = std::cos(2.0 * kPi * lambda);
  const auto m = circle_modulus(1.0 + eps * c, eps * s);
  const double k = m.k;
  const double kp = m.k_prime;
  const double kk = elliptic::ellK(m);
  const double ee = elliptic::ellE(m);
  const double dk = -2.0 * kPi * kp * kp * kp * s / std::sqrt(1.0 + eps * c);
  const double dkp = -(k / kp) * dk;
  // d/dlambda of 2 s k' K(k).
  const double k_term = 4.0 * kPi * c * kp * kk + 2.0 * s * (kk * dkp + kp * elliptic::dK_dk(m) * dk);
  // The Lambda0 term pi Lambda0(arcsin|s|, k) sgn(s) sgn(-c): its beta part
  // collapses to -(E - k'^2 s^2 K) / sqrt(1 - k'^2 s^2) for either sign.
  const double q = std::sqrt(1.0 - kp * kp * s * s);
  const double beta_term = -(ee - kp * kp * s * s * kk) / q;
  const double k_part = 0.25 * sgn(s) * sgn(-c) * elliptic::dLambda0_dk(std::asin(std::min(1.0, std::abs(s))), m) * dk;
  return k_term / (4.0 * kPi) + beta_term + k_part;
}

Angle circle_near_limit(double lambda) { return Angle(-lambda); }

int LinearModel::epsilon() const {
  const int amb = static_cast<int>(a1.size());
  Mat m(amb, amb);
  m.col(0) = a1;
  m.col(1) = a2;
  m.rightCols(amb - 2) = tangents;
  const double d = small_det(m);
  if (d == 0.0) throw DomainError("linear model: degenerate frame");
  return d > 0.0 ? 1 : -1;
}

Angle linear_phi(const LinearModel& plane, const Vec& x) {
  const Vec rel = x - plane.origin;
  const double w1 = rel.dot(plane.a1);
  const double w2 = rel.dot(plane.a2);
  if (w1 == 0.0 && w2 == 0.0) throw DomainError("linear_phi: point lies on the plane");
  const double beta = std::atan2(w2, w1) / (2.0 * kPi);
  return Angle(plane.epsilon() * (beta - (plane.sheet - 0.5)));
}

Vec linear_grad(const LinearModel& plane, const Vec& x) {
  const Vec rel = x - plane.origin;
  const double w1 = rel.dot(plane.a1);
  const double w2 = rel.dot(plane.a2);
  const double rho2 = w1 * w1 + w2 * w2;
  if (rho2 == 0.0) throw DomainError("linear_grad: point lies on the plane");
  return plane.epsilon() / (2.0 * kPi * rho2) * (-w2 * plane.a1 + w1 * plane.a2);
}

}  // namespace solidangle::oracles
