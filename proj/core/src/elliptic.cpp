#include "solidangle/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "solidangle/errors.hpp"

namespace solidangle::elliptic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kMaxDuplications = 200;

// Duplication stops once every normalized deviation is below this; the
// fifth-order series then has a truncation error ~ tol^6 ~ 1e-18.
const double kDuplicationTol = std::pow(std::numeric_limits<double>::epsilon() / 16.0, 1.0 / 6.0);

void require_modulus(const EllipticModulus& m, const char* fn) {
  if (!(m.k >= 0.0 && m.k <= 1.0 && m.k_prime >= 0.0 && m.k_prime <= 1.0)) {
    throw DomainError(std::string(fn) + ": modulus outside [0,1]");
  }
}

void require_amplitude(double phi, const char* fn) {
  if (!(std::abs(phi) <= kHalfPi * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))) {
    throw DomainError(std::string(fn) + ": amplitude outside [-pi/2, pi/2]");
  }
}

// 1 - k^2 sin^2 phi written so that it stays accurate as k -> 1.
double delta_sq(double phi, const EllipticModulus& m) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return c * c + m.k_prime * m.k_prime * s * s;
}

}  // namespace

EllipticModulus EllipticModulus::from_k(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("EllipticModulus: k outside [0,1]");
  return {k, std::sqrt((1.0 - k) * (1.0 + k))};
}

EllipticModulus EllipticModulus::from_k_prime(double k_prime) {
  if (!(k_prime >= 0.0 && k_prime <= 1.0)) {
    throw DomainError("EllipticModulus: k' outside [0,1]");
  }
  return {std::sqrt((1.0 - k_prime) * (1.0 + k_prime)), k_prime};
}

EllipticModulus EllipticModulus::from_pair(double k, double k_prime) {
  if (!(k >= 0.0 && k <= 1.0 && k_prime >= 0.0 && k_prime <= 1.0)) {
    throw DomainError("EllipticModulus: component outside [0,1]");
  }
  if (std::abs(k * k + k_prime * k_prime - 1.0) > 1e-12) {
    throw DomainError("EllipticModulus: k^2 + k'^2 != 1");
  }
  return {k, k_prime};
}

double carlson_rc(double x, double y) {
  if (!(x >= 0.0) || !(y > 0.0)) throw DomainError("carlson_rc: need x >= 0, y > 0");
  // Relative offset e = y/x - 1 controls cancellation near x == y.
  if (x == 0.0) return kHalfPi / std::sqrt(y);
  const double e = (y - x) / x;
  if (std::abs(e) < 1e-4) {
    // RC(x, x(1+e)) = x^{-1/2} (1 - e/3 + e^2/5 - e^3/7 + e^4/9 - ...)
    const double series = 1.0 + e * (-1.0 / 3.0 + e * (1.0 / 5.0 + e * (-1.0 / 7.0 + e / 9.0)));
    return series / std::sqrt(x);
  }
  if (x < y) return std::atan(std::sqrt(e)) / std::sqrt(y - x);
  return std::atanh(std::sqrt(-e)) / std::sqrt(x - y);
}

double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0) throw DomainError("carlson_rf: negative argument");
  if (x + y == 0.0 || y + z == 0.0 || z + x == 0.0) {
    throw DomainError("carlson_rf: more than one zero argument (divergent)");
  }
  double u = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  for (int it = 0;; ++it) {
    u = (x + y + z) / 3.0;
    dx = (u - x) / u;
    dy = (u - y) / u;
    dz = (u - z) / u;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kDuplicationTol) break;
    if (it >= kMaxDuplications) throw ConvergenceError("carlson_rf: duplication did not converge");
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + e2 * (e2 / 24.0 - 3.0 * e3 / 44.0 - 0.1) + e3 / 14.0) / std::sqrt(u);
}

double carlson_rd(double x, double y, double z) {
  if (x < 0.0 || y < 0.0) throw DomainError("carlson_rd: negative argument");
  if (!(z > 0.0)) throw DomainError("carlson_rd: z must be positive");
  if (x + y == 0.0) throw DomainError("carlson_rd: x + y == 0 (divergent)");
  double sum = 0.0;
  double factor = 1.0;
  double u = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  for (int it = 0;; ++it) {
    u = (x + y + 3.0 * z) / 5.0;
    dx = (u - x) / u;
    dy = (u - y) / u;
    dz = (u - z) / u;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kDuplicationTol) break;
    if (it >= kMaxDuplications) throw ConvergenceError("carlson_rd: duplication did not converge");
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    sum += factor / (sz * (z + lambda));
    factor *= 0.25;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
  }
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  const double s1 = ed * (ed * 9.0 / 88.0 - dz * ee * 9.0 / 52.0 - 3.0 / 14.0);
  const double s2 = dz * (ee / 6.0 + dz * (-ec * 9.0 / 22.0 + dz * ea * 3.0 / 26.0));
  return 3.0 * sum + factor * (1.0 + s1 + s2) / (u * std::sqrt(u));
}

double carlson_rj(double x, double y, double z, double p) {
  if (x < 0.0 || y < 0.0 || z < 0.0) throw DomainError("carlson_rj: negative argument");
  if (!(p > 0.0)) throw DomainError("carlson_rj: p must be positive");
  if (x + y == 0.0 || y + z == 0.0 || z + x == 0.0) {
    throw DomainError("carlson_rj: more than one zero argument (divergent)");
  }
  const double a0 = (x + y + z + 2.0 * p) / 5.0;
  const double delta = (p - x) * (p - y) * (p - z);
  double a = a0;
  double sum = 0.0;
  double pow4 = 1.0;  // 4^{-m}
  double q = std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z), std::abs(a0 - p)}) /
             kDuplicationTol;
  const double x0 = x;
  const double y0 = y;
  const double z0 = z;
  for (int it = 0; pow4 * q >= std::abs(a); ++it) {
    if (it >= kMaxDuplications) throw ConvergenceError("carlson_rj: duplication did not converge");
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double sp = std::sqrt(p);
    const double lambda = sx * sy + sy * sz + sz * sx;
    const double d = (sp + sx) * (sp + sy) * (sp + sz);
    const double e = pow4 * pow4 * pow4 * delta / (d * d);
    sum += pow4 / d * carlson_rc(1.0, 1.0 + e);
    pow4 *= 0.25;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    p = 0.25 * (p + lambda);
    a = 0.25 * (a + lambda);
  }
  const double dx = pow4 * (a0 - x0) / a;
  const double dy = pow4 * (a0 - y0) / a;
  const double dz = pow4 * (a0 - z0) / a;
  const double dp = -(dx + dy + dz) / 2.0;
  const double e2 = dx * dy + dx * dz + dy * dz - 3.0 * dp * dp;
  const double e3 = dx * dy * dz + 2.0 * e2 * dp + 4.0 * dp * dp * dp;
  const double e4 = (2.0 * dx * dy * dz + e2 * dp + 3.0 * dp * dp * dp) * dp;
  const double e5 = dx * dy * dz * dp * dp;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                        9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return pow4 * series / (a * std::sqrt(a)) + 6.0 * sum;
}

double ellF(double phi, EllipticModulus m) {
  require_modulus(m, "ellF");
  require_amplitude(phi, "ellF");
  if (phi == 0.0) return 0.0;
  // Same code path as K at the complete amplitude; K throws for k = 1.
  if (std::abs(phi) >= kHalfPi) return std::copysign(ellK(m), phi);
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * carlson_rf(c * c, delta_sq(phi, m), 1.0);
}

double ellF(double phi, double k) { return ellF(phi, EllipticModulus::from_k(k)); }

double ellE_inc(double phi, EllipticModulus m) {
  require_modulus(m, "ellE_inc");
  require_amplitude(phi, "ellE_inc");
  if (phi == 0.0) return 0.0;
  if (std::abs(phi) >= kHalfPi) return std::copysign(ellE(m), phi);
  const double s = std::sin(phi);
  if (m.k_prime == 0.0) return s;
  const double c = std::cos(phi);
  const double d2 = delta_sq(phi, m);
  const double k2 = m.k * m.k;
  return s * carlson_rf(c * c, d2, 1.0) - k2 * s * s * s / 3.0 * carlson_rd(c * c, d2, 1.0);
}

double ellE_inc(double phi, double k) { return ellE_inc(phi, EllipticModulus::from_k(k)); }

double ellK(EllipticModulus m) {
  require_modulus(m, "ellK");
  if (m.k_prime == 0.0) throw DomainError("ellK: divergent at k = 1");
  if (m.k_prime < kLogAsymptoteSwitch) {
    const double l = std::log(4.0 / m.k_prime);
    return l + 0.25 * m.k_prime * m.k_prime * (l - 1.0);
  }
  return carlson_rf(0.0, m.k_prime * m.k_prime, 1.0);
}

double ellK(double k) { return ellK(EllipticModulus::from_k(k)); }

double ellE(EllipticModulus m) {
  require_modulus(m, "ellE");
  if (m.k_prime == 0.0) return 1.0;
  const double kp2 = m.k_prime * m.k_prime;
  return carlson_rf(0.0, kp2, 1.0) - m.k * m.k / 3.0 * carlson_rd(0.0, kp2, 1.0);
}

double ellE(double k) { return ellE(EllipticModulus::from_k(k)); }

double ellPi(double alpha2, EllipticModulus m) {
  require_modulus(m, "ellPi");
  if (!(alpha2 < 1.0)) throw DomainError("ellPi: requires alpha^2 < 1");
  if (m.k_prime == 0.0) throw DomainError("ellPi: divergent at k = 1");
  const double kp2 = m.k_prime * m.k_prime;
  return carlson_rf(0.0, kp2, 1.0) + alpha2 / 3.0 * carlson_rj(0.0, kp2, 1.0, 1.0 - alpha2);
}

double ellPi(double alpha2, double k) { return ellPi(alpha2, EllipticModulus::from_k(k)); }

double heuman_lambda0(double beta, EllipticModulus m) {
  require_modulus(m, "heuman_lambda0");
  require_amplitude(beta, "heuman_lambda0");
  if (m.k_prime == 0.0) throw DomainError("heuman_lambda0: K(k) diverges at k = 1");
  if (beta == 0.0) return 0.0;
  const EllipticModulus mc = m.complementary();
  if (m.k == 0.0) {
    // K(0) = E(0) = pi/2, so the F(beta, 1) terms cancel analytically.
    if (std::abs(beta) >= kHalfPi) throw DomainError("heuman_lambda0: divergent at k = 0, beta = pi/2");
    return std::sin(beta);
  }
  const double kk = ellK(m);
  const double ek = ellE(m);
  const double f = ellF(beta, mc);
  const double e = ellE_inc(beta, mc);
  return 2.0 / kPi * (ek * f + kk * e - kk * f);
}

double heuman_lambda0(double beta, double k) {
  return heuman_lambda0(beta, EllipticModulus::from_k(k));
}

double dK_dk(EllipticModulus m) {
  require_modulus(m, "dK_dk");
  if (m.k == 0.0 || m.k_prime == 0.0) throw DomainError("dK_dk: requires k in (0,1)");
  const double kp2 = m.k_prime * m.k_prime;
  return (ellE(m) - kp2 * ellK(m)) / (m.k * kp2);
}

double dK_dk(double k) { return dK_dk(EllipticModulus::from_k(k)); }

double dE_dk(EllipticModulus m) {
  require_modulus(m, "dE_dk");
  if (m.k == 0.0 || m.k_prime == 0.0) throw DomainError("dE_dk: requires k in (0,1)");
  return (ellE(m) - ellK(m)) / m.k;
}

double dE_dk(double k) { return dE_dk(EllipticModulus::from_k(k)); }

double dLambda0_dk(double beta, EllipticModulus m) {
  require_modulus(m, "dLambda0_dk");
  require_amplitude(beta, "dLambda0_dk");
  if (m.k == 0.0 || m.k_prime == 0.0) throw DomainError("dLambda0_dk: requires k in (0,1)");
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  const double root = std::sqrt(1.0 - m.k_prime * m.k_prime * s * s);
  return 2.0 * (ellE(m) - ellK(m)) * s * c / (kPi * m.k * root);
}

double dLambda0_dk(double beta, double k) { return dLambda0_dk(beta, EllipticModulus::from_k(k)); }

double dLambda0_dbeta(double beta, EllipticModulus m) {
  require_modulus(m, "dLambda0_dbeta");
  require_amplitude(beta, "dLambda0_dbeta");
  if (m.k == 0.0 || m.k_prime == 0.0) throw DomainError("dLambda0_dbeta: requires k in (0,1)");
  const double s = std::sin(beta);
  const double kp2s2 = m.k_prime * m.k_prime * s * s;
  return 2.0 * (ellE(m) - kp2s2 * ellK(m)) / (kPi * std::sqrt(1.0 - kp2s2));
}

double dLambda0_dbeta(double beta, double k) {
  return dLambda0_dbeta(beta, EllipticModulus::from_k(k));
}

}  // namespace solidangle::elliptic
