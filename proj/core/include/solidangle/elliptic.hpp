#pragma once

// Complete and incomplete Legendre elliptic integrals, Heuman's Lambda
// function and the derivatives needed by the circle's closed-form solid
// angle. Everything is built on Carlson's symmetric integrals R_F, R_D, R_J
// evaluated by the duplication algorithm, so F, E and Pi share one kernel.
//
// Conventions: the modulus is k (not the parameter m = k^2); amplitudes are in
// radians.

namespace solidangle::elliptic {

// Modulus k together with the complementary modulus k' = sqrt(1 - k^2).
// Build it from whichever of the two is known accurately; near k = 1 the
// caller should supply k' directly.
struct EllipticModulus {
  double k = 0.0;
  double k_prime = 1.0;

  static EllipticModulus from_k(double k);
  static EllipticModulus from_k_prime(double k_prime);
  // Uses k'^2 = 1 - k^2 supplied by the caller; validates consistency.
  static EllipticModulus from_pair(double k, double k_prime);

  EllipticModulus complementary() const { return {k_prime, k}; }
};

// Below this value of k' the complete integral K uses the logarithmic
// asymptote ln(4/k') + (k'^2/4)(ln(4/k') - 1).
inline constexpr double kLogAsymptoteSwitch = 1e-8;

double carlson_rc(double x, double y);
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);
double carlson_rj(double x, double y, double z, double p);

// Incomplete integral of the first kind F(phi, k), phi in [0, pi/2].
double ellF(double phi, EllipticModulus m);
double ellF(double phi, double k);

// Incomplete integral of the second kind E(phi, k).
double ellE_inc(double phi, EllipticModulus m);
double ellE_inc(double phi, double k);

// Complete integrals K(k) (k < 1) and E(k) (k <= 1).
double ellK(EllipticModulus m);
double ellK(double k);
double ellE(EllipticModulus m);
double ellE(double k);

// Complete integral of the third kind
//   Pi(alpha^2, k) = int_0^{pi/2} dt / ((1 - alpha^2 sin^2 t) sqrt(1 - k^2 sin^2 t)),
// alpha^2 < 1, k < 1.
double ellPi(double alpha2, EllipticModulus m);
double ellPi(double alpha2, double k);

// Heuman's Lambda function
//   Lambda0(beta, k) = (2/pi) (E(k) F(beta,k') + K(k) E(beta,k') - K(k) F(beta,k')).
// Odd in beta; Lambda0(pi/2, k) = 1 by Legendre's relation.
double heuman_lambda0(double beta, EllipticModulus m);
double heuman_lambda0(double beta, double k);

// dK/dk = (E - k'^2 K) / (k k'^2) and dE/dk = (E - K) / k, k in (0, 1).
double dK_dk(EllipticModulus m);
double dK_dk(double k);
double dE_dk(EllipticModulus m);
double dE_dk(double k);

// Partial derivatives of Lambda0 with respect to k and to beta.
double dLambda0_dk(double beta, EllipticModulus m);
double dLambda0_dk(double beta, double k);
double dLambda0_dbeta(double beta, EllipticModulus m);
double dLambda0_dbeta(double beta, double k);

}  // namespace solidangle::elliptic
