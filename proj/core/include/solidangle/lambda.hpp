#pragma once

#include <vector>

namespace solidangle {

// Profile function of the primitive eta = lambda(u_{n+2}) * omega_n of the
// sphere's volume form, for the sphere S^{n+1} punctured at e_{n+2}:
//
//   (1 - u^2) lambda'(u) - (n+1) u lambda(u) = (-1)^n,   lambda smooth at u = -1,
//
// i.e. lambda(u) = (-1)^n (1-u^2)^{-(n+1)/2} int_{-1}^{u} (1-s^2)^{(n-1)/2} ds.
// The pole sits at u = 1.
//
// With a = 1 + u the integral factors as
//   lambda(u) = (-1)^n (1-u)^{-(n+1)/2} J(a),  J(a) = int_0^1 (t (2 - a t))^{(n-1)/2} dt,
// whose binomial expansion in a is a finite polynomial for odd n and converges
// for a < 2 when n is even. Odd n always uses that polynomial. Even n uses the
// integration-by-parts chain ending at (s sqrt(1-s^2) + arcsin s)/2 for
// u > -1/2 and the series below that, where the closed form cancels.
class LambdaFn {
 public:
  explicit LambdaFn(int n);

  int n() const { return n_; }

  double operator()(double u) const { return value(u); }
  double value(double u) const;
  // order in {1, 2}.
  double derivative(double u, int order) const;

  // Gauss-Legendre evaluation of the substituted integral; kept for
  // validation of the closed forms.
  double value_by_quadrature(double u) const;

 private:
  struct Jet {
    double v;
    double d1;
    double d2;
  };
  Jet series_jet(double u) const;
  Jet closed_jet(double u) const;
  Jet jet(double u) const;
  void check_domain(double u) const;

  int n_;
  double sign_;                  // (-1)^n
  std::vector<double> coeffs_;   // J(a) = sum_k coeffs_[k] a^k
};

// Largest u accepted by the evaluators (pole guard).
inline constexpr double kLambdaPoleGuard = 1e-12;

// Shared, immutable instances for n = 1..16.
const LambdaFn& lambda_fn(int n);

double lambda_eval(int n, double u);
double lambda_deriv(int n, double u, int order);

}  // namespace solidangle
