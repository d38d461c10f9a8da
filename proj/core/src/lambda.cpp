#include "solidangle/lambda.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "solidangle/errors.hpp"
#include "solidangle/quadrature.hpp"

namespace solidangle {

namespace {

constexpr int kMaxCachedN = 16;
// Even n: the closed form is used for u above this value.
constexpr double kSeriesSwitch = -0.5;
constexpr int kMaxSeriesTerms = 80;

}  // namespace

LambdaFn::LambdaFn(int n) : n_(n), sign_(n % 2 == 0 ? 1.0 : -1.0) {
  if (n < 1) throw DomainError("LambdaFn: n must be >= 1");
  // J(a) = 2^p sum_k binom(p, k) (-1/2)^k a^k / (p + k + 1),  p = (n-1)/2.
  const double p = 0.5 * (n - 1);
  const bool finite = (n % 2 == 1);
  const int terms = finite ? (n - 1) / 2 + 1 : kMaxSeriesTerms;
  double binom = 1.0;
  const double scale = std::pow(2.0, p);
  for (int k = 0; k < terms; ++k) {
    coeffs_.push_back(scale * binom * std::pow(-0.5, k) / (p + k + 1.0));
    binom *= (p - k) / (k + 1.0);
  }
}

void LambdaFn::check_domain(double u) const {
  if (!(u >= -1.0) || !(u < 1.0 - kLambdaPoleGuard)) {
    throw DomainError("lambda: argument " + std::to_string(u) + " outside [-1, 1) (pole at u = 1)");
  }
}

LambdaFn::Jet LambdaFn::series_jet(double u) const {
  const double a = 1.0 + u;
  double j = 0.0;
  double dj = 0.0;
  double ddj = 0.0;
  // Horner for J, J', J''.
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    ddj = ddj * a + 2.0 * dj;
    dj = dj * a + j;
    j = j * a + coeffs_[k];
  }
  const double q = 0.5 * (n_ + 1);
  const double w = 1.0 - u;
  const double g = std::pow(w, -q);
  const double g1 = q * g / w;
  const double g2 = (q + 1.0) * g1 / w;
  return {sign_ * g * j, sign_ * (g1 * j + g * dj), sign_ * (g2 * j + 2.0 * g1 * dj + g * ddj)};
}

LambdaFn::Jet LambdaFn::closed_jet(double u) const {
  // A_p(u) = int_{-1}^{u} (1-s^2)^p ds, p = (n-1)/2 half-integer, via
  // A_p = u (1-u^2)^p / (2p+1) + 2p/(2p+1) A_{p-1}.
  const double w2 = (1.0 - u) * (1.0 + u);
  const double root = std::sqrt(w2);
  double area = 0.5 * (u * root + std::asin(u)) + 0.25 * std::numbers::pi;  // p = 1/2
  double pw = root * w2;                                                     // (1-u^2)^{3/2}
  for (double p = 1.5; p <= 0.5 * (n_ - 1) + 1e-9; p += 1.0) {
    area = u * pw / (2.0 * p + 1.0) + 2.0 * p / (2.0 * p + 1.0) * area;
    pw *= w2;
  }
  const double lam = sign_ * area * std::pow(w2, -0.5 * (n_ + 1));
  const double d1 = (sign_ + (n_ + 1) * u * lam) / w2;
  const double d2 = ((n_ + 3) * u * d1 + (n_ + 1) * lam) / w2;
  return {lam, d1, d2};
}

LambdaFn::Jet LambdaFn::jet(double u) const {
  check_domain(u);
  if (n_ % 2 == 1 || u <= kSeriesSwitch) return series_jet(u);
  return closed_jet(u);
}

double LambdaFn::value(double u) const { return jet(u).v; }

double LambdaFn::derivative(double u, int order) const {
  if (order != 1 && order != 2) throw DomainError("lambda derivative order must be 1 or 2");
  const Jet j = jet(u);
  return order == 1 ? j.d1 : j.d2;
}

double LambdaFn::value_by_quadrature(double u) const {
  check_domain(u);
  // With t = v^2 the integrand of J becomes 2 v^n (2 - a v^2)^{(n-1)/2}, smooth on [0,1].
  const double a = 1.0 + u;
  const GaussRule& rule = gauss_legendre(64);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = 0.5 * (rule.nodes[i] + 1.0);
    sum += rule.weights[i] * 0.5 * 2.0 * std::pow(v, n_) * std::pow(2.0 - a * v * v, 0.5 * (n_ - 1));
  }
  return sign_ * std::pow(1.0 - u, -0.5 * (n_ + 1)) * sum;
}

const LambdaFn& lambda_fn(int n) {
  static const std::array<std::unique_ptr<LambdaFn>, kMaxCachedN + 1> table = [] {
    std::array<std::unique_ptr<LambdaFn>, kMaxCachedN + 1> t;
    for (int i = 1; i <= kMaxCachedN; ++i) t[static_cast<std::size_t>(i)] = std::make_unique<LambdaFn>(i);
    return t;
  }();
  if (n < 1 || n > kMaxCachedN) {
    throw DomainError("lambda_fn: n must be in [1, " + std::to_string(kMaxCachedN) + "]");
  }
  return *table[static_cast<std::size_t>(n)];
}

double lambda_eval(int n, double u) { return lambda_fn(n).value(u); }

double lambda_deriv(int n, double u, int order) { return lambda_fn(n).derivative(u, order); }

}  // namespace solidangle
