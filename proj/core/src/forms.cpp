#include "solidangle/forms.hpp"

#include <cmath>
#include <numbers>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

std::vector<Vec> build_candidates(int ambient) {
  std::vector<Vec> out;
  for (int i = 0; i < ambient; ++i) {
    out.push_back(unit_vec(ambient, i));
    out.push_back(-unit_vec(ambient, i));
  }
  constexpr int kSpread = 64;
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  if (ambient == 3) {
    const double step = 2.0 * std::numbers::pi * (1.0 - 1.0 / golden);
    for (int i = 0; i < kSpread; ++i) {
      const double h = 1.0 - (2.0 * i + 1.0) / kSpread;
      const double rho = std::sqrt(1.0 - h * h);
      out.push_back(make_vec({rho * std::cos(i * step), rho * std::sin(i * step), h}));
    }
  } else if (ambient == 4) {
    // Hopf coordinates (cos a e^{i t1}, sin a e^{i t2}) with sin^2 a uniform.
    const double plastic = 1.32471795724474602596;
    const double f1 = 1.0 / golden;
    const double f2 = 1.0 / plastic;
    for (int i = 0; i < kSpread; ++i) {
      const double s2 = (i + 0.5) / kSpread;
      const double ca = std::sqrt(1.0 - s2);
      const double sa = std::sqrt(s2);
      const double t1 = 2.0 * std::numbers::pi * std::fmod(i * f1, 1.0);
      const double t2 = 2.0 * std::numbers::pi * std::fmod(i * f2, 1.0);
      out.push_back(make_vec({ca * std::cos(t1), ca * std::sin(t1), sa * std::cos(t2), sa * std::sin(t2)}));
    }
  } else {
    throw DomainError("candidate_poles: ambient dimension must be 3 or 4");
  }
  return out;
}

struct Rotated {
  Vec d;
  Mat t;
};

Rotated rotate(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents) {
  const int a = static_cast<int>(x.size());
  if (y.size() != a || pole.rotation.rows() != a || tangents.rows() != a || tangents.cols() != a - 2) {
    throw DomainError("pullback density: dimension mismatch");
  }
  Rotated r{pole.rotation * (y - x), pole.rotation * tangents};
  const double dist = r.d.norm();
  if (dist < 1e-12) throw ProximityError("pullback density: x and y coincide");
  if (r.d[a - 1] / dist > kMarginThreshold) throw PoleNotFoundError("pullback density: secant too close to the pole");
  return r;
}

}  // namespace

PoleFrame make_pole_frame(const Vec& z_in) {
  const int a = static_cast<int>(z_in.size());
  const double norm = z_in.norm();
  if (a < 3 || a > kMaxAmbient || !(norm > 0.0)) throw DomainError("make_pole_frame: bad pole vector");
  PoleFrame f;
  f.z = z_in / norm;
  const Vec v = f.z - unit_vec(a, a - 1);
  const double vv = v.squaredNorm();
  if (vv < 1e-30) {
    f.rotation = Mat::Identity(a, a);
  } else {
    f.rotation = Mat::Identity(a, a) - (2.0 / vv) * v * v.transpose();
    f.rotation.row(0) *= -1.0;
  }
  return f;
}

const std::vector<Vec>& candidate_poles(int ambient) {
  static const std::vector<Vec> c3 = build_candidates(3);
  static const std::vector<Vec> c4 = build_candidates(4);
  if (ambient == 3) return c3;
  if (ambient == 4) return c4;
  throw DomainError("candidate_poles: ambient dimension must be 3 or 4");
}

double sphere_area(int k) {
  // sigma_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double eta_pullback_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents) {
  const Rotated r = rotate(pole, x, y, tangents);
  const int n = static_cast<int>(x.size()) - 2;
  double u = 0.0;
  if (n == 1) return detail::eta_kernel<1>(lambda_fn(1), r.d.data(), r.t.data(), u);
  return detail::eta_kernel<2>(lambda_fn(2), r.d.data(), r.t.data(), u);
}

Vec eta_pullback_grad_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents) {
  const Rotated r = rotate(pole, x, y, tangents);
  const int a = static_cast<int>(x.size());
  double g[kMaxAmbient] = {};
  double u = 0.0;
  if (a == 3) {
    detail::eta_grad_kernel<1>(lambda_fn(1), r.d.data(), r.t.data(), g, u);
  } else {
    detail::eta_grad_kernel<2>(lambda_fn(2), r.d.data(), r.t.data(), g, u);
  }
  Vec rotated(a);
  for (int i = 0; i < a; ++i) rotated[i] = g[i];
  return pole.rotation.transpose() * rotated;
}

double eta_pullback_grad_density(const PoleFrame& pole, const Vec& x, const Vec& y, const Mat& tangents, int axis) {
  if (axis < 0 || axis >= x.size()) throw DomainError("eta_pullback_grad_density: axis out of range");
  return eta_pullback_grad_density(pole, x, y, tangents)[axis];
}

double omega_pullback_density(const Vec& x, const Vec& y, const Mat& frame) {
  const int a = static_cast<int>(x.size());
  if (y.size() != a || frame.rows() != a || frame.cols() != a - 1) {
    throw DomainError("omega_pullback_density: dimension mismatch");
  }
  const Vec d = y - x;
  const double r = d.norm();
  if (r < 1e-12) throw ProximityError("omega_pullback_density: x and y coincide");
  Mat m(a, a);
  m.col(0) = d;
  m.rightCols(a - 1) = frame;
  return small_det(m) / std::pow(r, a);
}

}  // namespace solidangle
