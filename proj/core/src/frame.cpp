#include "solidangle/frame.hpp"

#include <cmath>
#include <numbers>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 to3(const Vec& v) { return {v[0], v[1], v[2]}; }
Vec from3(const Vec3& v) { return make_vec({v.x(), v.y(), v.z()}); }

Vec3 unit_tangent(const ParamManifold& m, double s) { return to3(m.tangents({s, 0.0}).col(0)).normalized(); }

Vec3 orthonormalise(Vec3 r, const Vec3& t) {
  r -= r.dot(t) * t;
  return r.normalized();
}

// Rotation by `turns` within the normal plane spanned by (r, r x t).
Vec3 rotate_normal(const Vec3& r, const Vec3& t, double turns) {
  const double a = kTwoPi * turns;
  return std::cos(a) * r + std::sin(a) * r.cross(t);
}

}  // namespace

Vec3 double_reflect(const Vec3& x0, const Vec3& t0, const Vec3& r, const Vec3& x1, const Vec3& t1) {
  const Vec3 v1 = x1 - x0;
  const double c1 = v1.squaredNorm();
  if (c1 < 1e-300) return orthonormalise(r, t1);
  const Vec3 rl = r - (2.0 / c1) * v1.dot(r) * v1;
  const Vec3 tl = t0 - (2.0 / c1) * v1.dot(t0) * v1;
  const Vec3 v2 = t1 - tl;
  const double c2 = v2.squaredNorm();
  const Vec3 out = c2 < 1e-300 ? rl : Vec3(rl - (2.0 / c2) * v2.dot(rl) * v2);
  return orthonormalise(out, t1);
}

NormalFrame::NormalFrame(ManifoldPtr m) : m_(std::move(m)) {
  if (auto f = m_->explicit_normal_frame({0.0, 0.0})) {
    explicit_ = true;
    // Orient like the curves (v2 = v1 x T): det[tangents, v1, v2] < 0.
    Mat b(m_->ambient(), m_->ambient());
    b.leftCols(m_->dim()) = m_->tangents({0.0, 0.0});
    b.col(m_->dim()) = f->first;
    b.col(m_->dim() + 1) = f->second;
    flip_v2_ = b.determinant() > 0.0;
    return;
  }
  if (m_->dim() != 1) throw ConfigError("normal frame: surfaces need a closed-form framing");
  const ParamManifold& c = *m_;
  // Start from the outward principal normal (radial for the circle); fall back
  // to the coordinate axis most orthogonal to the tangent.
  const Vec3 t0 = unit_tangent(c, 0.0);
  Vec3 acc = to3(c.second({0.0, 0.0}, 0, 0));
  acc -= acc.dot(t0) * t0;
  Vec3 start;
  if (acc.norm() > 1e-8 * to3(c.tangents({0.0, 0.0}).col(0)).squaredNorm()) {
    start = -acc.normalized();
  } else {
    int axis = 0;
    t0.cwiseAbs().minCoeff(&axis);
    start = orthonormalise(Vec3::Unit(axis), t0);
  }
  const int n = kTransportSamples;
  r1_.resize(static_cast<std::size_t>(n));
  r1_[0] = start;
  Vec3 x_prev = to3(c.point({0.0, 0.0}));
  Vec3 t_prev = t0;
  Vec3 r = start;
  for (int j = 1; j <= n; ++j) {
    const double s = static_cast<double>(j) / n;
    const Vec3 x = to3(c.point({j == n ? 0.0 : s, 0.0}));
    const Vec3 t = unit_tangent(c, j == n ? 0.0 : s);
    r = double_reflect(x_prev, t_prev, r, x, t);
    if (j < n) r1_[static_cast<std::size_t>(j)] = r;
    x_prev = x;
    t_prev = t;
  }
  // r = cos(a) start + sin(a) (start x t0); undo a linearly in s.
  holonomy_ = std::atan2(r.dot(start.cross(t0)), r.dot(start)) / kTwoPi;
}

std::pair<Vec, Vec> NormalFrame::at(const Param& s) const {
  if (explicit_) {
    auto f = *m_->explicit_normal_frame(s);
    if (flip_v2_) f.second = -f.second;
    return f;
  }
  const int n = kTransportSamples;
  double u = s[0] - std::floor(s[0]);
  if (u >= 1.0) u = 0.0;
  int j = static_cast<int>(std::floor(u * n));
  if (j >= n) j = n - 1;
  const double sj = static_cast<double>(j) / n;
  const Vec3 xj = to3(m_->point({sj, 0.0}));
  const Vec3 tj = unit_tangent(*m_, sj);
  const Vec3 x = to3(m_->point({u, 0.0}));
  const Vec3 t = unit_tangent(*m_, u);
  Vec3 r = double_reflect(xj, tj, r1_[static_cast<std::size_t>(j)], x, t);
  r = rotate_normal(r, t, -holonomy_ * u);
  return {from3(r), from3(r.cross(t))};
}

TubularCoords to_tubular(const NormalFrame& frame, const Vec& x, double eps0) {
  const ParamManifold& m = frame.manifold();
  const NearestPoint np = nearest_point(m, x);
  if (np.distance >= eps0) throw DomainError("to_tubular: point outside the tubular neighbourhood");
  const auto [v1, v2] = frame.at(np.w);
  const Vec d = x - m.point(np.w);
  TubularCoords out;
  out.w = np.w;
  out.r = np.distance;
  out.phi = Angle(std::atan2(d.dot(v2), d.dot(v1)) / kTwoPi);
  return out;
}

Vec from_tubular(const NormalFrame& frame, const TubularCoords& t) {
  const auto [v1, v2] = frame.at(t.w);
  const double a = kTwoPi * t.phi.value();
  return frame.manifold().point(t.w) + t.r * (std::cos(a) * v1 + std::sin(a) * v2);
}

}  // namespace solidangle
