#include "solidangle/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double s) {
  double f = s - std::floor(s);
  if (f >= 1.0) f = 0.0;
  return f;
}

double periodic_gap(double a, double b) {
  const double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// ParamManifold

ParamManifold::ParamManifold(int dim, std::string kind) : dim_(dim), kind_(std::move(kind)) {
  if (dim != 1 && dim != 2) throw ConfigError("manifold dimension must be 1 or 2");
}

std::optional<std::pair<Vec, Vec>> ParamManifold::explicit_normal_frame(const Param&) const {
  return std::nullopt;
}

std::shared_ptr<const SampleSet> ParamManifold::build_samples(int log2_per_side) const {
  auto set = std::make_shared<SampleSet>();
  set->per_side = 1 << log2_per_side;
  set->ambient = ambient();
  set->dim = dim_;
  const std::size_t count = set->size();
  set->points.resize(count * static_cast<std::size_t>(ambient()));
  set->tangents.resize(count * static_cast<std::size_t>(ambient() * dim_));
  const double h = 1.0 / set->per_side;
  for (std::size_t idx = 0; idx < count; ++idx) {
    Param s{};
    if (dim_ == 1) {
      s[0] = static_cast<double>(idx) * h;
    } else {
      s[0] = static_cast<double>(idx / static_cast<std::size_t>(set->per_side)) * h;
      s[1] = static_cast<double>(idx % static_cast<std::size_t>(set->per_side)) * h;
    }
    const Vec p = point(s);
    const Mat t = tangents(s);
    double* pp = set->points.data() + idx * static_cast<std::size_t>(ambient());
    double* tp = set->tangents.data() + idx * static_cast<std::size_t>(ambient() * dim_);
    for (int a = 0; a < ambient(); ++a) pp[a] = p[a];
    for (int c = 0; c < dim_; ++c)
      for (int a = 0; a < ambient(); ++a) tp[c * ambient() + a] = t(a, c);
  }
  return set;
}

std::shared_ptr<const SampleSet> ParamManifold::samples(int log2_per_side) const {
  if (log2_per_side < 0 || log2_per_side > kMaxLevel) {
    throw DomainError("samples: level out of range");
  }
  const std::size_t total = std::size_t{1} << (dim_ * log2_per_side);
  if (total > kMaxCachedSamples) return build_samples(log2_per_side);
  const auto idx = static_cast<std::size_t>(log2_per_side);
  std::call_once(level_once_[idx], [&] { level_cache_[idx] = build_samples(log2_per_side); });
  return level_cache_[idx];
}

void ParamManifold::compute_extent() const {
  const auto set = samples(dim_ == 1 ? 9 : 5);
  double rmax = 0.0;
  double dmax = 0.0;
  const std::size_t count = set->size();
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const Eigen::VectorXd> pi(set->point(i), ambient());
    rmax = std::max(rmax, pi.norm());
    for (std::size_t j = i + 1; j < count; ++j) {
      const Eigen::Map<const Eigen::VectorXd> pj(set->point(j), ambient());
      dmax = std::max(dmax, (pi - pj).norm());
    }
  }
  bounding_radius_ = rmax;
  diameter_ = dmax;
}

double ParamManifold::bounding_radius() const {
  std::call_once(extent_once_, [this] { compute_extent(); });
  return bounding_radius_;
}

double ParamManifold::diameter() const {
  std::call_once(extent_once_, [this] { compute_extent(); });
  return diameter_;
}

// ---------------------------------------------------------------------------
// Circle

Circle::Circle() : ParamManifold(1, "circle") {}

Vec Circle::point(const Param& s) const {
  const double t = kTwoPi * s[0];
  return make_vec({std::cos(t), std::sin(t), 0.0});
}

Mat Circle::tangents(const Param& s) const {
  const double t = kTwoPi * s[0];
  Mat m(3, 1);
  m << -kTwoPi * std::sin(t), kTwoPi * std::cos(t), 0.0;
  return m;
}

Vec Circle::second(const Param& s, int, int) const {
  const double t = kTwoPi * s[0];
  const double c = kTwoPi * kTwoPi;
  return make_vec({-c * std::cos(t), -c * std::sin(t), 0.0});
}

// ---------------------------------------------------------------------------
// TorusKnot

TorusKnot::TorusKnot(int p, int q, double major, double minor)
    : ParamManifold(1, "torus_knot"), p_(p), q_(q), major_(major), minor_(minor) {
  if (p == 0 || q == 0 || std::gcd(p, q) != 1) throw ConfigError("torus_knot: p and q must be coprime and nonzero");
  if (!(minor > 0.0) || !(major > minor)) throw ConfigError("torus_knot: need R > r > 0");
}

Vec TorusKnot::point(const Param& s) const {
  const double t = kTwoPi * s[0];
  const double rho = major_ + minor_ * std::cos(q_ * t);
  return make_vec({rho * std::cos(p_ * t), rho * std::sin(p_ * t), minor_ * std::sin(q_ * t)});
}

Mat TorusKnot::tangents(const Param& s) const {
  const double t = kTwoPi * s[0];
  const double rho = major_ + minor_ * std::cos(q_ * t);
  const double drho = -minor_ * q_ * std::sin(q_ * t);
  const double cp = std::cos(p_ * t);
  const double sp = std::sin(p_ * t);
  Mat m(3, 1);
  m << kTwoPi * (drho * cp - p_ * rho * sp), kTwoPi * (drho * sp + p_ * rho * cp),
      kTwoPi * minor_ * q_ * std::cos(q_ * t);
  return m;
}

Vec TorusKnot::second(const Param& s, int, int) const {
  const double t = kTwoPi * s[0];
  const double rho = major_ + minor_ * std::cos(q_ * t);
  const double drho = -minor_ * q_ * std::sin(q_ * t);
  const double ddrho = -minor_ * q_ * q_ * std::cos(q_ * t);
  const double cp = std::cos(p_ * t);
  const double sp = std::sin(p_ * t);
  const double c = kTwoPi * kTwoPi;
  return make_vec({c * (ddrho * cp - 2.0 * p_ * drho * sp - p_ * p_ * rho * cp),
                   c * (ddrho * sp + 2.0 * p_ * drho * cp - p_ * p_ * rho * sp),
                   -c * minor_ * q_ * q_ * std::sin(q_ * t)});
}

// ---------------------------------------------------------------------------
// SplineCurve

SplineCurve::SplineCurve(std::vector<Vec3> points) : ParamManifold(1, "polyline"), knots_(std::move(points)) {
  const int m = static_cast<int>(knots_.size());
  if (m < 4) throw ConfigError("polyline: need at least 4 points");
  for (int i = 0; i < m; ++i) {
    if (!knots_[static_cast<std::size_t>(i)].allFinite()) throw ConfigError("polyline: non-finite point");
    if ((knots_[static_cast<std::size_t>(i)] - knots_[static_cast<std::size_t>((i + 1) % m)]).norm() < 1e-12) {
      throw ConfigError("polyline: consecutive points coincide");
    }
  }
  // Cyclic system M_{j-1} + 4 M_j + M_{j+1} = 6 m^2 (P_{j+1} - 2 P_j + P_{j-1}),
  // solved by Sherman-Morrison around a tridiagonal Thomas sweep.
  const double h = 1.0 / m;
  std::vector<Vec3> rhs(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const auto& prev = knots_[static_cast<std::size_t>((j + m - 1) % m)];
    const auto& next = knots_[static_cast<std::size_t>((j + 1) % m)];
    rhs[static_cast<std::size_t>(j)] = 6.0 * (next - 2.0 * knots_[static_cast<std::size_t>(j)] + prev) / (h * h);
  }
  // A = T + u v^T with corner terms 1: gamma = -4, u = (gamma, 0.., 1), v = (1, 0.., 1/gamma).
  const double gamma = -4.0;
  std::vector<double> diag(static_cast<std::size_t>(m), 4.0);
  diag.front() -= gamma;
  diag.back() -= 1.0 / gamma;
  auto thomas = [&](std::vector<Vec3> d) {
    std::vector<double> b = diag;
    for (int i = 1; i < m; ++i) {
      const double w = 1.0 / b[static_cast<std::size_t>(i - 1)];
      b[static_cast<std::size_t>(i)] -= w;
      d[static_cast<std::size_t>(i)] -= w * d[static_cast<std::size_t>(i - 1)];
    }
    d.back() /= b.back();
    for (int i = m - 2; i >= 0; --i) {
      d[static_cast<std::size_t>(i)] = (d[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i + 1)]) /
                                       b[static_cast<std::size_t>(i)];
    }
    return d;
  };
  std::vector<Vec3> y = thomas(rhs);
  std::vector<Vec3> uvec(static_cast<std::size_t>(m), Vec3::Zero());
  uvec.front() = Vec3::Constant(gamma);
  uvec.back() = Vec3::Constant(1.0);
  std::vector<Vec3> z = thomas(uvec);
  const Vec3 vy = y.front() + y.back() / gamma;
  const Vec3 vz = z.front() + z.back() / gamma;
  moments_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    moments_[k] = y[k] - (vy.array() / (1.0 + vz.array())).matrix().cwiseProduct(z[k]);
  }
}

SplineCurve::Segment SplineCurve::locate(double s) const {
  const int m = static_cast<int>(knots_.size());
  const double x = frac(s) * m;
  int i = static_cast<int>(std::floor(x));
  if (i >= m) i = m - 1;
  return {i, x - i};
}

Vec SplineCurve::point(const Param& s) const {
  const int m = static_cast<int>(knots_.size());
  const auto [i, t] = locate(s[0]);
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>((i + 1) % m);
  const double h = 1.0 / m;
  const double u = 1.0 - t;
  const Vec3 p = u * knots_[a] + t * knots_[b] +
                 (h * h / 6.0) * ((u * u * u - u) * moments_[a] + (t * t * t - t) * moments_[b]);
  return make_vec({p.x(), p.y(), p.z()});
}

Mat SplineCurve::tangents(const Param& s) const {
  const int m = static_cast<int>(knots_.size());
  const auto [i, t] = locate(s[0]);
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>((i + 1) % m);
  const double h = 1.0 / m;
  const double u = 1.0 - t;
  const Vec3 d = (knots_[b] - knots_[a]) / h +
                 (h / 6.0) * (-(3.0 * u * u - 1.0) * moments_[a] + (3.0 * t * t - 1.0) * moments_[b]);
  Mat out(3, 1);
  out << d.x(), d.y(), d.z();
  return out;
}

Vec SplineCurve::second(const Param& s, int, int) const {
  const int m = static_cast<int>(knots_.size());
  const auto [i, t] = locate(s[0]);
  const Vec3 d = (1.0 - t) * moments_[static_cast<std::size_t>(i)] + t * moments_[static_cast<std::size_t>((i + 1) % m)];
  return make_vec({d.x(), d.y(), d.z()});
}

// ---------------------------------------------------------------------------
// FlatTorus4

FlatTorus4::FlatTorus4(double major, double minor) : ParamManifold(2, "flat_torus4"), major_(major), minor_(minor) {
  if (!(minor > 0.0) || !(major > minor)) throw ConfigError("flat_torus4: need R > r > 0");
}

Vec FlatTorus4::point(const Param& s) const {
  const double a = kTwoPi * s[0];
  const double b = kTwoPi * s[1];
  const double rho = major_ + minor_ * std::cos(b);
  return make_vec({rho * std::cos(a), rho * std::sin(a), minor_ * std::sin(b), 0.0});
}

Mat FlatTorus4::tangents(const Param& s) const {
  const double a = kTwoPi * s[0];
  const double b = kTwoPi * s[1];
  const double rho = major_ + minor_ * std::cos(b);
  Mat m(4, 2);
  m.col(0) << -kTwoPi * rho * std::sin(a), kTwoPi * rho * std::cos(a), 0.0, 0.0;
  m.col(1) << -kTwoPi * minor_ * std::sin(b) * std::cos(a), -kTwoPi * minor_ * std::sin(b) * std::sin(a),
      kTwoPi * minor_ * std::cos(b), 0.0;
  return m;
}

Vec FlatTorus4::second(const Param& s, int i, int j) const {
  const double a = kTwoPi * s[0];
  const double b = kTwoPi * s[1];
  const double c = kTwoPi * kTwoPi;
  const double rho = major_ + minor_ * std::cos(b);
  if (i == 0 && j == 0) return make_vec({-c * rho * std::cos(a), -c * rho * std::sin(a), 0.0, 0.0});
  if (i == 1 && j == 1) {
    return make_vec({-c * minor_ * std::cos(b) * std::cos(a), -c * minor_ * std::cos(b) * std::sin(a),
                     -c * minor_ * std::sin(b), 0.0});
  }
  return make_vec({c * minor_ * std::sin(b) * std::sin(a), -c * minor_ * std::sin(b) * std::cos(a), 0.0, 0.0});
}

std::optional<std::pair<Vec, Vec>> FlatTorus4::explicit_normal_frame(const Param& s) const {
  const double a = kTwoPi * s[0];
  const double b = kTwoPi * s[1];
  Vec v1 = make_vec({std::cos(b) * std::cos(a), std::cos(b) * std::sin(a), std::sin(b), 0.0});
  return std::make_pair(v1, unit_vec(4, 3));
}

// ---------------------------------------------------------------------------
// Wrappers

TransformedManifold::TransformedManifold(ManifoldPtr base, Mat rotation, Vec shift, double scale)
    : ParamManifold(base->dim(), base->kind()),
      base_(std::move(base)),
      rotation_(std::move(rotation)),
      shift_(std::move(shift)),
      scale_(scale) {
  const int n = base_->ambient();
  if (rotation_.rows() != n || rotation_.cols() != n || shift_.size() != n) {
    throw ConfigError("transform: dimension mismatch");
  }
  if ((rotation_.transpose() * rotation_ - Mat::Identity(n, n)).norm() > 1e-10 || small_det(rotation_) < 0.0) {
    throw ConfigError("transform: rotation must be special orthogonal");
  }
  if (!(scale_ > 0.0)) throw ConfigError("transform: scale must be positive");
}

Vec TransformedManifold::point(const Param& s) const { return scale_ * (rotation_ * base_->point(s)) + shift_; }

Mat TransformedManifold::tangents(const Param& s) const { return scale_ * (rotation_ * base_->tangents(s)); }

Vec TransformedManifold::second(const Param& s, int i, int j) const {
  return scale_ * (rotation_ * base_->second(s, i, j));
}

std::optional<std::pair<Vec, Vec>> TransformedManifold::explicit_normal_frame(const Param& s) const {
  auto f = base_->explicit_normal_frame(s);
  if (!f) return std::nullopt;
  return std::make_pair(Vec(rotation_ * f->first), Vec(rotation_ * f->second));
}

ReversedManifold::ReversedManifold(ManifoldPtr base)
    : ParamManifold(base->dim(), base->kind()), base_(std::move(base)) {}

Param ReversedManifold::flip(const Param& s) { return {frac(-s[0]), s[1]}; }

Vec ReversedManifold::point(const Param& s) const { return base_->point(flip(s)); }

Mat ReversedManifold::tangents(const Param& s) const {
  Mat t = base_->tangents(flip(s));
  t.col(0) = -t.col(0);
  return t;
}

Vec ReversedManifold::second(const Param& s, int i, int j) const {
  const Vec v = base_->second(flip(s), i, j);
  return (i == j || dim() == 1) ? v : Vec(-v);
}

std::optional<std::pair<Vec, Vec>> ReversedManifold::explicit_normal_frame(const Param& s) const {
  return base_->explicit_normal_frame(flip(s));
}

// ---------------------------------------------------------------------------
// Geometry helpers

Vec secant(const Vec& x, const Vec& y) {
  const Vec d = y - x;
  const double r = d.norm();
  if (r < 1e-12) throw ProximityError("secant: points coincide");
  return d / r;
}

double param_distance(const Param& a, const Param& b, int dim) {
  double d = periodic_gap(a[0], b[0]);
  if (dim == 2) d = std::max(d, periodic_gap(a[1], b[1]));
  return d;
}

namespace {

struct Candidate {
  Param s;
  double d2;
};

// Newton iteration on f(s) = |c(s) - x|^2 / 2 with a gradient fallback.
Candidate polish(const ParamManifold& m, const Vec& x, Param s) {
  const int n = m.dim();
  double best = (m.point(s) - x).squaredNorm();
  for (int it = 0; it < 50; ++it) {
    const Vec r = m.point(s) - x;
    const Mat t = m.tangents(s);
    Eigen::Matrix2d h = Eigen::Matrix2d::Identity();
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) {
      g[i] = r.dot(t.col(i));
      for (int j = 0; j < n; ++j) h(i, j) = t.col(i).dot(t.col(j)) + r.dot(m.second(s, i, j));
    }
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    const double det = n == 1 ? h(0, 0) : h.determinant();
    const bool pd = h(0, 0) > 0.0 && det > 0.0;
    if (pd) {
      if (n == 1) {
        step[0] = -g[0] / h(0, 0);
      } else {
        step = -h.inverse() * g;
      }
    } else {
      double gmax = 0.0;
      for (int i = 0; i < n; ++i) gmax = std::max(gmax, t.col(i).squaredNorm());
      step = -g / gmax;
    }
    // Keep steps local to the basin found by the scan.
    const double len = step.cwiseAbs().maxCoeff();
    if (len > 0.02) step *= 0.02 / len;
    double lambda = 1.0;
    Param trial = s;
    double f = 0.0;
    for (int ls = 0; ls < 30; ++ls) {
      for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] + lambda * step[i];
      f = (m.point(trial) - x).squaredNorm();
      if (f <= best) break;
      lambda *= 0.5;
    }
    if (f > best) break;
    const double moved = lambda * step.cwiseAbs().maxCoeff();
    s = trial;
    best = f;
    if (moved < 1e-15) break;
  }
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = frac(s[static_cast<std::size_t>(i)]);
  return {s, best};
}

}  // namespace

NearestPoint nearest_point(const ParamManifold& m, const Vec& x) {
  const int n = m.dim();
  const int log2 = n == 1 ? 10 : 7;
  const auto set = m.samples(log2);
  const int per = set->per_side;
  const std::size_t count = set->size();
  std::vector<double> d2(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const Eigen::VectorXd> p(set->point(i), m.ambient());
    d2[i] = (p - Eigen::VectorXd(x)).squaredNorm();
  }
  auto index = [per](int i, int j) {
    i = ((i % per) + per) % per;
    j = ((j % per) + per) % per;
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(per) + static_cast<std::size_t>(j);
  };
  std::vector<Candidate> cands;
  const double h = 1.0 / per;
  if (n == 1) {
    for (int i = 0; i < per; ++i) {
      const double v = d2[static_cast<std::size_t>(i)];
      if (v <= d2[static_cast<std::size_t>((i + 1) % per)] && v <= d2[static_cast<std::size_t>((i + per - 1) % per)]) {
        cands.push_back({{i * h, 0.0}, v});
      }
    }
  } else {
    for (int i = 0; i < per; ++i) {
      for (int j = 0; j < per; ++j) {
        const double v = d2[index(i, j)];
        bool minimum = true;
        for (int di = -1; di <= 1 && minimum; ++di)
          for (int dj = -1; dj <= 1; ++dj)
            if ((di != 0 || dj != 0) && d2[index(i + di, j + dj)] < v) {
              minimum = false;
              break;
            }
        if (minimum) cands.push_back({{i * h, j * h}, v});
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.d2 < b.d2; });
  // Plateaus (e.g. the axis of a circle) produce many tied candidates; keep a few.
  constexpr std::size_t kPolished = 8;
  if (cands.size() > kPolished) cands.resize(kPolished);
  std::vector<Candidate> polished;
  for (const auto& c : cands) polished.push_back(polish(m, x, c.s));
  std::sort(polished.begin(), polished.end(), [](const Candidate& a, const Candidate& b) { return a.d2 < b.d2; });

  NearestPoint out;
  out.w = polished.front().s;
  out.distance = std::sqrt(polished.front().d2);
  for (std::size_t k = 1; k < polished.size(); ++k) {
    const double dk = std::sqrt(polished[k].d2);
    if (std::abs(dk - out.distance) < 1e-9 && param_distance(polished[k].s, out.w, n) > 1e-6) {
      out.ambiguous = true;
      break;
    }
  }
  return out;
}

double max_curvature(const ParamManifold& m) {
  const int n = m.dim();
  const auto set = m.samples(n == 1 ? 9 : 6);
  const int per = set->per_side;
  const double h = 1.0 / per;
  double kmax = 0.0;
  for (std::size_t idx = 0; idx < set->size(); ++idx) {
    Param s{};
    if (n == 1) {
      s[0] = static_cast<double>(idx) * h;
    } else {
      s[0] = static_cast<double>(idx / static_cast<std::size_t>(per)) * h;
      s[1] = static_cast<double>(idx % static_cast<std::size_t>(per)) * h;
    }
    const Mat t = m.tangents(s);
    if (n == 1) {
      const Vec c1 = t.col(0);
      const Vec c2 = m.second(s, 0, 0);
      const double a = c1.squaredNorm();
      const double num = std::sqrt(std::max(0.0, a * c2.squaredNorm() - std::pow(c1.dot(c2), 2)));
      kmax = std::max(kmax, num / std::pow(a, 1.5));
    } else {
      const Eigen::MatrixXd tt = t;
      const Eigen::MatrixXd g = tt.transpose() * tt;
      const Eigen::MatrixXd proj = tt * g.inverse() * tt.transpose();
      const Vec s00 = m.second(s, 0, 0);
      const Vec s01 = m.second(s, 0, 1);
      const Vec s11 = m.second(s, 1, 1);
      for (int k = 0; k < 32; ++k) {
        const double th = std::numbers::pi * k / 32.0;
        const double a = std::cos(th);
        const double b = std::sin(th);
        const Eigen::VectorXd v = a * tt.col(0) + b * tt.col(1);
        Eigen::VectorXd acc = a * a * Eigen::VectorXd(s00) + 2.0 * a * b * Eigen::VectorXd(s01) +
                              b * b * Eigen::VectorXd(s11);
        acc -= proj * acc;
        kmax = std::max(kmax, acc.norm() / v.squaredNorm());
      }
    }
  }
  return kmax;
}

double tube_radius(const ParamManifold& m) {
  const int n = m.dim();
  const auto set = m.samples(n == 1 ? 9 : 5);
  const int per = set->per_side;
  const std::size_t count = set->size();
  const double sep = 0.05;
  const int amb = m.ambient();
  auto dist = [&](std::size_t i, std::size_t j) {
    const Eigen::Map<const Eigen::VectorXd> a(set->point(i), amb);
    const Eigen::Map<const Eigen::VectorXd> b(set->point(j), amb);
    return (a - b).norm();
  };
  auto param_of = [&](std::size_t idx) {
    const double h = 1.0 / per;
    if (n == 1) return Param{static_cast<double>(idx) * h, 0.0};
    return Param{static_cast<double>(idx / static_cast<std::size_t>(per)) * h,
                 static_cast<double>(idx % static_cast<std::size_t>(per)) * h};
  };
  auto index = [per](int i, int j) {
    i = ((i % per) + per) % per;
    j = ((j % per) + per) % per;
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(per) + static_cast<std::size_t>(j);
  };
  // Interior local minima of the chord length |c(s_i) - c(s_j)| over j away
  // from i approximate doubly-normal chords.
  double chord = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const Param pi = param_of(i);
    for (std::size_t j = 0; j < count; ++j) {
      const Param pj = param_of(j);
      if (param_distance(pi, pj, n) < sep) continue;
      const double dj = dist(i, j);
      bool interior_min = true;
      if (n == 1) {
        for (int off : {-1, 1}) {
          const auto k = static_cast<std::size_t>((static_cast<int>(j) + off + per) % per);
          if (param_distance(pi, param_of(k), n) < sep || dist(i, k) < dj) interior_min = false;
        }
      } else {
        const int ji = static_cast<int>(j / static_cast<std::size_t>(per));
        const int jj = static_cast<int>(j % static_cast<std::size_t>(per));
        for (int a = -1; a <= 1 && interior_min; ++a)
          for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            const std::size_t k = index(ji + a, jj + b);
            if (param_distance(pi, param_of(k), n) < sep || dist(i, k) < dj) {
              interior_min = false;
              break;
            }
          }
      }
      if (interior_min) chord = std::min(chord, 0.5 * dj);
    }
  }
  const double kmax = max_curvature(m);
  const double curv_radius = kmax > 0.0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
  const double reach = std::min(chord, curv_radius);
  if (!std::isfinite(reach)) throw DomainError("tube_radius: could not bound the reach");
  return 0.5 * reach;
}

double injectivity_audit(const ParamManifold& m, double separation) {
  const int n = m.dim();
  const auto set = m.samples(n == 1 ? 9 : 5);
  const int per = set->per_side;
  const double h = 1.0 / per;
  const std::size_t count = set->size();
  auto param_of = [&](std::size_t idx) {
    if (n == 1) return Param{static_cast<double>(idx) * h, 0.0};
    return Param{static_cast<double>(idx / static_cast<std::size_t>(per)) * h,
                 static_cast<double>(idx % static_cast<std::size_t>(per)) * h};
  };
  // Closest separated sample pair per sample, then the best few refined.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const Eigen::VectorXd> a(set->point(i), m.ambient());
    double d_best = std::numeric_limits<double>::infinity();
    std::size_t j_best = i;
    for (std::size_t j = i + 1; j < count; ++j) {
      if (param_distance(param_of(i), param_of(j), n) < separation) continue;
      const Eigen::Map<const Eigen::VectorXd> b(set->point(j), m.ambient());
      const double d = (a - b).norm();
      if (d < d_best) {
        d_best = d;
        j_best = j;
      }
    }
    if (j_best != i) pairs.emplace_back(d_best, i, j_best);
  }
  if (pairs.empty()) return std::numeric_limits<double>::infinity();
  constexpr std::size_t kRefined = 16;
  const std::size_t keep = std::min(kRefined, pairs.size());
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(keep), pairs.end());
  double best = std::get<0>(pairs.front());
  // Gauss-Newton on chart(a) - chart(b): a crossing drives it to zero even
  // when no two samples land on it.
  for (std::size_t k = 0; k < keep; ++k) {
    Param a = param_of(std::get<1>(pairs[k]));
    Param b = param_of(std::get<2>(pairs[k]));
    constexpr double lim = 1.0 / 32.0;  // per-step cap in parameter units
    for (int it = 0; it < 30; ++it) {
      const Vec f = m.point(a) - m.point(b);
      Mat jac(m.ambient(), 2 * n);
      jac.leftCols(n) = m.tangents(a);
      jac.rightCols(n) = -m.tangents(b);
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(c)] += std::clamp(step(c), -lim, lim);
        b[static_cast<std::size_t>(c)] += std::clamp(step(n + c), -lim, lim);
        a[static_cast<std::size_t>(c)] -= std::floor(a[static_cast<std::size_t>(c)]);
        b[static_cast<std::size_t>(c)] -= std::floor(b[static_cast<std::size_t>(c)]);
      }
      if (step.norm() < 1e-14) break;
    }
    if (param_distance(a, b, n) < separation) continue;
    best = std::min(best, (m.point(a) - m.point(b)).norm());
  }
  return best;
}

void validate_manifold(const ParamManifold& m) {
  if (injectivity_audit(m) < 1e-3) throw ConfigError(m.kind() + ": chart is not injective");
  const auto set = m.samples(m.dim() == 1 ? 9 : 5);
  for (std::size_t i = 0; i < set->size(); ++i) {
    const Eigen::Map<const Eigen::MatrixXd> t(set->tangent(i), m.ambient(), m.dim());
    const Eigen::MatrixXd g = t.transpose() * t;
    if (!(g.determinant() > 1e-12)) throw ConfigError(m.kind() + ": chart derivative loses rank");
  }
}

}  // namespace solidangle
