#include "solidangle/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

// Multiple of epsilon * conditioning accepted as the quadrature's noise floor.
constexpr double kRoundoffFactor = 32.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Coarse picture of M as seen from x.
struct Coarse {
  double min_dist = 0.0;
  double spacing = 0.0;  // largest distance between grid neighbours
  double length = 0.0;   // curve length, or longest coordinate loop (n = 2)
};

int coarse_level(int n) { return n == 1 ? 8 : 4; }

Coarse coarse_scan(const ParamManifold& m, const Vec& x) {
  const int n = m.dim();
  const int amb = m.ambient();
  const auto set = m.samples(coarse_level(n));
  const int per = set->per_side;
  Coarse c;
  c.min_dist = std::numeric_limits<double>::infinity();
  auto gap = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (int k = 0; k < amb; ++k) s += std::pow(set->point(a)[k] - set->point(b)[k], 2);
    return std::sqrt(s);
  };
  for (std::size_t i = 0; i < set->size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < amb; ++k) s += std::pow(set->point(i)[k] - x[k], 2);
    c.min_dist = std::min(c.min_dist, std::sqrt(s));
  }
  if (n == 1) {
    for (int i = 0; i < per; ++i) {
      const double g = gap(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % per));
      c.spacing = std::max(c.spacing, g);
      c.length += g;
    }
  } else {
    auto at = [per](int i, int j) {
      return static_cast<std::size_t>(((i % per) + per) % per) * static_cast<std::size_t>(per) +
             static_cast<std::size_t>(((j % per) + per) % per);
    };
    for (int i = 0; i < per; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (int j = 0; j < per; ++j) {
        const double a = gap(at(i, j), at(i, j + 1));
        const double b = gap(at(j, i), at(j + 1, i));
        c.spacing = std::max({c.spacing, a, b});
        row += a;
        col += b;
      }
      c.length = std::max({c.length, row, col});
    }
  }
  return c;
}

// Secant image sample used for pole selection: uniform chart samples plus,
// when x is close to M, a local cluster around the nearest point c(w0). Near
// c(w0) the secant direction turns through half a circle over arc lengths of
// order dist, so the cluster is placed at arc offsets dist * tan(theta) with
// theta uniform, which keeps its angular spacing fixed however close x is.
std::vector<Vec> secant_sample(const ParamManifold& m, const Vec& x, const Coarse& c) {
  const int n = m.dim();
  const auto set = m.samples(coarse_level(n));
  std::vector<Vec> out;
  out.reserve(set->size() + 256);
  Vec y(m.ambient());
  for (std::size_t i = 0; i < set->size(); ++i) {
    for (int k = 0; k < m.ambient(); ++k) y[k] = set->point(i)[k];
    out.push_back(secant(x, y));
  }
  if (c.min_dist < 2.0 * c.spacing) {
    const NearestPoint np = nearest_point(m, x);
    const double dist = std::max(np.distance, 1e-300);
    const Mat t = m.tangents(np.w);
    constexpr int kFan = 64;
    auto offset = [&](int k) { return dist * std::tan(std::numbers::pi * ((k + 0.5) / kFan - 0.5)); };
    if (n == 1) {
      const double speed = t.col(0).norm();
      for (int k = 0; k < kFan; ++k) out.push_back(secant(x, m.point({np.w[0] + offset(k) / speed, 0.0})));
    } else {
      // Arc offsets along eight directions of the tangent plane, mapped back
      // to parameters through the metric.
      const Eigen::Matrix2d g = (t.transpose() * t).topLeftCorner<2, 2>();
      const Eigen::Matrix2d gi = g.inverse();
      for (int dir = 0; dir < 8; ++dir) {
        const double a = std::numbers::pi * dir / 8.0;
        Eigen::Vector2d v = gi * Eigen::Vector2d(std::cos(a), std::sin(a));
        v /= std::sqrt(v.dot(g * v));
        for (int k = 0; k < kFan / 2; ++k) {
          const double o = offset(2 * k);
          out.push_back(secant(x, m.point({np.w[0] + o * v[0], np.w[1] + o * v[1]})));
        }
      }
    }
  }
  return out;
}

struct Ranked {
  int index;
  double margin;
};

std::vector<Ranked> rank_poles(const ParamManifold& m, const Vec& x, const Coarse& c) {
  const std::vector<Vec> secants = secant_sample(m, x, c);
  const auto& cands = candidate_poles(m.ambient());
  std::vector<Ranked> out;
  out.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double worst = -1.0;
    for (const Vec& s : secants) worst = std::max(worst, s.dot(cands[i]));
    out.push_back({static_cast<int>(i), worst});
  }
  std::stable_sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) { return a.margin < b.margin; });
  return out;
}

struct Integral {
  double value = 0.0;
  double grad[kMaxAmbient] = {};
  double max_u = -1.0;
  double abs_value = 0.0;  // sum of |terms|, for the roundoff floor
  std::int64_t samples = 0;
  double err = 0.0;
};

struct Rotation {
  double r[kMaxAmbient][kMaxAmbient] = {};
  double rx[kMaxAmbient] = {};
};

template <int N, bool Grad>
void accumulate(const SampleSet& set, const Rotation& rot, bool only_new, Integral& acc) {
  constexpr int A = N + 2;
  const LambdaFn& lam = lambda_fn(N);
  const int per = set.per_side;
  auto visit = [&](std::size_t idx) {
    const double* p = set.point(idx);
    const double* t = set.tangent(idx);
    double d[A];
    double tr[A * N];
    for (int a = 0; a < A; ++a) {
      double s = 0.0;
      for (int b = 0; b < A; ++b) s += rot.r[a][b] * p[b];
      d[a] = s - rot.rx[a];
      for (int c = 0; c < N; ++c) {
        double q = 0.0;
        for (int b = 0; b < A; ++b) q += rot.r[a][b] * t[c * A + b];
        tr[c * A + a] = q;
      }
    }
    double u = 0.0;
    if constexpr (Grad) {
      double g[A];
      detail::eta_grad_kernel<N>(lam, d, tr, g, u);
      for (int a = 0; a < A; ++a) acc.grad[a] += g[a];
    }
    const double v = detail::eta_kernel<N>(lam, d, tr, u);
    acc.value += v;
    acc.abs_value += std::abs(v);
    acc.max_u = std::max(acc.max_u, u);
  };
  if constexpr (N == 1) {
    const int step = only_new ? 2 : 1;
    for (int i = only_new ? 1 : 0; i < per; i += step) visit(static_cast<std::size_t>(i));
  } else {
    for (int i = 0; i < per; ++i) {
      const bool row_new = (i % 2) == 1;
      const int j0 = (only_new && !row_new) ? 1 : 0;
      const int step = (only_new && !row_new) ? 2 : 1;
      for (int j = j0; j < per; j += step) {
        visit(static_cast<std::size_t>(i) * static_cast<std::size_t>(per) + static_cast<std::size_t>(j));
      }
    }
  }
}

template <bool Grad>
void accumulate_dispatch(int n, const SampleSet& set, const Rotation& rot, bool only_new, Integral& acc) {
  if (n == 1) {
    accumulate<1, Grad>(set, rot, only_new, acc);
  } else {
    accumulate<2, Grad>(set, rot, only_new, acc);
  }
}

int ceil_log2(double v) {
  if (!(v > 1.0)) return 0;
  return static_cast<int>(std::ceil(std::log2(v)));
}

// Periodic trapezoid rule with doubling until successive values agree to tol.
// grad_tol <= 0 skips the gradient; otherwise it bounds the change of the
// gradient relative to max(1, |grad|). Close to M the differences y - x lose
// about log10((|x| + R) / dist) digits, so both targets are floored at that
// cancellation level; err reports max(last change, floor).
Integral integrate(const ParamManifold& m, const Vec& x, const PoleFrame& pole, double tol, double grad_tol,
                   const Coarse& c, double dist) {
  const bool want_grad = grad_tol > 0.0;
  const int n = m.dim();
  const int amb = m.ambient();
  const int cap = kMaxQuadratureLog2 / n;
  int level = std::max(n == 1 ? 8 : 6, ceil_log2(4.0 * c.length / std::max(dist, 1e-300)));
  if (level >= cap) throw ConvergenceError("phi: point too close to M for the quadrature cap (2^20 samples)");

  Rotation rot;
  for (int a = 0; a < amb; ++a) {
    for (int b = 0; b < amb; ++b) rot.r[a][b] = pole.rotation(a, b);
  }
  for (int a = 0; a < amb; ++a) {
    double s = 0.0;
    for (int b = 0; b < amb; ++b) s += rot.r[a][b] * x[b];
    rot.rx[a] = s;
  }
  const double norm = 1.0 / sphere_area(n + 1);
  const double cond = 1.0 + (x.norm() + m.bounding_radius()) / dist;
  const double rel_floor = kRoundoffFactor * std::numeric_limits<double>::epsilon() * cond;

  Integral sum;
  auto run = [&](int lvl, bool only_new) {
    const auto set = m.samples(lvl);
    if (want_grad) {
      accumulate_dispatch<true>(n, *set, rot, only_new, sum);
    } else {
      accumulate_dispatch<false>(n, *set, rot, only_new, sum);
    }
    return static_cast<std::int64_t>(set->size());
  };
  auto scaled = [&](std::int64_t count, double raw) { return raw * norm / static_cast<double>(count); };

  // A sample past the margin means pole selection missed part of the secant
  // image; the caller moves on to the next candidate.
  auto abandoned = [&] {
    Integral out;
    out.max_u = sum.max_u;
    return out;
  };
  std::int64_t count = run(level, false);
  if (sum.max_u > kMarginThreshold) return abandoned();
  double prev = scaled(count, sum.value);
  double prev_grad[kMaxAmbient] = {};
  for (int a = 0; a < amb; ++a) prev_grad[a] = scaled(count, sum.grad[a]);

  while (true) {
    ++level;
    count = run(level, true);
    if (sum.max_u > kMarginThreshold) return abandoned();
    const double cur = scaled(count, sum.value);
    const double floor = rel_floor * scaled(count, sum.abs_value);
    double diff = std::abs(cur - prev);
    bool converged = diff < std::max(tol, floor);
    if (want_grad) {
      double gmax = 0.0;
      double gdiff = 0.0;
      for (int a = 0; a < amb; ++a) {
        const double g = scaled(count, sum.grad[a]);
        gmax = std::max(gmax, std::abs(g));
        gdiff = std::max(gdiff, std::abs(g - prev_grad[a]));
        prev_grad[a] = g;
      }
      converged = converged && gdiff < std::max(grad_tol * std::max(1.0, gmax), rel_floor * gmax);
    }
    prev = cur;
    if (converged) {
      Integral out;
      out.value = cur;
      for (int a = 0; a < amb; ++a) out.grad[a] = prev_grad[a];
      out.max_u = sum.max_u;
      out.samples = count;
      out.err = std::max(diff, floor);
      return out;
    }
    if (level >= cap) {
      throw ConvergenceError("phi: quadrature did not reach tol " + num(tol) + " with 2^20 samples (distance to M " +
                             num(dist) + ", last change " + num(diff) + ", noise floor " + num(floor) + ")");
    }
  }
}

void check_proximity(const ParamManifold& m, double dist) {
  if (dist < kProximityFloor * m.diameter()) {
    throw ProximityError("phi: point lies within " + num(dist) + " of M (floor " +
                         num(kProximityFloor * m.diameter()) + ")");
  }
}

void check_point(const ParamManifold& m, const Vec& x) {
  if (x.size() != m.ambient()) throw DomainError("phi: point dimension does not match the ambient space");
  if (!x.allFinite()) throw DomainError("phi: non-finite point");
}

double exact_distance(const ParamManifold& m, const Vec& x, const Coarse& c) {
  if (c.min_dist < 4.0 * c.spacing) return nearest_point(m, x).distance;
  return c.min_dist;
}

PhiAndGrad evaluate(const ParamManifold& m, const Vec& x, double tol, double grad_tol) {
  const bool want_grad = grad_tol > 0.0;
  check_point(m, x);
  if (!(tol > 0.0)) throw DomainError("phi: tolerance must be positive");
  const Coarse c = coarse_scan(m, x);
  const double dist = exact_distance(m, x, c);
  check_proximity(m, dist);
  const std::vector<Ranked> ranked = rank_poles(m, x, c);
  const auto& cands = candidate_poles(m.ambient());
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts && attempt < static_cast<int>(ranked.size()); ++attempt) {
    const Ranked& r = ranked[static_cast<std::size_t>(attempt)];
    if (r.margin > kMarginThreshold) break;
    PoleFrame pole = make_pole_frame(cands[static_cast<std::size_t>(r.index)]);
    pole.candidate = r.index;
    const Integral in = integrate(m, x, pole, tol, grad_tol, c, dist);
    if (in.max_u > kMarginThreshold) continue;  // sampling missed part of the secant image
    pole.margin = std::max(r.margin, in.max_u);
    PhiAndGrad out;
    out.value.raw = in.value;
    out.value.angle = Angle(in.value);
    out.value.pole = pole;
    out.value.n_samples = in.samples;
    out.value.err_estimate = in.err;
    if (want_grad) {
      Vec g(m.ambient());
      for (int a = 0; a < m.ambient(); ++a) g[a] = in.grad[a];
      out.grad = pole.rotation.transpose() * g;
    }
    return out;
  }
  throw PoleNotFoundError("select_pole: no candidate direction clears the margin " +
                          std::to_string(kMarginThreshold));
}

}  // namespace

double distance_to(const ParamManifold& m, const Vec& x) {
  check_point(m, x);
  return exact_distance(m, x, coarse_scan(m, x));
}

PoleFrame select_pole(const ParamManifold& m, const Vec& x) {
  check_point(m, x);
  const Coarse c = coarse_scan(m, x);
  if (exact_distance(m, x, c) < 1e-9) throw ProximityError("select_pole: point lies on M");
  const std::vector<Ranked> ranked = rank_poles(m, x, c);
  const Ranked& best = ranked.front();
  if (best.margin > kMarginThreshold) {
    throw PoleNotFoundError("select_pole: best candidate margin " + num(best.margin) + " exceeds " +
                            std::to_string(kMarginThreshold));
  }
  PoleFrame f = make_pole_frame(candidate_poles(m.ambient())[static_cast<std::size_t>(best.index)]);
  f.margin = best.margin;
  f.candidate = best.index;
  return f;
}

PhiValue phi(const ParamManifold& m, const Vec& x, double tol) { return evaluate(m, x, tol, 0.0).value; }

PhiAndGrad phi_and_grad(const ParamManifold& m, const Vec& x, double tol) { return evaluate(m, x, tol, tol); }

PhiAndGrad phi_and_grad(const ParamManifold& m, const Vec& x, double tol, double grad_tol) {
  if (!(grad_tol > 0.0)) throw DomainError("phi_and_grad: gradient tolerance must be positive");
  return evaluate(m, x, tol, grad_tol);
}

Vec grad_phi(const ParamManifold& m, const Vec& x, double tol) { return evaluate(m, x, tol, tol).grad; }

double phi_raw_with_pole(const ParamManifold& m, const Vec& x, const Vec& z, double tol) {
  check_point(m, x);
  if (z.size() != m.ambient()) throw DomainError("phi_raw_with_pole: pole dimension mismatch");
  const Coarse c = coarse_scan(m, x);
  const double dist = exact_distance(m, x, c);
  check_proximity(m, dist);
  const PoleFrame pole = make_pole_frame(z);
  const Integral in = integrate(m, x, pole, tol, 0.0, c, dist);
  if (in.max_u > kMarginThreshold) {
    throw PoleNotFoundError("phi_raw_with_pole: pole within the secant image margin");
  }
  return in.value;
}

}  // namespace solidangle
