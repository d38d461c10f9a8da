// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "solidangle/collar.hpp"
#include "solidangle/elliptic.hpp"
#include "solidangle/errors.hpp"
#include "solidangle/frame.hpp"
#include "solidangle/lambda.hpp"
#include "solidangle/oracles.hpp"
#include "solidangle/potential.hpp"
#include "solidangle/reports.hpp"
#include "solidangle/seifert_mesh.hpp"

using namespace solidangle;
namespace el = solidangle::elliptic;
using solidangle::testing::gk;
using solidangle::testing::kPi;
using solidangle::testing::ts;

namespace {

// Pinned tolerances.
constexpr double kOracleBound = 1e-8;
constexpr double kInPlaneBound = 1e-9;
constexpr double kPaxtonBound = 1e-10;
constexpr double kPoleBound = 1e-7;
constexpr double kGradRelBound = 1e-5;
constexpr double kNearLimitBound = 0.01;
constexpr double kDepsRelBound = 1e-4;
constexpr double kDlambdaBound = 0.01;
constexpr double kDecaySlope1 = -2.0, kDecayBand1 = 0.1;
constexpr double kDecaySlope2 = -3.0, kDecayBand2 = 0.2;
constexpr double kEulerSlope1 = -3.0, kEulerBand1 = 0.2;
constexpr double kOdeBound = 1e-10;
constexpr double kLambda1Bound = 1e-12;
constexpr double kLambda3Bound = 1e-10;
constexpr double kEllipticBound = 1e-10;
constexpr double kEllipticFdBound = 1e-6;
constexpr double kLogAsymptoteBound = 1e-6;
constexpr double kMeshBound = 1e-6;
constexpr double kHausdorffSpacings = 2.0;
constexpr double kResidualBound = 1e-3;
constexpr double kCollarAreaChange = 0.10;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const auto kCircle = std::make_shared<Circle>();
const auto kTrefoil = std::make_shared<TorusKnot>(2, 3, 2.0, 0.5);
const auto kTorus = std::make_shared<FlatTorus4>(2.0, 0.5);
// No symmetry, so the degree -(n+2) multipole survives. The centred circle and
// the trefoil lose it to symmetry and decay one order faster.
const auto kGeneric = std::make_shared<SplineCurve>(
    std::vector<Vec3>{{1, 0, 0}, {0, 1, 0.3}, {-1, 0, 0}, {0, -1, -0.3}, {0.7, -0.7, 0}});

int g_failed = 0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void report(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    std::tie(ok, detail) = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  g_failed += ok ? 0 : 1;
  std::printf("%s %2d %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
}

Vec cyl(double r, double z, double th = 0.0) { return make_vec({r * std::cos(th), r * std::sin(th), z}); }

// ---------------------------------------------------------------------------

std::pair<bool, std::string> circle_oracle() {
  double worst = 0.0;
  for (const auto& p : cli::oracle_sample(1, 500)) {
    const Vec x = make_vec({p[0], p[1], p[2]});
    worst = std::max(worst, mod_distance(phi(*kCircle, x, 1e-10).angle, oracles::circle_phi(oracles::to_cylindrical(x))));
  }
  return {worst <= kOracleBound, "max mod-distance " + num(worst) + " <= " + num(kOracleBound)};
}

std::pair<bool, std::string> in_plane_values() {
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) worst = std::max(worst, mod_distance(phi(*kCircle, cyl(0.1 * i, 0)).angle, Angle(0.5)));
  for (int i = 11; i <= 50; ++i) worst = std::max(worst, mod_distance(phi(*kCircle, cyl(0.1 * i, 0)).angle, Angle(0.0)));
  return {worst <= kInPlaneBound, "max mod-distance " + num(worst) + " <= " + num(kInPlaneBound)};
}

std::pair<bool, std::string> paxton() {
  double worst = 0.0;
  int used = 0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double r = 3.0 * (i + 0.5) / 200.0;
      const double z = -2.0 + 4.0 * (j + 0.5) / 200.0;
      if (std::hypot(r - 1.0, z) < 1e-3) continue;
      worst = std::max(worst, mod_distance(oracles::circle_phi({r, z}), oracles::circle_phi_paxton({r, z})));
      ++used;
    }
  }
  return {worst <= kPaxtonBound, std::to_string(used) + " points, max " + num(worst) + " <= " + num(kPaxtonBound)};
}

std::pair<bool, std::string> pole_independence() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int redraws = 0;
  for (const ManifoldPtr& m : {ManifoldPtr(kCircle), ManifoldPtr(kTrefoil)}) {
    const double box = m->bounding_radius() + 1.0;
    for (int n = 0; n < 100;) {
      const Vec x = make_vec({box * u(rng), box * u(rng), box * u(rng)});
      if (distance_to(*m, x) < 0.05) continue;
      double raw[2];
      bool ok = true;
      for (double& r : raw) {
        Vec z = make_vec({g(rng), g(rng), g(rng)});
        z.normalize();
        try {
          r = phi_raw_with_pole(*m, x, z);
        } catch (const PoleNotFoundError&) {
          ok = false;
        }
      }
      if (!ok) {
        ++redraws;
        continue;
      }
      const double d = raw[0] - raw[1];
      worst = std::max(worst, std::abs(d - std::round(d)));
      ++n;
    }
  }
  return {worst <= kPoleBound,
          "200 triples, max |raw1 - raw2 - k| " + num(worst) + " <= " + num(kPoleBound) + " (" +
              std::to_string(redraws) + " pole redraws)"};
}

std::pair<bool, std::string> gradients() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (const ManifoldPtr& m : {ManifoldPtr(kCircle), ManifoldPtr(kTrefoil)}) {
    const double box = m->bounding_radius() + 0.5;
    for (int n = 0; n < 100;) {
      const Vec x = make_vec({box * u(rng), box * u(rng), box * u(rng)});
      const double dist = distance_to(*m, x);
      if (dist < 0.1) continue;
      const Vec grad = grad_phi(*m, x, 1e-12);
      const double base = phi(*m, x, 1e-12).angle.value();
      const double h = 0.01 * dist;
      Vec fd(3);
      for (int a = 0; a < 3; ++a) {
        fd[a] = solidangle::testing::richardson(
            [&](double s) {
              Vec y = x;
              y[a] += s;
              return angdiff(phi(*m, y, 1e-12).angle.value(), base);
            },
            h);
      }
      worst = std::max(worst, (grad - fd).norm() / grad.norm());
      ++n;
    }
  }
  return {worst <= kGradRelBound, "200 points, max relative error " + num(worst) + " <= " + num(kGradRelBound)};
}

double meridian_phi(double eps, double lambda, double tol) {
  return phi(*kCircle, cyl(1.0 + eps * std::cos(kTwoPi * lambda), eps * std::sin(kTwoPi * lambda)), tol)
      .angle.value();
}

std::pair<bool, std::string> near_curve() {
  double a = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double lambda = k / 64.0;
    a = std::max(a, mod_distance(meridian_phi(1e-4, lambda, 1e-10), -lambda));
  }
  double b = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double eps = 1e-3 * std::pow(300.0, i / 7.0);
    for (double lambda : {0.05, 0.2, 0.45, 0.7, 0.9}) {
      const double base = meridian_phi(eps, lambda, 1e-13);
      const double fd = solidangle::testing::richardson(
          [&](double s) { return angdiff(meridian_phi(eps + s, lambda, 1e-13), base); }, 0.02 * eps);
      const double cf = oracles::circle_dphi_deps(eps, lambda);
      b = std::max(b, std::abs(fd - cf) / std::abs(cf));
    }
  }
  double c = 0.0;
  for (int k = 0; k < 64; ++k) c = std::max(c, std::abs(oracles::circle_dphi_dlambda(1e-5, k / 64.0) + 1.0));
  const bool ok = a <= kNearLimitBound && b <= kDepsRelBound && c <= kDlambdaBound;
  return {ok, "(a) " + num(a) + " <= " + num(kNearLimitBound) + "; (b) " + num(b) + " <= " + num(kDepsRelBound) +
                  "; (c) " + num(c) + " <= " + num(kDlambdaBound)};
}

std::pair<bool, std::string> winding() {
  std::string detail;
  bool ok = true;
  int sign = 0;
  for (const ManifoldPtr& m : {ManifoldPtr(kCircle), ManifoldPtr(kTrefoil), ManifoldPtr(kTorus)}) {
    const NormalFrame frame(m);
    // |dPhi/dphi - eps| < 1/2 bounds each step by 1.5/16 turn, far below the
    // half turn at which lifting becomes ambiguous.
    const auto rows = winding_report(frame, 32, 0.5 * tube_radius(*m), 16);
    int lo = rows.front().winding, hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.winding);
      hi = std::max(hi, r.winding);
    }
    const bool good = lo == hi && std::abs(lo) == 1 && (sign == 0 || lo == sign);
    if (sign == 0) sign = lo;
    ok = ok && good;
    detail += m->kind() + " " + std::to_string(rows.size()) + " base points in [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]; ";
  }
  return {ok, detail};
}

std::vector<double> far_radii() {
  std::vector<double> r;
  for (int k = 0; k < 8; ++k) r.push_back(10.0 * std::pow(10.0, k / 7.0));
  return r;
}

std::pair<bool, std::string> decay() {
  const auto radii = far_radii();
  const double s1 = decay_report(*kCircle, radii).slope;
  const double s2 = decay_report(*kTorus, radii).slope;
  const double e1 = euler_report(*kGeneric, radii).slope;
  const double e0 = euler_report(*kCircle, radii).slope;
  const double e3 = euler_report(*kTrefoil, radii).slope;
  const bool ok = std::abs(s1 - kDecaySlope1) <= kDecayBand1 && std::abs(s2 - kDecaySlope2) <= kDecayBand2 &&
                  std::abs(e1 - kEulerSlope1) <= kEulerBand1;
  return {ok, "circle decay " + num(s1) + ", flat torus decay " + num(s2) + ", asymmetric spline Euler residual " +
                  num(e1) + " (symmetric: centred circle " + num(e0) + ", trefoil " + num(e3) + ", informational)"};
}

std::pair<bool, std::string> lambda_fn_checks() {
  double ode = 0.0, one = 0.0, three = 0.0;
  std::vector<double> us{-1.0 + 1e-6};
  for (int i = 0; i <= 2000; ++i) us.push_back(-1.0 + 1e-6 + (1.95 - 1e-6) * i / 2000.0);
  for (int n = 1; n <= 6; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    for (double u : us) {
      const double res = (1 - u * u) * lambda_deriv(n, u, 1) - (n + 1) * u * lambda_eval(n, u) - sign;
      ode = std::max(ode, std::abs(res));
    }
  }
  for (double u : us) {
    one = std::max(one, std::abs(lambda_eval(1, u) - 1.0 / (u - 1.0)));
    three = std::max(three, std::abs(lambda_eval(3, u) - (u - 2.0) / (3.0 * (u - 1.0) * (u - 1.0))));
  }
  const bool ok = ode <= kOdeBound && one <= kLambda1Bound && three <= kLambda3Bound;
  return {ok, "ODE residual " + num(ode) + ", n=1 " + num(one) + ", corrected n=3 " + num(three)};
}

std::pair<bool, std::string> elliptic_checks() {
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  constexpr double inf = std::numeric_limits<double>::infinity();
  double q = 0.0;
  for (double k : {0.0, 0.2, 0.6, 0.9, 0.99, 0.9999}) {
    const double k2 = k * k;
    auto F = [&](double ph) { return ts([&](double t) { return 1.0 / std::sqrt(1 - k2 * std::sin(t) * std::sin(t)); }, 0.0, ph); };
    auto E = [&](double ph) { return gk([&](double t) { return std::sqrt(1 - k2 * std::sin(t) * std::sin(t)); }, 0.0, ph); };
    for (double ph : {0.3, 1.0, 1.5}) {
      q = std::max(q, rel(el::ellF(ph, k), F(ph)));
      q = std::max(q, rel(el::ellE_inc(ph, k), E(ph)));
    }
    q = std::max(q, rel(el::ellK(k), F(kPi / 2)));
    q = std::max(q, rel(el::ellE(k), E(kPi / 2)));
    for (double a2 : {-1.0, 0.3, 0.9}) {
      const double pi = ts([&](double t) {
        const double s2 = std::sin(t) * std::sin(t);
        return 1.0 / ((1 - a2 * s2) * std::sqrt(1 - k2 * s2));
      }, 0.0, kPi / 2);
      q = std::max(q, rel(el::ellPi(a2, k), pi));
    }
    if (k > 0.0 && k < 0.999) {
      const double kp = std::sqrt(1 - k2);
      auto Fp = [&](double ph) { return ts([&](double t) { return 1.0 / std::sqrt(1 - kp * kp * std::sin(t) * std::sin(t)); }, 0.0, ph); };
      auto Ep = [&](double ph) { return gk([&](double t) { return std::sqrt(1 - kp * kp * std::sin(t) * std::sin(t)); }, 0.0, ph); };
      for (double beta : {0.2, 0.8, 1.4}) {
        const double def = 2.0 / kPi * (E(kPi / 2) * Fp(beta) + F(kPi / 2) * Ep(beta) - F(kPi / 2) * Fp(beta));
        q = std::max(q, std::abs(el::heuman_lambda0(beta, k) - def));
      }
    }
  }
  const double xs[][4] = {{0.5, 1.0, 2.0, 0.7}, {1e-2, 1.0, 3.0, 4.0}, {0.0, 2.0, 5.0, 1.0}};
  for (const auto& x : xs) {
    auto rf = [&](double t) { return 1.0 / std::sqrt((t + x[0]) * (t + x[1]) * (t + x[2])); };
    q = std::max(q, rel(el::carlson_rf(x[0], x[1], x[2]), 0.5 * ts(rf, 0.0, inf)));
    q = std::max(q, rel(el::carlson_rd(x[0], x[1], x[2]), 1.5 * ts([&](double t) { return rf(t) / (t + x[2]); }, 0.0, inf)));
    q = std::max(q, rel(el::carlson_rj(x[0], x[1], x[2], x[3]), 1.5 * ts([&](double t) { return rf(t) / (t + x[3]); }, 0.0, inf)));
    q = std::max(q, rel(el::carlson_rc(x[1], x[3]),
                        0.5 * ts([&](double t) { return 1.0 / ((t + x[3]) * std::sqrt(t + x[1])); }, 0.0, inf)));
  }
  double fd = 0.0;
  const double h = 1e-5;
  for (double k : {0.1, 0.5, 0.8, 0.95}) {
    auto cmp = [&](double analytic, double numeric) { fd = std::max(fd, std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric))); };
    cmp(el::dK_dk(k), (el::ellK(k + h) - el::ellK(k - h)) / (2 * h));
    cmp(el::dE_dk(k), (el::ellE(k + h) - el::ellE(k - h)) / (2 * h));
    for (double beta : {0.3, 1.1}) {
      cmp(el::dLambda0_dk(beta, k), (el::heuman_lambda0(beta, k + h) - el::heuman_lambda0(beta, k - h)) / (2 * h));
      cmp(el::dLambda0_dbeta(beta, k), (el::heuman_lambda0(beta + h, k) - el::heuman_lambda0(beta - h, k)) / (2 * h));
    }
  }
  const double logk = std::abs(el::ellK(el::EllipticModulus::from_k_prime(1e-4)) - std::log(4.0 / 1e-4));
  const bool ok = q <= kEllipticBound && fd <= kEllipticFdBound && logk <= kLogAsymptoteBound;
  return {ok, "quadrature " + num(q) + ", derivatives " + num(fd) + ", |K - ln(4/k')| " + num(logk)};
}

std::pair<bool, std::string> seifert_mesh_checks() {
  const SeifertMesh flat = disk_mesh();
  double axis = 0.0;
  for (double z : {-4.0, -1.0, -0.25, 0.1, 0.5, 2.0, 8.0}) {
    const double classical = -0.5 * (std::copysign(1.0, z) - z / std::hypot(1.0, z));
    axis = std::max(axis, std::abs(phi_via_seifert_mesh(flat, make_vec({0, 0, z})) - classical));
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double vs_phi = 0.0;
  for (int n = 0; n < 50;) {
    const Vec x = make_vec({u(rng), u(rng), u(rng)});
    if (distance_to(*kCircle, x) < 0.05 || std::abs(x[2]) < 0.05) continue;
    vs_phi = std::max(vs_phi, mod_distance(Angle(phi_via_seifert_mesh(flat, x)), phi(*kCircle, x).angle));
    ++n;
  }
  const SeifertMesh bump = disk_mesh(64, 8192, 0.6);
  double integer = 0.0;
  for (const Vec& x : {make_vec({0, 0, 0.3}), make_vec({0.2, -0.1, 0.1}), make_vec({1.5, 0, 0.2}), make_vec({0, 0, -1})}) {
    const double d = phi_via_seifert_mesh(flat, x) - phi_via_seifert_mesh(bump, x);
    integer = std::max(integer, std::abs(d - std::round(d)));
  }
  const bool ok = axis <= kMeshBound && vs_phi <= kMeshBound && integer <= kMeshBound;
  return {ok, "axis " + num(axis) + ", vs phi (50 points) " + num(vs_phi) + ", two fillings " + num(integer)};
}

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double s = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

std::pair<bool, std::string> surface() {
  SurfaceOptions opt;
  opt.grid = 96;
  opt.rings = 8;
  opt.tol = kGridTol;
  opt.refine_check = true;
  const Angle t(0.25);
  const SurfaceResult r = seifert_surface(kTrefoil, t, opt);
  const MeshStats& s = r.stats;
  const auto loops = boundary_loops(r.mesh.triangles);

  // Hausdorff distance between the boundary polyline and the trefoil.
  double haus = 0.0;
  for (const auto& loop : loops) {
    for (int v : loop) haus = std::max(haus, distance_to(*kTrefoil, make_vec({r.mesh.vertices[v].x(), r.mesh.vertices[v].y(), r.mesh.vertices[v].z()})));
  }
  for (int j = 0; j < 4096; ++j) {
    const Vec c = kTrefoil->point({j / 4096.0, 0.0});
    const Vec3 p(c[0], c[1], c[2]);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& loop : loops) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        best = std::min(best, segment_distance(p, r.mesh.vertices[loop[i]], r.mesh.vertices[loop[(i + 1) % loop.size()]]));
      }
    }
    haus = std::max(haus, best);
  }

  // Residuals re-evaluated independently at every vertex off M.
  double resid = 0.0;
  for (std::size_t v = 0; v < r.mesh.vertices.size(); ++v) {
    if (r.mesh.vertex_tag[v] == Provenance::BoundaryOnM) continue;
    const Vec3& p = r.mesh.vertices[v];
    resid = std::max(resid, mod_distance(phi(*kTrefoil, make_vec({p.x(), p.y(), p.z()}), kGridTol).angle, t));
  }
  const double area_change = std::abs(r.collar_area_refined - s.collar_area) / s.collar_area;
  const bool ok = s.census.manifold() && loops.size() == 1 && s.boundary_on_m &&
                  haus <= kHausdorffSpacings * r.spacing && resid <= kResidualBound && s.min_grad_norm > 0.0 &&
                  area_change < kCollarAreaChange;
  return {ok, "manifold " + std::string(s.census.manifold() ? "yes" : "no") + ", boundary loops " +
                  std::to_string(loops.size()) + ", Hausdorff " + num(haus) + " <= " +
                  num(kHausdorffSpacings * r.spacing) + ", max residual " + num(resid) + ", min |grad| " +
                  num(s.min_grad_norm) + ", collar area change " + num(area_change) + " (" +
                  std::to_string(s.vertices) + " vertices, genus " + std::to_string(s.genus) + ", " +
                  std::to_string(s.components) + " component(s))"};
}

}  // namespace

int main() {
  report(1, "circle oracle equivalence", circle_oracle);
  report(2, "exact in-plane values", in_plane_values);
  report(3, "Paxton vs elliptic form", paxton);
  report(4, "pole independence", pole_independence);
  report(5, "gradient vs Richardson", gradients);
  report(6, "near-curve asymptotics", near_curve);
  report(7, "meridional winding", winding);
  report(8, "far-field decay", decay);
  report(9, "lambda function", lambda_fn_checks);
  report(10, "elliptic layer", elliptic_checks);
  report(11, "Seifert-mesh integral", seifert_mesh_checks);
  report(12, "surface extraction", surface);
  std::printf("%d of 12 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
