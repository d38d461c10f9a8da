#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "solidangle/errors.hpp"
#include "solidangle/potential.hpp"

using namespace solidangle;
using solidangle::testing::disk_solid_angle_fraction;
using solidangle::testing::richardson;

namespace {

const auto kCircle = std::make_shared<Circle>();
const auto kTrefoil = std::make_shared<TorusKnot>(2, 3, 2.0, 0.5);
const auto kTorus = std::make_shared<FlatTorus4>(2.0, 0.5);

}  // namespace

TEST(Potential, CircleMatchesDiskQuadrature) {
  // Phi is minus the disk's solid angle over 4 pi.
  const double pts[][2] = {{0.0, 0.3}, {0.5, 0.2}, {0.9, -0.1}, {1.2, 0.05}, {2.0, -1.5}, {0.3, -2.0}, {3.0, 3.0}};
  for (const auto& p : pts) {
    const Angle ref(-disk_solid_angle_fraction(p[0], p[1]));
    const double th = 0.7;
    const Vec x = make_vec({p[0] * std::cos(th), p[0] * std::sin(th), p[1]});
    EXPECT_LE(mod_distance(phi(*kCircle, x).angle, ref), 1e-9) << p[0] << ' ' << p[1];
  }
}

TEST(Potential, CircleInPlaneValues) {
  for (double r : {0.0, 0.2, 0.8, 0.97}) {
    EXPECT_LE(mod_distance(phi(*kCircle, make_vec({r, 0, 0})).angle, Angle(0.5)), 1e-9) << r;
  }
  for (double r : {1.03, 1.5, 4.0}) {
    EXPECT_LE(mod_distance(phi(*kCircle, make_vec({0, r, 0})).angle, Angle(0.0)), 1e-9) << r;
  }
}

TEST(Potential, FlatTorusHyperplaneValues) {
  // In x4 = 0 the fibre Phi = 1/2 is the solid torus bounded by M.
  EXPECT_LE(mod_distance(phi(*kTorus, make_vec({2.0, 0, 0, 0})).angle, Angle(0.5)), 1e-9);
  EXPECT_LE(mod_distance(phi(*kTorus, make_vec({0, -2.2, 0.1, 0})).angle, Angle(0.5)), 1e-9);
  EXPECT_LE(mod_distance(phi(*kTorus, make_vec({0.0, 0, 0, 0})).angle, Angle(0.0)), 1e-9);
  EXPECT_LE(mod_distance(phi(*kTorus, make_vec({4.0, 1.0, 0, 0})).angle, Angle(0.0)), 1e-9);
}

TEST(Potential, ReversingOrientationNegates) {
  const auto rev = std::make_shared<ReversedManifold>(kTrefoil);
  for (const Vec& x : {make_vec({0.3, 0.2, 0.1}), make_vec({2.0, -1.0, 0.8}), make_vec({-0.5, 3.0, -1.0})}) {
    EXPECT_LE(mod_distance(phi(*rev, x).angle, -phi(*kTrefoil, x).angle), 1e-9);
  }
}

TEST(Potential, InvariantUnderOrientationPreservingSimilarities) {
  Mat rot(3, 3);
  const double c = std::cos(0.4), s = std::sin(0.4);
  rot << c, 0, s, 0, 1, 0, -s, 0, c;
  const Vec shift = make_vec({0.5, -1.0, 2.0});
  const double scale = 1.7;
  const auto moved = std::make_shared<TransformedManifold>(kTrefoil, rot, shift, scale);
  for (const Vec& x : {make_vec({0.3, 0.2, 0.1}), make_vec({2.0, -1.0, 0.8})}) {
    const Vec y = scale * rot * x + shift;
    EXPECT_LE(mod_distance(phi(*moved, y).angle, phi(*kTrefoil, x).angle), 1e-9);
    const Vec g = grad_phi(*moved, y);
    EXPECT_LE((g - rot * grad_phi(*kTrefoil, x) / scale).norm(), 1e-7);
  }
}

TEST(Potential, PoleIndependence) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Vec x = make_vec({0.4, -0.3, 0.6});
  const PhiValue ref = phi(*kTrefoil, x);
  int used = 0;
  for (int trial = 0; trial < 40 && used < 8; ++trial) {
    Vec z = make_vec({g(rng), g(rng), g(rng)});
    z.normalize();
    double raw = 0.0;
    try {
      raw = phi_raw_with_pole(*kTrefoil, x, z);
    } catch (const PoleNotFoundError&) {
      continue;
    }
    const double k = raw - ref.raw;
    EXPECT_NEAR(k, std::round(k), 1e-8);
    ++used;
  }
  EXPECT_GE(used, 4);
}

TEST(Potential, GradientMatchesRichardson) {
  struct Case {
    ManifoldPtr m;
    Vec x;
  };
  const std::vector<Case> cases{{kCircle, make_vec({0.3, 0.4, 0.5})},
                                {kCircle, make_vec({1.1, 0.0, 0.05})},
                                {kTrefoil, make_vec({0.5, 1.0, -0.3})},
                                {kTorus, make_vec({1.0, 0.5, 0.2, 0.3})}};
  for (const auto& c : cases) {
    const Vec g = grad_phi(*c.m, c.x);
    const double ref = phi(*c.m, c.x).angle.value();
    for (int a = 0; a < c.x.size(); ++a) {
      const double fd = richardson(
          [&](double h) {
            Vec y = c.x;
            y[a] += h;
            return ref + angdiff(phi(*c.m, y).angle.value(), ref);
          },
          1e-3);
      EXPECT_NEAR(g[a], fd, 1e-6 * std::max(1.0, g.norm())) << c.m->kind() << ' ' << a;
    }
  }
}

TEST(Potential, SeparateGradientToleranceKeepsTheValue) {
  const Vec x = make_vec({1.0005, 0.0, 0.0003});
  const PhiAndGrad a = phi_and_grad(*kCircle, x, 1e-12, 1e-6);
  const PhiAndGrad b = phi_and_grad(*kCircle, x, 1e-10);
  EXPECT_LE(mod_distance(a.value.angle, b.value.angle), 1e-9);
  EXPECT_LE((a.grad - b.grad).norm() / b.grad.norm(), 1e-5);
  EXPECT_THROW(phi_and_grad(*kCircle, x, 1e-10, 0.0), DomainError);
}

TEST(Potential, NearCurveReportsHonestError) {
  // Close to M the cancellation floor exceeds a 1e-14 request; the value
  // still converges and its error estimate says how far.
  const double r = 1.0 + 1e-4, z = 5e-5;
  const PhiValue v = phi(*kCircle, make_vec({r, 0.0, z}), 1e-14);
  EXPECT_GT(v.err_estimate, 0.0);
  EXPECT_LE(v.err_estimate, 1e-9);
  EXPECT_LE(mod_distance(v.angle, Angle(-disk_solid_angle_fraction(r, z))), std::max(1e-9, 10.0 * v.err_estimate));
}

TEST(Potential, SelectedPoleClearsTheMargin) {
  for (const Vec& x : {make_vec({0.0, 0.0, 0.0}), make_vec({1.0, 0.0, 0.01}), make_vec({5.0, 5.0, 5.0})}) {
    const PoleFrame p = select_pole(*kCircle, x);
    EXPECT_LE(p.margin, kMarginThreshold);
    EXPECT_NEAR(p.z.norm(), 1.0, 1e-14);
  }
}

TEST(Potential, DistanceTo) {
  EXPECT_NEAR(distance_to(*kCircle, make_vec({1.0, 0.0, 0.3})), 0.3, 1e-12);
  EXPECT_NEAR(distance_to(*kCircle, make_vec({0.0, 0.0, 0.0})), 1.0, 1e-12);
  EXPECT_NEAR(distance_to(*kTorus, make_vec({2.0, 0.0, 0.0, 0.1})), std::hypot(0.5, 0.1), 1e-10);
}

TEST(Potential, Errors) {
  EXPECT_THROW(phi(*kCircle, make_vec({1.0, 0.0, 0.0})), ProximityError);
  EXPECT_THROW(phi(*kCircle, make_vec({1.0, 0.0})), DomainError);
  EXPECT_THROW(phi(*kCircle, make_vec({0.2, 0.0, 0.0}), 0.0), DomainError);
  EXPECT_THROW(phi(*kCircle, make_vec({NAN, 0.0, 0.0})), DomainError);
}
