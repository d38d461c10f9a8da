#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "solidangle/errors.hpp"
#include "solidangle/forms.hpp"

using namespace solidangle;

namespace {

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = g(rng);
  return v / v.norm();
}

}  // namespace

TEST(Forms, PoleFrameIsSpecialOrthogonal) {
  std::mt19937_64 rng(3);
  for (int amb : {3, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vec z = random_unit(rng, amb);
      const PoleFrame f = make_pole_frame(z);
      const Mat id = Mat::Identity(amb, amb);
      EXPECT_LE((f.rotation * f.rotation.transpose() - id).norm(), 1e-14);
      EXPECT_NEAR(f.rotation.determinant(), 1.0, 1e-14);
      EXPECT_LE((f.rotation * z - unit_vec(amb, amb - 1)).norm(), 1e-14);
    }
    const PoleFrame e = make_pole_frame(unit_vec(amb, amb - 1));
    EXPECT_LE((e.rotation - Mat::Identity(amb, amb)).norm(), 1e-15);
  }
  EXPECT_THROW(make_pole_frame(Vec::Zero(3)), DomainError);
}

TEST(Forms, SphereAreas) {
  EXPECT_NEAR(sphere_area(1), 2 * M_PI, 1e-15);
  EXPECT_NEAR(sphere_area(2), 4 * M_PI, 1e-14);
  EXPECT_NEAR(sphere_area(3), 2 * M_PI * M_PI, 1e-14);
}

TEST(Forms, CandidatePolesAreUnitAndStartWithAxes) {
  for (int amb : {3, 4}) {
    const auto& c = candidate_poles(amb);
    EXPECT_EQ(c.size(), static_cast<std::size_t>(2 * amb + 64));
    for (const auto& z : c) EXPECT_NEAR(z.norm(), 1.0, 1e-14);
    EXPECT_LE((c[0] - unit_vec(amb, 0)).norm(), 1e-15);
  }
  EXPECT_THROW(candidate_poles(5), DomainError);
}

// d eta_z = omega on S^{n+1} \ {z}: the exterior derivative of the pullback in
// x, contracted appropriately, is checked indirectly by comparing the
// analytic x-gradient of the density against finite differences.
TEST(Forms, DensityGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int amb : {3, 4}) {
    const int n = amb - 2;
    const PoleFrame pole = make_pole_frame(random_unit(rng, amb));
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 15; ++trial) {
      Vec x(amb), y(amb);
      for (int i = 0; i < amb; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
      }
      if ((y - x).normalized().dot(pole.z) > 0.8) continue;
      Mat t(amb, n);
      for (int c = 0; c < n; ++c) t.col(c) = random_unit(rng, amb);
      const Vec g = eta_pullback_grad_density(pole, x, y, t);
      const double h = 1e-6;
      for (int a = 0; a < amb; ++a) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const double fd =
            (eta_pullback_density(pole, xp, y, t) - eta_pullback_density(pole, xm, y, t)) / (2 * h);
        EXPECT_NEAR(g[a], fd, 1e-6 * std::max(1.0, std::abs(fd)));
        EXPECT_NEAR(eta_pullback_grad_density(pole, x, y, t, a), g[a], 1e-15 * std::max(1.0, std::abs(g[a])));
      }
      ++checked;
    }
    EXPECT_GE(checked, 10);
  }
}

TEST(Forms, DensityIsTranslationInvariantAndOddInTangent) {
  const PoleFrame pole = make_pole_frame(make_vec({0.0, 0.0, 1.0}));
  const Vec x = make_vec({0.1, 0.2, 0.3}), y = make_vec({1.0, -0.5, 0.2});
  Mat t(3, 1);
  t.col(0) = make_vec({0.0, 1.0, 0.0});
  const Vec s = make_vec({5.0, -2.0, 1.0});
  EXPECT_NEAR(eta_pullback_density(pole, x, y, t), eta_pullback_density(pole, x + s, y + s, t), 1e-14);
  EXPECT_NEAR(eta_pullback_density(pole, x, y, -t), -eta_pullback_density(pole, x, y, t), 1e-15);
}

TEST(Forms, DensityGuards) {
  const PoleFrame pole = make_pole_frame(make_vec({0.0, 0.0, 1.0}));
  Mat t(3, 1);
  t.col(0) = make_vec({1.0, 0.0, 0.0});
  const Vec x = make_vec({0.0, 0.0, 0.0});
  EXPECT_THROW(eta_pullback_density(pole, x, x, t), ProximityError);
  EXPECT_THROW(eta_pullback_density(pole, x, make_vec({0.0, 0.0, 1.0}), t), PoleNotFoundError);
}

TEST(Forms, OmegaDensityIsTheSolidAngleKernel) {
  // det[d, t1, t2] / |d|^3 for a unit square patch at height 1 below x.
  Mat frame(3, 2);
  frame.col(0) = make_vec({1.0, 0.0, 0.0});
  frame.col(1) = make_vec({0.0, 1.0, 0.0});
  const Vec x = make_vec({0.0, 0.0, 1.0}), y = make_vec({0.0, 0.0, 0.0});
  EXPECT_NEAR(omega_pullback_density(x, y, frame), -1.0, 1e-15);
}
