#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "solidangle/angle.hpp"

using namespace solidangle;

TEST(Angle, WrapsIntoUnitInterval) {
  EXPECT_DOUBLE_EQ(wrap01(1.25), 0.25);
  EXPECT_DOUBLE_EQ(wrap01(-0.25), 0.75);
  EXPECT_EQ(wrap01(-1e-20), 0.0);
  EXPECT_DOUBLE_EQ(Angle(3.5).value(), 0.5);
}

TEST(Angle, DifferenceIsCentered) {
  EXPECT_DOUBLE_EQ(angdiff(0.1, 0.9), 0.2);
  EXPECT_DOUBLE_EQ(angdiff(0.9, 0.1), -0.2);
  EXPECT_DOUBLE_EQ(angdiff(0.5, 0.0), 0.5);
  EXPECT_NEAR(mod_distance(Angle(0.99), Angle(0.01)), 0.02, 1e-15);
  EXPECT_DOUBLE_EQ(centered(Angle(0.75)), -0.25);
}

TEST(Angle, DifferenceProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng);
    const double d = angdiff(a, b);
    EXPECT_GT(d, -0.5);
    EXPECT_LE(d, 0.5);
    EXPECT_NEAR(mod_distance(a, b), mod_distance(b, a), 1e-15);
    EXPECT_NEAR(mod_distance(Angle(b) + d, Angle(a)), 0.0, 1e-12);
    EXPECT_NEAR(mod_distance(a + 7.0, a), 0.0, 1e-12);
  }
}

TEST(Angle, CircularMean) {
  const std::vector<Angle> xs{Angle(0.95), Angle(0.05)};
  EXPECT_NEAR(mod_distance(circular_mean(xs), Angle(0.0)), 0.0, 1e-15);
  const std::vector<Angle> opposite{Angle(0.0), Angle(0.5)};
  EXPECT_EQ(circular_mean(opposite).value(), 0.0);
  EXPECT_EQ(circular_mean({}).value(), 0.0);
}

TEST(Angle, LiftAndWinding) {
  std::vector<Angle> loop;
  for (int k = 0; k < 40; ++k) loop.emplace_back(0.3 - 2.0 * k / 40.0);
  const auto lifted = lift_path(loop);
  EXPECT_DOUBLE_EQ(lifted.front(), 0.3);
  for (std::size_t k = 1; k < lifted.size(); ++k) EXPECT_NEAR(lifted[k] - lifted[k - 1], -0.05, 1e-12);
  EXPECT_EQ(loop_winding(loop), -2);
  std::vector<Angle> still(10, Angle(0.4));
  EXPECT_EQ(loop_winding(still), 0);
}
