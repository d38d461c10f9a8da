#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "solidangle/errors.hpp"
#include "solidangle/potential.hpp"
#include "solidangle/seifert_mesh.hpp"

using namespace solidangle;

namespace {

// Axis value of the flat unit disk: minus its solid angle over 4 pi.
double axis_value(double z) { return -0.5 * (std::copysign(1.0, z) - z / std::hypot(1.0, z)); }

// Exact value of the polygonal mesh: closed-form solid angle per flat triangle.
double exact_mesh_value(const SeifertMesh& mesh, const Vec3& x) {
  double sum = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[static_cast<std::size_t>(t[0])] - x;
    const Vec3 b = mesh.vertices[static_cast<std::size_t>(t[1])] - x;
    const Vec3 c = mesh.vertices[static_cast<std::size_t>(t[2])] - x;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    sum += 2.0 * std::atan2(a.dot(b.cross(c)), den);
  }
  return sum / (4.0 * std::numbers::pi);
}

// A 512-gon misses the disk by O((2 pi / 512)^2) of its solid angle.
constexpr double kPolygonTol = 1e-5;

}  // namespace

TEST(SeifertMesh, DiskBoundaryIsTheCircle) {
  const SeifertMesh disk = disk_mesh(16, 256);
  const auto loops = disk.boundary();
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(loops[0].size(), 256u);
  for (int v : loops[0]) EXPECT_NEAR(disk.vertices[static_cast<std::size_t>(v)].norm(), 1.0, 1e-14);
  // Counterclockwise, like the circle's parametrisation.
  const Vec3& a = disk.vertices[static_cast<std::size_t>(loops[0][0])];
  const Vec3& b = disk.vertices[static_cast<std::size_t>(loops[0][1])];
  EXPECT_GT(a.cross(b).z(), 0.0);
  EXPECT_TRUE(edge_census(disk.triangles).manifold());
  EXPECT_EQ(euler_characteristic(disk.triangles), 1);
}

TEST(SeifertMesh, FlatDiskMatchesAxisFormula) {
  const SeifertMesh disk = disk_mesh(16, 512);
  for (double z : {-3.0, -0.5, 0.1, 0.8, 4.0}) {
    const double v = phi_via_seifert_mesh(disk, make_vec({0.0, 0.0, z}));
    EXPECT_NEAR(v, exact_mesh_value(disk, Vec3(0.0, 0.0, z)), 1e-9) << z;
    EXPECT_NEAR(v, axis_value(z), kPolygonTol) << z;
  }
}

TEST(SeifertMesh, BumpChangesValuesByIntegers) {
  const SeifertMesh flat = disk_mesh(16, 512);
  const SeifertMesh bump = disk_mesh(16, 512, 0.5);
  const Circle circle;
  for (const Vec& x : {make_vec({0.0, 0.0, 0.2}), make_vec({0.3, 0.1, -0.4}), make_vec({2.0, 0.0, 0.1})}) {
    const double a = phi_via_seifert_mesh(flat, x), b = phi_via_seifert_mesh(bump, x);
    EXPECT_NEAR(a - b, std::round(a - b), 1e-6);
    EXPECT_NEAR(a, exact_mesh_value(flat, Vec3(x[0], x[1], x[2])), 1e-9);
    EXPECT_NEAR(b, exact_mesh_value(bump, Vec3(x[0], x[1], x[2])), 1e-9);
    EXPECT_LE(mod_distance(Angle(a), phi(circle, x).angle), kPolygonTol);
  }
  // Between the two sheets the values differ by exactly one.
  const Vec between = make_vec({0.0, 0.0, 0.2});
  EXPECT_NEAR(std::abs(phi_via_seifert_mesh(flat, between) - phi_via_seifert_mesh(bump, between)), 1.0, 1e-6);
}

TEST(SeifertMesh, RefusesPointsOnTheMesh) {
  const SeifertMesh disk = disk_mesh(8, 64);
  EXPECT_THROW(phi_via_seifert_mesh(disk, make_vec({0.1, 0.1, 0.0})), ProximityError);
  EXPECT_THROW(disk_mesh(1, 64), DomainError);
}

TEST(SeifertMesh, PointTriangleDistance) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_NEAR(point_triangle_distance({0.2, 0.2, 0.5}, a, b, c), 0.5, 1e-15);
  EXPECT_NEAR(point_triangle_distance({2, 0, 0}, a, b, c), 1.0, 1e-15);
  EXPECT_NEAR(point_triangle_distance({1, 1, 0}, a, b, c), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(point_triangle_distance({-1, -1, 1}, a, b, c), std::sqrt(3.0), 1e-15);
}
