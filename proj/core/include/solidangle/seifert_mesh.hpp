#pragma once

#include <vector>

#include "solidangle/mesh.hpp"
#include "solidangle/vec.hpp"

namespace solidangle {

// Oriented triangulated surface in R^3 used as an explicit Seifert surface.
struct SeifertMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  std::vector<std::vector<int>> boundary() const { return boundary_loops(triangles); }
};

// Unit disk in the x1x2-plane with counterclockwise boundary (so the boundary
// orientation matches the Circle built-in). Rings of radius k/rings carry
// about 2 pi k vertices, the rim carries boundary_sectors. A nonzero bump
// lifts the interior to x3 = bump (1 - rho^2)^2 without moving the rim.
SeifertMesh disk_mesh(int rings = 64, int boundary_sectors = 8192, double bump = 0.0);

// (1/4 pi) sum over triangles of int Sec_x^* omega_2: degree-7 Gauss rule on
// each triangle compared against its four midpoint children; triangles whose
// estimate misses the share tol * area / total_area are split again, up to
// depth 12. Throws ProximityError (listing the first offending triangles)
// when x is within 1e-6 of the mesh.
double phi_via_seifert_mesh(const SeifertMesh& mesh, const Vec& x, double tol = 1e-9);

// Distance from p to triangle abc.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace solidangle
