#include "solidangle/seifert_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "solidangle/errors.hpp"
#include "solidangle/quadrature.hpp"

namespace solidangle {

namespace {

constexpr int kMaxDepth = 12;
constexpr double kMeshProximity = 1e-6;

int pow2ceil(double v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

// Triangulates the annulus between two counterclockwise rings, merging by
// angle so each step advances one of them.
void strip(std::vector<Triangle>& tris, int inner0, int m_in, int outer0, int m_out) {
  int i = 0;
  int j = 0;
  while (i < m_in || j < m_out) {
    const double next_in = static_cast<double>(i + 1) / m_in;
    const double next_out = static_cast<double>(j + 1) / m_out;
    const int a = inner0 + i % m_in;
    const int b = outer0 + j % m_out;
    if (j < m_out && (i >= m_in || next_out <= next_in)) {
      tris.push_back({a, b, outer0 + (j + 1) % m_out});
      ++j;
    } else {
      tris.push_back({a, b, inner0 + (i + 1) % m_in});
      ++i;
    }
  }
}

// int over the triangle of det[y - x, b - a, c - a] / |y - x|^3 with the
// degree-7 rule.
double tri_rule(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 n = e1.cross(e2);
  double sum = 0.0;
  for (const auto& q : triangle_rule_degree7()) {
    const Vec3 d = a + q.a * e1 + q.b * e2 - x;
    const double r = d.norm();
    sum += q.weight * d.dot(n) / (r * r * r);
  }
  return sum;
}

double adaptive(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c, double coarse, double tol, int depth) {
  const Vec3 ab = 0.5 * (a + b);
  const Vec3 bc = 0.5 * (b + c);
  const Vec3 ca = 0.5 * (c + a);
  const double q0 = tri_rule(x, a, ab, ca);
  const double q1 = tri_rule(x, ab, b, bc);
  const double q2 = tri_rule(x, ca, bc, c);
  const double q3 = tri_rule(x, bc, ca, ab);
  const double fine = q0 + q1 + q2 + q3;
  if (std::abs(fine - coarse) <= tol || depth >= kMaxDepth) return fine;
  const double t = 0.25 * tol;
  return adaptive(x, a, ab, ca, q0, t, depth + 1) + adaptive(x, ab, b, bc, q1, t, depth + 1) +
         adaptive(x, ca, bc, c, q2, t, depth + 1) + adaptive(x, bc, ca, ab, q3, t, depth + 1);
}

}  // namespace

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point by Voronoi regions of the triangle.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

SeifertMesh disk_mesh(int rings, int boundary_sectors, double bump) {
  if (rings < 2 || boundary_sectors < 8) throw DomainError("disk_mesh: need rings >= 2 and boundary_sectors >= 8");
  SeifertMesh mesh;
  auto lift = [bump](double rho) { return bump * std::pow(1.0 - rho * rho, 2); };
  mesh.vertices.emplace_back(0.0, 0.0, lift(0.0));
  int prev0 = 0;
  int prev_m = 1;
  for (int k = 1; k <= rings; ++k) {
    const double rho = static_cast<double>(k) / rings;
    const int m = k == rings ? boundary_sectors
                             : std::min(boundary_sectors, std::max(8, pow2ceil(2.0 * std::numbers::pi * k)));
    const int start = static_cast<int>(mesh.vertices.size());
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * std::numbers::pi * j / m;
      mesh.vertices.emplace_back(rho * std::cos(th), rho * std::sin(th), k == rings ? 0.0 : lift(rho));
    }
    if (prev_m == 1) {
      for (int j = 0; j < m; ++j) mesh.triangles.push_back({0, start + j, start + (j + 1) % m});
    } else {
      strip(mesh.triangles, prev0, prev_m, start, m);
    }
    prev0 = start;
    prev_m = m;
  }
  return mesh;
}

double phi_via_seifert_mesh(const SeifertMesh& mesh, const Vec& xv, double tol) {
  if (xv.size() != 3) throw DomainError("phi_via_seifert_mesh: meshes live in R^3");
  const Vec3 x(xv[0], xv[1], xv[2]);
  double total_area = 0.0;
  for (const auto& t : mesh.triangles) {
    total_area += triangle_area(mesh.vertices[static_cast<std::size_t>(t[0])],
                                mesh.vertices[static_cast<std::size_t>(t[1])],
                                mesh.vertices[static_cast<std::size_t>(t[2])]);
  }
  std::string offending;
  int n_off = 0;
  double sum = 0.0;
  // Tolerance is on the normalised value, i.e. 4 pi tol on the raw integral.
  const double raw_tol = 4.0 * std::numbers::pi * tol;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(t[2])];
    const Vec3 centroid = (a + b + c) / 3.0;
    const double reach = std::max({(a - centroid).norm(), (b - centroid).norm(), (c - centroid).norm()});
    if ((x - centroid).norm() <= reach + kMeshProximity &&
        point_triangle_distance(x, a, b, c) < kMeshProximity) {
      if (n_off < 8) offending += (n_off ? ", " : "") + std::to_string(i);
      ++n_off;
      continue;
    }
    if (n_off) continue;
    const double share = raw_tol * triangle_area(a, b, c) / total_area;
    sum += adaptive(x, a, b, c, tri_rule(x, a, b, c), share, 0);
  }
  if (n_off) {
    throw ProximityError("phi_via_seifert_mesh: point within 1e-6 of " + std::to_string(n_off) +
                         " triangle(s): " + offending);
  }
  return sum / (4.0 * std::numbers::pi);
}

}  // namespace solidangle
