#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "solidangle/vec.hpp"

namespace solidangle {

using Triangle = std::array<int, 3>;

enum class Provenance : std::uint8_t { InteriorCell, CollarRing, BoundaryOnM };

const char* provenance_name(Provenance p);

// Oriented triangle mesh in R^3 with per-vertex diagnostics. residual is
// |angdiff(Phi(v), t)| (0 for vertices placed on M, where Phi is undefined);
// grad is grad Phi(v) and grad_norm its length (0 for vertices on M).
struct IsoMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<Provenance> vertex_tag;
  std::vector<Provenance> triangle_tag;
  std::vector<double> residual;
  std::vector<Vec3> grad;
  std::vector<double> grad_norm;

  int add_vertex(const Vec3& v, Provenance tag, double residual = 0.0, const Vec3& grad = Vec3::Zero());
  void add_triangle(const Triangle& t, Provenance tag);
};

struct EdgeCensus {
  std::size_t interior = 0;      // used by exactly two triangles, opposite directions
  std::size_t boundary = 0;      // used once
  std::size_t nonmanifold = 0;   // used three or more times
  std::size_t misoriented = 0;   // two uses in the same direction
  std::size_t degenerate = 0;    // triangles with a repeated vertex
  bool manifold() const { return nonmanifold == 0 && misoriented == 0 && degenerate == 0; }
};

EdgeCensus edge_census(const std::vector<Triangle>& triangles);

// Boundary edges chained into closed vertex loops following the induced
// orientation. Throws Error if boundary edges do not close up.
std::vector<std::vector<int>> boundary_loops(const std::vector<Triangle>& triangles);

// Connected components of the triangle adjacency (shared vertices).
int component_count(const std::vector<Triangle>& triangles);

// V - E + F over vertices referenced by at least one triangle.
int euler_characteristic(const std::vector<Triangle>& triangles);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

struct MeshStats {
  double total_area = 0.0;
  double interior_area = 0.0;
  double collar_area = 0.0;
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  int boundary_components = 0;
  int components = 0;
  int euler = 0;
  int genus = 0;  // sum over components of (2 - chi_c - b_c) / 2
  EdgeCensus census;
  bool boundary_on_m = false;  // every boundary vertex tagged BoundaryOnM
  double max_residual = 0.0;   // over vertices off M
  double min_grad_norm = 0.0;  // over vertices off M
  // Triangles whose normal does not point along the sum of their vertex
  // gradients.
  std::size_t against_gradient = 0;
};

MeshStats mesh_stats(const IsoMesh& mesh);

// CSV rows "key,value" with a header.
std::string mesh_stats_csv(const MeshStats& s);

enum class MeshFormat { Obj, Ply };

MeshFormat parse_mesh_format(const std::string& name);

// ASCII OBJ (1-based "f" lines) or ASCII PLY; coordinates with 17
// significant digits; vertex and triangle order preserved.
void export_mesh(const IsoMesh& mesh, const std::string& path, MeshFormat format);

// Reads back the subset of OBJ written by export_mesh (v and f lines).
IsoMesh read_obj(const std::string& path);

}  // namespace solidangle
