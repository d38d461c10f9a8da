#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "solidangle/errors.hpp"
#include "solidangle/mesh.hpp"

using namespace solidangle;

namespace {

// Unit square split into two triangles, counterclockwise.
IsoMesh square() {
  IsoMesh m;
  m.add_vertex({0, 0, 0}, Provenance::BoundaryOnM);
  m.add_vertex({1, 0, 0}, Provenance::BoundaryOnM);
  m.add_vertex({1, 1, 0}, Provenance::BoundaryOnM);
  m.add_vertex({0, 1, 0}, Provenance::BoundaryOnM);
  m.add_triangle({0, 1, 2}, Provenance::InteriorCell);
  m.add_triangle({0, 2, 3}, Provenance::InteriorCell);
  return m;
}

// Octahedron, outward oriented.
std::vector<Triangle> octahedron() {
  return {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
}

}  // namespace

TEST(Mesh, CensusOfClosedAndOpenSurfaces) {
  const EdgeCensus closed = edge_census(octahedron());
  EXPECT_EQ(closed.interior, 12u);
  EXPECT_EQ(closed.boundary, 0u);
  EXPECT_TRUE(closed.manifold());
  EXPECT_EQ(euler_characteristic(octahedron()), 2);
  EXPECT_TRUE(boundary_loops(octahedron()).empty());

  const IsoMesh sq = square();
  const EdgeCensus open = edge_census(sq.triangles);
  EXPECT_EQ(open.interior, 1u);
  EXPECT_EQ(open.boundary, 4u);
  const auto loops = boundary_loops(sq.triangles);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(loops[0].size(), 4u);
}

TEST(Mesh, DetectsDefects) {
  EXPECT_EQ(edge_census({{0, 1, 2}, {0, 1, 3}}).misoriented, 1u);
  EXPECT_EQ(edge_census({{0, 1, 2}, {1, 0, 3}, {1, 0, 4}}).nonmanifold, 1u);
  EXPECT_EQ(edge_census({{0, 0, 1}}).degenerate, 1u);
  EXPECT_FALSE(edge_census({{0, 0, 1}}).manifold());
}

TEST(Mesh, ComponentsAndGenus) {
  auto tris = octahedron();
  for (const auto& t : octahedron()) tris.push_back({t[0] + 6, t[1] + 6, t[2] + 6});
  EXPECT_EQ(component_count(tris), 2);
  EXPECT_EQ(euler_characteristic(tris), 4);
}

TEST(Mesh, StatsOfTaggedSquare) {
  IsoMesh sq = square();
  const MeshStats s = mesh_stats(sq);
  EXPECT_NEAR(s.total_area, 1.0, 1e-15);
  EXPECT_EQ(s.boundary_components, 1);
  EXPECT_EQ(s.components, 1);
  EXPECT_EQ(s.euler, 1);
  EXPECT_EQ(s.genus, 0);
  EXPECT_TRUE(s.boundary_on_m);
  EXPECT_NE(mesh_stats_csv(s).find("boundary_components,1"), std::string::npos);
}

TEST(Mesh, ObjRoundTripAndPly) {
  const IsoMesh sq = square();
  const auto dir = std::filesystem::temp_directory_path();
  const std::string obj = (dir / "solidangle_mesh_test.obj").string();
  export_mesh(sq, obj, MeshFormat::Obj);
  const IsoMesh back = read_obj(obj);
  ASSERT_EQ(back.vertices.size(), 4u);
  EXPECT_EQ(back.triangles, sq.triangles);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.vertices[i], sq.vertices[i]);
  const std::string ply = (dir / "solidangle_mesh_test.ply").string();
  export_mesh(sq, ply, parse_mesh_format("ply"));
  std::ifstream in(ply);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "ply");
  EXPECT_THROW(parse_mesh_format("stl"), ConfigError);
  std::filesystem::remove(obj);
  std::filesystem::remove(ply);
}
