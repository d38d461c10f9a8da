#include "solidangle/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

int max_index(const std::vector<Triangle>& tris) {
  int m = -1;
  for (const auto& t : tris) m = std::max({m, t[0], t[1], t[2]});
  return m;
}

// Directed edge -> number of uses.
std::unordered_map<std::uint64_t, int> directed_edges(const std::vector<Triangle>& tris) {
  std::unordered_map<std::uint64_t, int> uses;
  uses.reserve(tris.size() * 3);
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) ++uses[edge_key(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)])];
  }
  return uses;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::InteriorCell:
      return "interior_cell";
    case Provenance::CollarRing:
      return "collar_ring";
    case Provenance::BoundaryOnM:
      return "boundary_on_m";
  }
  return "unknown";
}

int IsoMesh::add_vertex(const Vec3& v, Provenance tag, double res, const Vec3& g) {
  vertices.push_back(v);
  vertex_tag.push_back(tag);
  residual.push_back(res);
  grad.push_back(g);
  grad_norm.push_back(g.norm());
  return static_cast<int>(vertices.size()) - 1;
}

void IsoMesh::add_triangle(const Triangle& t, Provenance tag) {
  triangles.push_back(t);
  triangle_tag.push_back(tag);
}

EdgeCensus edge_census(const std::vector<Triangle>& tris) {
  EdgeCensus c;
  const auto uses = directed_edges(tris);
  std::unordered_map<std::uint64_t, std::pair<int, int>> undirected;
  for (const auto& [key, count] : uses) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    auto& slot = undirected[edge_key(std::min(a, b), std::max(a, b))];
    (a < b ? slot.first : slot.second) += count;
  }
  for (const auto& [key, pair] : undirected) {
    const int total = pair.first + pair.second;
    if (total == 1) {
      ++c.boundary;
    } else if (total == 2) {
      if (pair.first == 1 && pair.second == 1) {
        ++c.interior;
      } else {
        ++c.misoriented;
      }
    } else {
      ++c.nonmanifold;
    }
  }
  for (const auto& t : tris) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) ++c.degenerate;
  }
  return c;
}

std::vector<std::vector<int>> boundary_loops(const std::vector<Triangle>& tris) {
  const auto uses = directed_edges(tris);
  // Boundary edge a->b: used once and b->a unused.
  std::multimap<int, int> next;
  for (const auto& [key, count] : uses) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (count == 1 && !uses.contains(edge_key(b, a))) next.emplace(a, b);
  }
  std::vector<std::vector<int>> loops;
  while (!next.empty()) {
    auto it = next.begin();
    const int start = it->first;
    std::vector<int> loop{start};
    int cur = it->second;
    next.erase(it);
    while (cur != start) {
      loop.push_back(cur);
      auto nx = next.find(cur);
      if (nx == next.end()) throw Error("boundary_loops: boundary edges do not close up");
      cur = nx->second;
      next.erase(nx);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

int component_count(const std::vector<Triangle>& tris) {
  if (tris.empty()) return 0;
  UnionFind uf(static_cast<std::size_t>(max_index(tris) + 1));
  for (const auto& t : tris) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }
  std::vector<char> seen(uf.parent.size(), 0);
  int count = 0;
  for (const auto& t : tris) {
    const int r = uf.find(t[0]);
    if (!seen[static_cast<std::size_t>(r)]) {
      seen[static_cast<std::size_t>(r)] = 1;
      ++count;
    }
  }
  return count;
}

int euler_characteristic(const std::vector<Triangle>& tris) {
  std::vector<char> used(static_cast<std::size_t>(max_index(tris) + 1), 0);
  for (const auto& t : tris)
    for (int v : t) used[static_cast<std::size_t>(v)] = 1;
  const long v = std::count(used.begin(), used.end(), 1);
  std::unordered_map<std::uint64_t, char> edges;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)];
      const int b = t[static_cast<std::size_t>((k + 1) % 3)];
      edges[edge_key(std::min(a, b), std::max(a, b))] = 1;
    }
  }
  return static_cast<int>(v - static_cast<long>(edges.size()) + static_cast<long>(tris.size()));
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

MeshStats mesh_stats(const IsoMesh& mesh) {
  MeshStats s;
  s.vertices = mesh.vertices.size();
  s.triangles = mesh.triangles.size();
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const double a = triangle_area(mesh.vertices[static_cast<std::size_t>(t[0])],
                                   mesh.vertices[static_cast<std::size_t>(t[1])],
                                   mesh.vertices[static_cast<std::size_t>(t[2])]);
    s.total_area += a;
    if (mesh.triangle_tag[i] == Provenance::InteriorCell) {
      s.interior_area += a;
    } else {
      s.collar_area += a;
    }
  }
  s.census = edge_census(mesh.triangles);
  s.euler = mesh.triangles.empty() ? 0 : euler_characteristic(mesh.triangles);
  s.components = component_count(mesh.triangles);
  std::vector<std::vector<int>> loops;
  try {
    loops = boundary_loops(mesh.triangles);
  } catch (const Error&) {
    loops.clear();
    s.boundary_components = -1;
  }
  if (s.boundary_components >= 0) s.boundary_components = static_cast<int>(loops.size());
  s.boundary_on_m = !loops.empty();
  for (const auto& loop : loops)
    for (int v : loop)
      if (mesh.vertex_tag[static_cast<std::size_t>(v)] != Provenance::BoundaryOnM) s.boundary_on_m = false;

  // Genus per component from chi_c = 2 - 2 g_c - b_c.
  if (!mesh.triangles.empty() && s.boundary_components >= 0) {
    UnionFind uf(static_cast<std::size_t>(max_index(mesh.triangles) + 1));
    for (const auto& t : mesh.triangles) {
      uf.unite(t[0], t[1]);
      uf.unite(t[1], t[2]);
    }
    std::map<int, std::vector<Triangle>> parts;
    for (const auto& t : mesh.triangles) parts[uf.find(t[0])].push_back(t);
    std::map<int, int> loops_per;
    for (const auto& loop : loops) ++loops_per[uf.find(loop.front())];
    for (const auto& [root, tris] : parts) {
      const int chi = euler_characteristic(tris);
      s.genus += (2 - chi - loops_per[root]) / 2;
    }
  }

  s.min_grad_norm = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (mesh.vertex_tag[i] == Provenance::BoundaryOnM) continue;
    any = true;
    s.max_residual = std::max(s.max_residual, mesh.residual[i]);
    s.min_grad_norm = std::min(s.min_grad_norm, mesh.grad_norm[i]);
  }
  if (!any) s.min_grad_norm = 0.0;
  for (const auto& t : mesh.triangles) {
    const auto& vs = mesh.vertices;
    const Vec3 nrm = (vs[t[1]] - vs[t[0]]).cross(vs[t[2]] - vs[t[0]]);
    Vec3 g = Vec3::Zero();
    for (int v : t) g += mesh.grad[v];
    if (!(nrm.dot(g) > 0.0)) ++s.against_gradient;
  }
  return s;
}

std::string mesh_stats_csv(const MeshStats& s) {
  std::ostringstream o;
  o << "key,value\n";
  o << "vertices," << s.vertices << "\n";
  o << "triangles," << s.triangles << "\n";
  o << "total_area," << fmt17(s.total_area) << "\n";
  o << "interior_area," << fmt17(s.interior_area) << "\n";
  o << "collar_area," << fmt17(s.collar_area) << "\n";
  o << "boundary_components," << s.boundary_components << "\n";
  o << "components," << s.components << "\n";
  o << "euler_characteristic," << s.euler << "\n";
  o << "genus," << s.genus << "\n";
  o << "interior_edges," << s.census.interior << "\n";
  o << "boundary_edges," << s.census.boundary << "\n";
  o << "nonmanifold_edges," << s.census.nonmanifold << "\n";
  o << "misoriented_edges," << s.census.misoriented << "\n";
  o << "boundary_on_m," << (s.boundary_on_m ? 1 : 0) << "\n";
  o << "max_residual," << fmt17(s.max_residual) << "\n";
  o << "min_grad_norm," << fmt17(s.min_grad_norm) << "\n";
  o << "against_gradient," << s.against_gradient << "\n";
  return o.str();
}

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "obj") return MeshFormat::Obj;
  if (name == "ply") return MeshFormat::Ply;
  throw ConfigError("unknown mesh format '" + name + "' (expected obj or ply)");
}

void export_mesh(const IsoMesh& mesh, const std::string& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("export_mesh: cannot open '" + path + "' for writing");
  if (format == MeshFormat::Obj) {
    out << "# vertices " << mesh.vertices.size() << " triangles " << mesh.triangles.size() << "\n";
    for (const auto& v : mesh.vertices) out << "v " << fmt17(v.x()) << ' ' << fmt17(v.y()) << ' ' << fmt17(v.z()) << "\n";
    for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
  } else {
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.triangles.size() << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (const auto& v : mesh.vertices) out << fmt17(v.x()) << ' ' << fmt17(v.y()) << ' ' << fmt17(v.z()) << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  }
  if (!out) throw Error("export_mesh: write failed for '" + path + "'");
}

IsoMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_obj: cannot open '" + path + "'");
  IsoMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x = 0, y = 0, z = 0;
      ls >> x >> y >> z;
      mesh.add_vertex({x, y, z}, Provenance::InteriorCell);
    } else if (tag == "f") {
      int a = 0, b = 0, c = 0;
      ls >> a >> b >> c;
      mesh.add_triangle({a - 1, b - 1, c - 1}, Provenance::InteriorCell);
    }
  }
  return mesh;
}

}  // namespace solidangle
