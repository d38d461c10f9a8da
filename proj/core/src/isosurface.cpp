#include "solidangle/isosurface.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "solidangle/errors.hpp"
#include "solidangle/parallel.hpp"

namespace solidangle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Six tetrahedra sharing the 0-7 diagonal; corner bits are (x, y, z).
constexpr std::array<std::array<int, 4>, 6> kKuhn{{
    {0, 1, 3, 7},
    {0, 1, 5, 7},
    {0, 2, 3, 7},
    {0, 2, 6, 7},
    {0, 4, 5, 7},
    {0, 4, 6, 7},
}};

Vec to_vec(const Vec3& p) { return make_vec({p.x(), p.y(), p.z()}); }

}  // namespace

ProjectedVertex newton_project(const ParamManifold& m, const Vec3& x0, Angle t, double max_step, int steps,
                               double target, double tol) {
  ProjectedVertex out;
  out.x = x0;
  for (int it = 0;; ++it) {
    const PhiAndGrad pg = phi_and_grad(m, to_vec(out.x), tol);
    const double g = angdiff(pg.value.angle, t);
    out.grad = Vec3(pg.grad[0], pg.grad[1], pg.grad[2]);
    out.grad_norm = out.grad.norm();
    out.residual = std::abs(g);
    if (out.residual <= target || it >= steps || out.grad_norm == 0.0) return out;
    Vec3 dx = -g * out.grad / (out.grad_norm * out.grad_norm);
    const double len = dx.norm();
    if (len > max_step) dx *= max_step / len;
    out.x += dx;
  }
}

IsoResult extract_iso(const ParamManifold& m, const AngleGrid& grid, Angle t, const IsoOptions& options) {
  if (m.ambient() != 3) throw DomainError("extract_iso: curves in R^3 only");
  IsoResult res;
  const std::size_t nodes = grid.size();
  std::vector<double> cs(nodes), sn(nodes), g(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    cs[i] = std::cos(kTwoPi * grid.values[i]);
    sn[i] = std::sin(kTwoPi * grid.values[i]);
    g[i] = angdiff(grid.values[i], t.value());
  }
  const Vec3 h = grid.spacing();

  std::vector<Vec3> pos;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  std::vector<Triangle> tris;

  auto crossing = [&](std::size_t a, std::size_t b, const Vec3& pa, const Vec3& pb) {
    const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    const std::uint64_t key = lo * static_cast<std::uint64_t>(nodes) + hi;
    auto [it, fresh] = edge_vertex.try_emplace(key, static_cast<int>(pos.size()));
    if (fresh) {
      const double f = g[a] / (g[a] - g[b]);
      pos.push_back(pa + f * (pb - pa));
    }
    return it->second;
  };

  // Emits (a, b, c) or (a, c, b) so that the normal follows dir.
  auto emit = [&](int a, int b, int c, const Vec3& dir) {
    const Vec3 nrm = (pos[b] - pos[a]).cross(pos[c] - pos[a]);
    if (nrm.dot(dir) >= 0.0) {
      tris.push_back({a, b, c});
    } else {
      tris.push_back({a, c, b});
    }
  };

  for (int k = 0; k + 1 < grid.nz; ++k) {
    for (int j = 0; j + 1 < grid.ny; ++j) {
      for (int i = 0; i + 1 < grid.nx; ++i) {
        std::array<std::size_t, 8> idx;
        std::array<Vec3, 8> p;
        for (int b = 0; b < 8; ++b) {
          const int di = b & 1, dj = (b >> 1) & 1, dk = (b >> 2) & 1;
          idx[b] = grid.index(i + di, j + dj, k + dk);
          p[b] = grid.bounds.lo + Vec3((i + di) * h.x(), (j + dj) * h.y(), (k + dk) * h.z());
        }
        for (const auto& tet : kKuhn) {
          ++res.tets;
          std::array<std::size_t, 4> n;
          bool masked = false;
          for (int c = 0; c < 4; ++c) {
            n[c] = idx[tet[c]];
            masked = masked || grid.mask[n[c]] == 0;
          }
          if (masked) {
            ++res.masked_tets;
            continue;
          }
          double sc = 0.0, ss = 0.0;
          for (int c = 0; c < 4; ++c) {
            sc += cs[n[c]];
            ss += sn[n[c]];
          }
          if (std::hypot(sc, ss) < 1e-12) {
            ++res.inadmissible_tets;
            continue;
          }
          const double mean = wrap01(std::atan2(ss, sc) / kTwoPi);
          std::array<double, 4> lifted;
          bool admissible = true;
          for (int c = 0; c < 4; ++c) {
            const double off = angdiff(grid.values[n[c]], mean);
            admissible = admissible && std::abs(off) < 0.25;
            lifted[c] = angdiff(mean, t.value()) + off;
          }
          if (!admissible) {
            ++res.inadmissible_tets;
            continue;
          }
          int pos_count = 0;
          for (double v : lifted) pos_count += v >= 0.0 ? 1 : 0;
          if (pos_count == 0 || pos_count == 4) continue;
          // Mixed signs: the lifted values lie in (-1/2, 1/2) and equal g.
          std::array<Vec3, 4> q;
          for (int c = 0; c < 4; ++c) q[c] = p[tet[c]];
          Eigen::Matrix3d dm;
          dm.row(0) = (q[1] - q[0]).transpose();
          dm.row(1) = (q[2] - q[0]).transpose();
          dm.row(2) = (q[3] - q[0]).transpose();
          const Vec3 dg(g[n[1]] - g[n[0]], g[n[2]] - g[n[0]], g[n[3]] - g[n[0]]);
          const Vec3 dir = dm.inverse() * dg;
          std::array<int, 4> plus{}, minus{};
          int np = 0, nm = 0;
          for (int c = 0; c < 4; ++c) {
            if (g[n[c]] >= 0.0) {
              plus[np++] = c;
            } else {
              minus[nm++] = c;
            }
          }
          if (np == 0 || nm == 0) continue;  // rounding at g = 0
          auto cut = [&](int a, int b) { return crossing(n[a], n[b], q[a], q[b]); };
          if (np == 1 || nm == 1) {
            const int lone = np == 1 ? plus[0] : minus[0];
            const auto& others = np == 1 ? minus : plus;
            emit(cut(lone, others[0]), cut(lone, others[1]), cut(lone, others[2]), dir);
          } else {
            const int a = cut(plus[0], minus[0]);
            const int b = cut(plus[0], minus[1]);
            const int c = cut(plus[1], minus[1]);
            const int d = cut(plus[1], minus[0]);
            emit(a, b, c, dir);
            emit(a, c, d, dir);
          }
        }
      }
    }
  }

  const double cap = 0.45 * h.norm();
  std::vector<ProjectedVertex> proj(pos.size());
  parallel_for(pos.size(), options.workers, [&](std::size_t v) {
    proj[v] = newton_project(m, pos[v], t, cap, options.newton_steps, options.newton_target, options.tol);
  });
  for (const auto& pv : proj) res.mesh.add_vertex(pv.x, Provenance::InteriorCell, pv.residual, pv.grad);
  for (const auto& tri : tris) {
    res.mesh.add_triangle(tri, Provenance::InteriorCell);
    const auto& vs = res.mesh.vertices;
    const Vec3 nrm = (vs[tri[1]] - vs[tri[0]]).cross(vs[tri[2]] - vs[tri[0]]);
    const Vec3 gsum = proj[tri[0]].grad + proj[tri[1]].grad + proj[tri[2]].grad;
    if (nrm.dot(gsum) <= 0.0) ++res.against_gradient;
  }
  return res;
}

}  // namespace solidangle
