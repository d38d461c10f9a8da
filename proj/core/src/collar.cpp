#include "solidangle/collar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "solidangle/errors.hpp"
#include "solidangle/parallel.hpp"

namespace solidangle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kWeldCap = 0.9;

Vec3 to_vec3(const Vec& v) { return {v[0], v[1], v[2]}; }
Vec to_vec(const Vec3& p) { return make_vec({p.x(), p.y(), p.z()}); }

struct Clipped {
  IsoMesh mesh;
  std::vector<std::uint8_t> is_cut;  // per output vertex
};

// Keeps the part of the mesh where psi >= 0. Cut points sit on mesh edges,
// keyed by the edge, so neighbouring triangles share them; the interpolation
// fraction is clamped away from the end points to avoid slivers (cut points
// are snapped onto the tube afterwards anyway).
Clipped clip(const IsoMesh& in, const std::vector<double>& psi) {
  Clipped out;
  std::vector<int> kept(in.vertices.size(), -1);
  std::map<std::pair<int, int>, int> cuts;
  auto keep = [&](int v) {
    if (kept[v] < 0) {
      kept[v] = out.mesh.add_vertex(in.vertices[v], in.vertex_tag[v], in.residual[v], in.grad[v]);
      out.is_cut.push_back(0);
    }
    return kept[v];
  };
  auto cut = [&](int u, int v) {
    const auto key = std::minmax(u, v);
    auto it = cuts.find(key);
    if (it != cuts.end()) return it->second;
    const int a = key.first, b = key.second;
    const double f = std::clamp(psi[a] / (psi[a] - psi[b]), 0.1, 0.9);
    const int id = out.mesh.add_vertex(in.vertices[a] + f * (in.vertices[b] - in.vertices[a]),
                                       Provenance::InteriorCell);
    out.is_cut.push_back(1);
    cuts.emplace(key, id);
    return id;
  };
  for (std::size_t k = 0; k < in.triangles.size(); ++k) {
    const Triangle& tri = in.triangles[k];
    int inside = 0;
    for (int v : tri) inside += psi[v] < 0.0 ? 1 : 0;
    if (inside == 3) continue;
    if (inside == 0) {
      out.mesh.add_triangle({keep(tri[0]), keep(tri[1]), keep(tri[2])}, in.triangle_tag[k]);
      continue;
    }
    // Rotate so that tri[0] is the odd one out.
    int r = 0;
    for (int i = 0; i < 3; ++i) {
      const bool in_i = psi[tri[i]] < 0.0;
      if ((inside == 1 && in_i) || (inside == 2 && !in_i)) r = i;
    }
    const int a = tri[r], b = tri[(r + 1) % 3], c = tri[(r + 2) % 3];
    if (inside == 1) {
      const int pab = cut(a, b), pca = cut(c, a);
      const int kb = keep(b), kc = keep(c);
      out.mesh.add_triangle({pab, kb, kc}, in.triangle_tag[k]);
      out.mesh.add_triangle({pab, kc, pca}, in.triangle_tag[k]);
    } else {
      out.mesh.add_triangle({keep(a), cut(a, b), cut(c, a)}, in.triangle_tag[k]);
    }
  }
  return out;
}

double area_of(const IsoMesh& mesh) {
  double a = 0.0;
  for (const auto& t : mesh.triangles) {
    a += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return a;
}

void check_rings(const std::vector<double>& r_rings, std::size_t nw) {
  if (r_rings.size() < 2) throw DomainError("collar_stitch: need at least two rings");
  for (std::size_t k = 0; k + 1 < r_rings.size(); ++k) {
    if (!(r_rings[k] > r_rings[k + 1])) throw DomainError("collar_stitch: r_rings must be strictly decreasing");
  }
  if (r_rings.back() != 0.0) throw DomainError("collar_stitch: r_rings must end at 0");
  if (nw < 3) throw DomainError("collar_stitch: need at least three base points");
}

// Ring-major solutions for the positive radii; each ring seeds the next.
std::vector<MeridianSolution> solve_rings(const NormalFrame& frame, Angle t, const std::vector<double>& radii,
                                          const std::vector<Param>& ws, const std::vector<double>& guesses,
                                          double tol, int workers) {
  const std::size_t nw = ws.size();
  std::vector<MeridianSolution> sol(nw * radii.size());
  parallel_for(nw, workers, [&](std::size_t j) {
    std::optional<double> g;
    if (!guesses.empty()) g = guesses[j];
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const MeridianSolution s = meridian_solve(frame, t, radii[k], ws[j], g, tol);
      g = g ? *g + angdiff(s.phi, Angle(*g)) : s.phi.value();  // continuous lift
      sol[k * nw + j] = s;
    }
  });
  return sol;
}

// Outer ring (all base points), inner rings on the base points `keep`
// (increasing indices into the outer ring), then the chart points under
// `keep`. The outer ring's edge j -> j+1 is used backwards; the strip from
// the outer ring to the first inner ring is a zipper.
IsoMesh assemble(const NormalFrame& frame, const std::vector<Param>& ws, const std::vector<MeridianSolution>& outer,
                 const std::vector<std::size_t>& keep, const std::vector<MeridianSolution>& inner) {
  const std::size_t n0 = ws.size();
  const std::size_t n1 = keep.size();
  const std::size_t rings = inner.size() / n1;
  IsoMesh mesh;
  for (const auto& s : outer) mesh.add_vertex(s.point, Provenance::CollarRing, s.residual, s.grad);
  for (const auto& s : inner) mesh.add_vertex(s.point, Provenance::CollarRing, s.residual, s.grad);
  for (std::size_t i : keep) mesh.add_vertex(to_vec3(frame.manifold().point(ws[i])), Provenance::BoundaryOnM);
  auto o = [&](std::size_t j) { return static_cast<int>(j % n0); };
  auto c = [&](std::size_t k, std::size_t i) { return static_cast<int>(n0 + k * n1 + i % n1); };
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t j0 = keep[i];
    const std::size_t j1 = i + 1 < n1 ? keep[i + 1] : keep[0] + n0;
    for (std::size_t j = j0; j < j1; ++j) mesh.add_triangle({o(j + 1), o(j), c(0, i)}, Provenance::CollarRing);
    mesh.add_triangle({o(j1), c(0, i), c(0, i + 1)}, Provenance::CollarRing);
  }
  for (std::size_t k = 0; k < rings; ++k) {
    for (std::size_t i = 0; i < n1; ++i) {
      mesh.add_triangle({c(k, i + 1), c(k, i), c(k + 1, i)}, Provenance::CollarRing);
      mesh.add_triangle({c(k, i + 1), c(k + 1, i), c(k + 1, i + 1)}, Provenance::CollarRing);
    }
  }
  return mesh;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

MeridianSolution meridian_solve(const NormalFrame& frame, Angle t, double r, const Param& w,
                                std::optional<double> guess, double tol) {
  const ParamManifold& m = frame.manifold();
  if (m.dim() != 1) throw DomainError("meridian_solve: curves only");
  if (!(r > 1e-7 * m.diameter())) throw DomainError("meridian_solve: r below 1e-7 diameters");
  const auto [v1, v2] = frame.at(w);
  const Vec c = m.point(w);
  auto at = [&](double ph) {
    const double a = kTwoPi * ph;
    return Vec(c + r * (std::cos(a) * v1 + std::sin(a) * v2));
  };
  double ph = 0.0;
  if (guess) {
    ph = *guess;
  } else {
    double best = 1.0;
    for (int k = 0; k < 8; ++k) {
      const double cand = k / 8.0;
      const double g = mod_distance(phi(m, at(cand), tol).angle, t);
      if (g < best) {
        best = g;
        ph = cand;
      }
    }
  }
  MeridianSolution out;
  for (int it = 0; it < 40; ++it) {
    const Vec x = at(ph);
    const PhiAndGrad pg = phi_and_grad(m, x, tol, std::max(tol, kMeridianGradTol));
    const double f = angdiff(pg.value.angle, t);
    const double a = kTwoPi * ph;
    const double df = pg.grad.dot(kTwoPi * r * (-std::sin(a) * v1 + std::cos(a) * v2));
    out.phi = Angle(ph);
    out.point = to_vec3(x);
    out.residual = std::abs(f);
    out.grad = to_vec3(pg.grad);
    out.grad_norm = out.grad.norm();
    out.iterations = it;
    // Below twice the quadrature's error the residual is noise.
    if (out.residual <= std::max(kMeridianTarget, 2.0 * pg.value.err_estimate)) return out;
    if (std::abs(df) < 0.5) {
      std::ostringstream msg;
      msg << "meridian_solve: |dPhi/dphi| = " << std::abs(df) << " < 1/2 at r = " << r
          << "; the tube radius is too large";
      throw ConvergenceError(msg.str());
    }
    ph += std::clamp(-f / df, -0.125, 0.125);
  }
  throw ConvergenceError("meridian_solve: Newton did not reach the residual target");
}

IsoMesh collar_stitch(const NormalFrame& frame, Angle t, const std::vector<double>& r_rings,
                      const std::vector<Param>& ws, const std::vector<double>& guesses, double tol, int workers) {
  check_rings(r_rings, ws.size());
  if (!guesses.empty() && guesses.size() != ws.size()) throw DomainError("collar_stitch: one guess per base point");
  const auto sol = solve_rings(frame, t, std::vector<double>(r_rings.begin(), r_rings.end() - 1), ws, guesses, tol,
                               workers);
  const std::size_t nw = ws.size();
  const std::vector<MeridianSolution> outer(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nw));
  const std::vector<MeridianSolution> inner(sol.begin() + static_cast<std::ptrdiff_t>(nw), sol.end());
  return assemble(frame, ws, outer, all_indices(nw), inner);
}

IsoMesh collar_stitch(const NormalFrame& frame, Angle t, const std::vector<double>& r_rings, int w_count, double tol,
                      int workers) {
  std::vector<Param> ws;
  for (int j = 0; j < w_count; ++j) ws.push_back({static_cast<double>(j) / w_count, 0.0});
  return collar_stitch(frame, t, r_rings, ws, {}, tol, workers);
}

IsoMesh fuse(const IsoMesh& interior, const IsoMesh& collar, double weld_tol, double* max_weld) {
  std::vector<int> targets;
  for (const auto& loop : boundary_loops(interior.triangles)) targets.insert(targets.end(), loop.begin(), loop.end());
  IsoMesh out = interior;
  std::vector<int> remap(collar.vertices.size(), -1);
  std::vector<int> collar_boundary;
  for (const auto& loop : boundary_loops(collar.triangles)) {
    for (int v : loop) {
      if (collar.vertex_tag[v] != Provenance::BoundaryOnM) collar_boundary.push_back(v);
    }
  }
  std::vector<int> unmatched;
  double worst = 0.0;
  for (int v : collar_boundary) {
    int best = -1;
    double bd = weld_tol;
    for (int u : targets) {
      const double d = (interior.vertices[u] - collar.vertices[v]).norm();
      if (d <= bd) {
        bd = d;
        best = u;
      }
    }
    if (best < 0) {
      unmatched.push_back(v);
    } else {
      remap[v] = best;
      worst = std::max(worst, bd);
    }
  }
  if (!unmatched.empty()) {
    std::ostringstream msg;
    msg << "fuse: weld mismatch, " << unmatched.size() << " collar boundary vertices unmatched:";
    for (std::size_t i = 0; i < std::min<std::size_t>(unmatched.size(), 16); ++i) msg << ' ' << unmatched[i];
    throw Error(msg.str());
  }
  for (std::size_t v = 0; v < collar.vertices.size(); ++v) {
    if (remap[v] < 0) {
      remap[v] = out.add_vertex(collar.vertices[v], collar.vertex_tag[v], collar.residual[v], collar.grad[v]);
    }
  }
  for (std::size_t k = 0; k < collar.triangles.size(); ++k) {
    const auto& tri = collar.triangles[k];
    out.add_triangle({remap[tri[0]], remap[tri[1]], remap[tri[2]]}, collar.triangle_tag[k]);
  }
  std::vector<int> stray;
  for (const auto& loop : boundary_loops(out.triangles)) {
    for (int v : loop) {
      if (out.vertex_tag[v] != Provenance::BoundaryOnM) stray.push_back(v);
    }
  }
  if (!stray.empty()) {
    std::ostringstream msg;
    msg << "fuse: weld mismatch, " << stray.size() << " boundary vertices off M remain:";
    for (std::size_t i = 0; i < std::min<std::size_t>(stray.size(), 16); ++i) msg << ' ' << stray[i];
    throw Error(msg.str());
  }
  if (max_weld != nullptr) *max_weld = worst;
  return out;
}

SurfaceResult seifert_surface(const ManifoldPtr& mp, Angle t, const SurfaceOptions& options) {
  const ParamManifold& m = *mp;
  if (m.dim() != 1 || m.ambient() != 3) throw DomainError("seifert_surface: curves in R^3 only");
  check_level(t);
  if (options.grid < 4) throw DomainError("seifert_surface: grid must be >= 4");
  if (options.rings < 1 || !(options.ring_ratio > 0.0 && options.ring_ratio < 1.0)) {
    throw DomainError("seifert_surface: need rings >= 1 and ring_ratio in (0, 1)");
  }
  if (options.collar_points < 3) throw DomainError("seifert_surface: collar_points must be >= 3");
  SurfaceResult res;
  res.bounds = options.bounds ? *options.bounds : auto_bounds(m, t, options.tol, options.workers);
  GridOptions go;
  go.tol = options.tol;
  go.workers = options.workers;
  const AngleGrid grid = sample_grid(m, t, res.bounds, options.grid, go);
  res.masked_fraction = grid.masked_fraction();
  res.grid_failed = grid.failed;
  res.spacing = grid.spacing().maxCoeff();
  res.eps0 = tube_radius(m);
  // Coarse grids would put the weld outside the tube; cap it inside.
  res.r_weld = std::min(std::max(2.0 * res.spacing, res.eps0 / 4.0), kWeldCap * res.eps0);
  for (int k = 0; k < options.rings; ++k) res.r_rings.push_back(res.r_weld * std::pow(options.ring_ratio, k));
  res.r_rings.push_back(0.0);

  IsoOptions io;
  io.tol = options.tol;
  io.workers = options.workers;
  IsoResult iso = extract_iso(m, grid, t, io);
  res.masked_tets = iso.masked_tets;
  res.inadmissible_tets = iso.inadmissible_tets;
  res.against_gradient = iso.against_gradient;

  std::vector<double> psi(iso.mesh.vertices.size());
  parallel_for(psi.size(), options.workers,
               [&](std::size_t v) { psi[v] = distance_to(m, to_vec(iso.mesh.vertices[v])) - res.r_weld; });
  Clipped cl = clip(iso.mesh, psi);

  const NormalFrame frame(mp);
  std::vector<std::size_t> cut_ids;
  for (std::size_t v = 0; v < cl.is_cut.size(); ++v) {
    if (cl.is_cut[v]) cut_ids.push_back(v);
  }
  std::vector<Param> cut_w(cut_ids.size());
  std::vector<MeridianSolution> cut_sol(cut_ids.size());
  parallel_for(cut_ids.size(), options.workers, [&](std::size_t i) {
    const TubularCoords tc = to_tubular(frame, to_vec(cl.mesh.vertices[cut_ids[i]]), res.eps0);
    cut_w[i] = tc.w;
    cut_sol[i] = meridian_solve(frame, t, res.r_weld, tc.w, tc.phi.value());
  });
  std::vector<int> cut_index(cl.mesh.vertices.size(), -1);
  for (std::size_t i = 0; i < cut_ids.size(); ++i) {
    const std::size_t v = cut_ids[i];
    cut_index[v] = static_cast<int>(i);
    cl.mesh.vertices[v] = cut_sol[i].point;
    cl.mesh.residual[v] = cut_sol[i].residual;
    cl.mesh.grad[v] = cut_sol[i].grad;
    cl.mesh.grad_norm[v] = cut_sol[i].grad_norm;
  }

  // The snapped cut vertices are the collar's outer ring.
  // Inner rings use at most collar_points base points taken from the loop.
  const std::vector<double> radii(res.r_rings.begin() + 1, res.r_rings.end() - 1);
  IsoMesh fused = cl.mesh;
  for (const auto& loop : boundary_loops(cl.mesh.triangles)) {
    std::vector<Param> ws;
    std::vector<MeridianSolution> sol;
    std::vector<double> guesses;
    for (int v : loop) {
      if (cut_index[v] < 0) {
        throw ConvergenceError("seifert_surface: the grid surface has an open boundary away from M (masked or "
                               "inadmissible cells); increase --grid");
      }
      ws.push_back(cut_w[cut_index[v]]);
      sol.push_back(cut_sol[cut_index[v]]);
      guesses.push_back(sol.back().phi.value());
    }
    const std::size_t nw = ws.size();
    if (nw < 3) throw ConvergenceError("seifert_surface: degenerate weld loop; increase --grid");
    const std::size_t stride = (nw + options.collar_points - 1) / options.collar_points;
    std::vector<std::size_t> keep;
    std::vector<Param> kept_w;
    std::vector<double> kept_phi;
    for (std::size_t j = 0; j < nw; j += stride) {
      keep.push_back(j);
      kept_w.push_back(ws[j]);
      kept_phi.push_back(guesses[j]);
    }
    auto inner = solve_rings(frame, t, radii, kept_w, kept_phi, kMeridianTol, options.workers);
    double weld = 0.0;
    fused = fuse(fused, assemble(frame, ws, sol, keep, inner), 1e-9 * m.diameter(), &weld);
    res.max_weld_distance = std::max(res.max_weld_distance, weld);
    if (options.refine_check) {
      const std::size_t n1 = keep.size();
      std::vector<double> last = kept_phi;
      for (std::size_t i = 0; i < n1 && !inner.empty(); ++i) last[i] = inner[inner.size() - n1 + i].phi.value();
      const double r_min = res.r_rings[res.r_rings.size() - 2];
      const auto extra =
          solve_rings(frame, t, {r_min * options.ring_ratio}, kept_w, last, kMeridianTol, options.workers);
      inner.insert(inner.end(), extra.begin(), extra.end());
      res.collar_area_refined += area_of(assemble(frame, ws, sol, keep, inner));
    }
  }
  res.mesh = std::move(fused);
  res.stats = mesh_stats(res.mesh);
  return res;
}

}  // namespace solidangle
