#pragma once

#include "solidangle/grid.hpp"
#include "solidangle/mesh.hpp"

namespace solidangle {

struct IsoOptions {
  double tol = kGridTol;
  int workers = 1;
  int newton_steps = 3;
  double newton_target = 1e-7;  // stop refining once |angdiff(Phi, t)| is below this
};

struct IsoResult {
  IsoMesh mesh;
  std::size_t tets = 0;
  std::size_t masked_tets = 0;        // some corner masked
  std::size_t inadmissible_tets = 0;  // corner spread fails the wraparound guard
  std::size_t against_gradient = 0;   // triangles whose normal opposes grad Phi after projection
};

struct ProjectedVertex {
  Vec3 x;
  double residual = 0.0;
  double grad_norm = 0.0;
  Vec3 grad = Vec3::Zero();
};

// Newton iteration x <- x - g grad / |grad|^2 with g = angdiff(Phi(x), t),
// each step capped at max_step. The returned residual and gradient belong to
// the returned point.
ProjectedVertex newton_project(const ParamManifold& m, const Vec3& x, Angle t, double max_step, int steps,
                               double target, double tol);

// Circle-valued marching tetrahedra over g = angdiff(Phi, t). Each grid cell
// is split into six tetrahedra around its main diagonal. A tetrahedron is
// used only when all four corners are unmasked and their offsets from the
// circular mean lie in (-1/4, 1/4); the recentred values then agree with
// angdiff on every edge that carries a crossing, so neighbouring cells share
// crossing vertices. Vertices are interpolated linearly and then Newton
// projected; triangle normals point along grad Phi.
IsoResult extract_iso(const ParamManifold& m, const AngleGrid& grid, Angle t, const IsoOptions& options = {});

}  // namespace solidangle
