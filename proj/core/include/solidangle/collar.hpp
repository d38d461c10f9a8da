#pragma once

#include <optional>
#include <vector>

#include "solidangle/frame.hpp"
#include "solidangle/grid.hpp"
#include "solidangle/isosurface.hpp"
#include "solidangle/mesh.hpp"

namespace solidangle {

inline constexpr double kMeridianTol = 1e-12;
inline constexpr double kMeridianTarget = 1e-11;
inline constexpr double kMeridianGradTol = 1e-6;

struct MeridianSolution {
  Angle phi;
  Vec3 point = Vec3::Zero();
  double residual = 0.0;
  Vec3 grad = Vec3::Zero();
  double grad_norm = 0.0;
  int iterations = 0;
};

// The phi with Phi(from_tubular(w, r, phi)) = t. phi -> Phi is a degree +-1
// circle map with derivative near +-1, so Newton (steps capped at 1/8 turn)
// from the best of eight samples, or from `guess`, converges from anywhere.
// Throws ConvergenceError when |dPhi/dphi| < 1/2 (tube radius too large) and
// DomainError for r below 1e-7 diameters.
MeridianSolution meridian_solve(const NormalFrame& frame, Angle t, double r, const Param& w,
                                std::optional<double> guess = std::nullopt, double tol = kMeridianTol);

// Rings Theta_t(r_k, w_j) for decreasing r_rings; a final entry 0 puts the ring
// on the chart points themselves, tagged BoundaryOnM. The w_j are taken in
// loop order; the outer ring's edge j -> j+1 is used backwards, so the collar
// glues onto a surface whose boundary runs j -> j+1. guesses seed the outer
// ring's solves; each inner ring starts from the ring outside it.
IsoMesh collar_stitch(const NormalFrame& frame, Angle t, const std::vector<double>& r_rings,
                      const std::vector<Param>& ws, const std::vector<double>& guesses = {},
                      double tol = kMeridianTol, int workers = 1);

// Uniform base points w_j = j / w_count (curves).
IsoMesh collar_stitch(const NormalFrame& frame, Angle t, const std::vector<double>& r_rings, int w_count,
                      double tol = kMeridianTol, int workers = 1);

// Welds every collar boundary vertex not on M to the nearest interior
// boundary vertex within weld_tol. Throws Error naming unmatched vertices, or
// when boundary loops off M remain.
IsoMesh fuse(const IsoMesh& interior, const IsoMesh& collar, double weld_tol, double* max_weld = nullptr);

struct SurfaceOptions {
  int grid = 64;
  int rings = 8;  // positive collar radii r_weld * ratio^k; r = 0 is added
  double ring_ratio = 0.5;
  std::size_t collar_points = 256;  // base points on the rings inside the weld ring
  double tol = kGridTol;
  int workers = 1;
  std::optional<Box> bounds;
  bool refine_check = false;  // also build the collar with one extra ring
};

struct SurfaceResult {
  IsoMesh mesh;
  MeshStats stats;
  Box bounds;
  double spacing = 0.0;
  double eps0 = 0.0;
  double r_weld = 0.0;
  std::vector<double> r_rings;
  std::size_t masked_tets = 0;
  std::size_t inadmissible_tets = 0;
  std::size_t against_gradient = 0;
  double masked_fraction = 0.0;
  std::size_t grid_failed = 0;
  double max_weld_distance = 0.0;
  double collar_area_refined = 0.0;  // refine_check only
};

// auto_bounds -> sample_grid -> extract_iso -> clip at r_weld -> collar_stitch -> fuse.
// r_weld = max(2 h, eps0 / 4) with h the grid spacing, capped at 0.9 eps0.
SurfaceResult seifert_surface(const ManifoldPtr& m, Angle t, const SurfaceOptions& options = {});

}  // namespace solidangle
