#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solidangle/angle.hpp"
#include "solidangle/manifold.hpp"
#include "solidangle/potential.hpp"

namespace solidangle {

struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
};

// Fibers Phi^{-1}(t) with mod-distance(t, 0) below this are refused: near 0
// they may be unbounded.
inline constexpr double kMinLevelDistance = 0.02;

// Phi on a regular lattice of nodes. Node (i, j, k) sits at lo + (i hx, j hy, k hz)
// and is stored at (k * ny + j) * nx + i. mask is 1 for valid nodes; 0 marks
// nodes within mask_radius of M or whose evaluation failed.
struct AngleGrid {
  Box bounds;
  int nx = 0;
  int ny = 0;
  int nz = 0;
  std::vector<double> values;  // Angle representatives in [0, 1)
  std::vector<double> err;     // quadrature error estimates
  std::vector<std::uint8_t> mask;
  double mask_radius = 0.0;
  std::size_t failed = 0;  // masked because evaluation threw

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }
  Vec3 spacing() const;
  Vec3 node(int i, int j, int k) const;
  std::size_t size() const { return values.size(); }
  double masked_fraction() const;
};

struct GridOptions {
  double tol = kGridTol;
  int workers = 1;
  // Nodes closer than mask_factor * (largest spacing) to M are masked.
  double mask_factor = 0.25;
};

// Refuses levels within kMinLevelDistance of 0 (DomainError).
void check_level(Angle t);

// Phi at every node. Evaluation failures are masked, never thrown.
AngleGrid sample_grid(const ParamManifold& m, Angle t, const Box& bounds, int resolution,
                      const GridOptions& options = {});

// Cube around the centre of M's bounding box outside which mod-distance(Phi, 0)
// stays below mod-distance(t, 0) / 2: the stencil decay is fitted at 2, 4 and
// 8 bounding radii and the resulting radius is grown until samples on the
// box faces confirm the bound. Curves only.
Box auto_bounds(const ParamManifold& m, Angle t, double tol = kGridTol, int workers = 1);

// One line per node: "i j k angle mask".
std::string grid_dump(const AngleGrid& grid);

}  // namespace solidangle
