#include "solidangle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "solidangle/errors.hpp"
#include "solidangle/parallel.hpp"
#include "solidangle/reports.hpp"

namespace solidangle {

namespace {

Vec to_vec(const Vec3& p) { return make_vec({p.x(), p.y(), p.z()}); }

// Centre and radius of the sampled chart's bounding box.
std::pair<Vec3, double> extent(const ParamManifold& m) {
  const auto set = m.samples(9);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::size_t i = 0; i < set->size(); ++i) {
    const Vec3 p(set->point(i)[0], set->point(i)[1], set->point(i)[2]);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 c = 0.5 * (lo + hi);
  double r = 0.0;
  for (std::size_t i = 0; i < set->size(); ++i) {
    r = std::max(r, (Vec3(set->point(i)[0], set->point(i)[1], set->point(i)[2]) - c).norm());
  }
  return {c, r};
}

}  // namespace

Vec3 AngleGrid::spacing() const {
  return {(bounds.hi.x() - bounds.lo.x()) / (nx - 1), (bounds.hi.y() - bounds.lo.y()) / (ny - 1),
          (bounds.hi.z() - bounds.lo.z()) / (nz - 1)};
}

Vec3 AngleGrid::node(int i, int j, int k) const {
  const Vec3 h = spacing();
  return bounds.lo + Vec3(i * h.x(), j * h.y(), k * h.z());
}

double AngleGrid::masked_fraction() const {
  if (mask.empty()) return 0.0;
  const auto bad = std::count(mask.begin(), mask.end(), std::uint8_t{0});
  return static_cast<double>(bad) / static_cast<double>(mask.size());
}

void check_level(Angle t) {
  if (mod_distance(t, Angle(0.0)) < kMinLevelDistance) {
    throw DomainError("level t is within " + std::to_string(kMinLevelDistance) +
                      " of 0: the fiber over 0 contains an unbounded set (the plane region outside M for the "
                      "circle), so nearby fibers need not be bounded");
  }
}

AngleGrid sample_grid(const ParamManifold& m, Angle t, const Box& bounds, int resolution, const GridOptions& options) {
  check_level(t);
  if (m.ambient() != 3) throw DomainError("sample_grid: curves in R^3 only");
  if (resolution < 2) throw DomainError("sample_grid: resolution must be >= 2");
  AngleGrid g;
  g.bounds = bounds;
  g.nx = g.ny = g.nz = resolution;
  const std::size_t n = static_cast<std::size_t>(resolution) * resolution * resolution;
  g.values.assign(n, 0.0);
  g.err.assign(n, 0.0);
  g.mask.assign(n, 0);
  g.mask_radius = options.mask_factor * g.spacing().maxCoeff();
  std::vector<std::uint8_t> failed(n, 0);
  parallel_for(n, options.workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(g.nx));
    const int j = static_cast<int>((idx / static_cast<std::size_t>(g.nx)) % static_cast<std::size_t>(g.ny));
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny)));
    const Vec x = to_vec(g.node(i, j, k));
    try {
      if (distance_to(m, x) < g.mask_radius) return;
      const PhiValue v = phi(m, x, options.tol);
      g.values[idx] = v.angle.value();
      g.err[idx] = v.err_estimate;
      g.mask[idx] = 1;
    } catch (const Error&) {
      failed[idx] = 1;
    }
  });
  g.failed = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}));
  return g;
}

Box auto_bounds(const ParamManifold& m, Angle t, double tol, int workers) {
  check_level(t);
  if (m.ambient() != 3) throw DomainError("auto_bounds: curves in R^3 only");
  const double target = 0.5 * mod_distance(t, Angle(0.0));
  const auto [centre, rad] = extent(m);
  const auto dirs = stencil_directions(3);
  const std::vector<double> radii{2.0 * rad, 4.0 * rad, 8.0 * rad};
  std::vector<double> dist(radii.size() * dirs.size());
  parallel_for(dist.size(), workers, [&](std::size_t i) {
    const Vec3 x = centre + radii[i / dirs.size()] * Vec3(dirs[i % dirs.size()][0], dirs[i % dirs.size()][1],
                                                        dirs[i % dirs.size()][2]);
    dist[i] = mod_distance(phi(m, to_vec(x), tol).angle, Angle(0.0));
  });
  std::vector<double> ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double best = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) best = std::max(best, dist[k * dirs.size() + d]);
    ys.push_back(std::max(best, 1e-300));
  }
  const double slope = std::min(loglog_slope(radii, ys), -1.0);
  // Fit through the innermost radius: y = y0 (R / R0)^slope.
  double half = std::max(1.2 * rad, radii[0] * std::pow(target / ys[0], 1.0 / slope));
  constexpr int kFace = 8;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> face(6 * kFace * kFace);
    parallel_for(face.size(), workers, [&](std::size_t i) {
      const int f = static_cast<int>(i / (kFace * kFace));
      const double a = -1.0 + 2.0 * (static_cast<double>((i / kFace) % kFace) + 0.5) / kFace;
      const double b = -1.0 + 2.0 * (static_cast<double>(i % kFace) + 0.5) / kFace;
      Vec3 u = Vec3::Zero();
      const int axis = f / 2;
      u[axis] = (f % 2 == 0) ? -1.0 : 1.0;
      u[(axis + 1) % 3] = a;
      u[(axis + 2) % 3] = b;
      face[i] = mod_distance(phi(m, to_vec(centre + half * u), tol).angle, Angle(0.0));
    });
    if (*std::max_element(face.begin(), face.end()) < target) {
      return {centre - Vec3::Constant(half), centre + Vec3::Constant(half)};
    }
    half *= 1.25;
  }
  throw ConvergenceError("auto_bounds: face samples never dropped below the level margin");
}

std::string grid_dump(const AngleGrid& grid) {
  std::ostringstream o;
  char buf[64];
  for (int k = 0; k < grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const std::size_t idx = grid.index(i, j, k);
        std::snprintf(buf, sizeof buf, "%.17g", grid.values[idx]);
        o << i << ' ' << j << ' ' << k << ' ' << buf << ' ' << static_cast<int>(grid.mask[idx]) << "\n";
      }
  return o.str();
}

}  // namespace solidangle
