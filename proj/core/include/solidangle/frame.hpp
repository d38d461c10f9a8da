#pragma once

#include <utility>
#include <vector>

#include "solidangle/angle.hpp"
#include "solidangle/manifold.hpp"

namespace solidangle {

// Orthonormal framing (v1, v2) of the normal bundle. Curves get a
// rotation-minimising frame with its holonomy spread linearly over the
// parameter so that it closes up; for a curve v2 = v1 x T. Built-in surfaces
// supply their closed-form framing, with v2 negated if needed so that
// det[tangents, v1, v2] < 0 as for curves.
class NormalFrame {
 public:
  explicit NormalFrame(ManifoldPtr m);

  const ParamManifold& manifold() const { return *m_; }
  std::pair<Vec, Vec> at(const Param& s) const;

  // Closing rotation (turns) removed from the transported frame; 0 for
  // explicit frames.
  double holonomy() const { return holonomy_; }

  static constexpr int kTransportSamples = 4096;

 private:
  ManifoldPtr m_;
  bool explicit_ = false;
  bool flip_v2_ = false;
  double holonomy_ = 0.0;
  std::vector<Vec3> r1_;  // transported v1 at s_j = j / kTransportSamples
};

// Transport step of the double-reflection rotation-minimising frame: carries
// r (normal at x0 with unit tangent t0) to x1 with unit tangent t1.
Vec3 double_reflect(const Vec3& x0, const Vec3& t0, const Vec3& r, const Vec3& x1, const Vec3& t1);

struct TubularCoords {
  Param w{};
  double r = 0.0;
  Angle phi;
};

// x = c(w) + r (cos 2 pi phi v1(w) + sin 2 pi phi v2(w)). Valid for r < eps0.
TubularCoords to_tubular(const NormalFrame& frame, const Vec& x, double eps0);
Vec from_tubular(const NormalFrame& frame, const TubularCoords& t);

}  // namespace solidangle
