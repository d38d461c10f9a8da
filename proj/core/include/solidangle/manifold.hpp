#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solidangle/vec.hpp"

namespace solidangle {

// A point of the parameter torus [0,1)^n; only the first n entries are used.
using Param = std::array<double, 2>;

// Chart values on the uniform grid j/N (per direction) used by the periodic
// trapezoid rule. For n = 2 index (i, j) is stored at i * N + j, with i the
// first parameter.
struct SampleSet {
  int per_side = 0;
  int ambient = 0;
  int dim = 0;
  std::vector<double> points;    // ambient values per sample
  std::vector<double> tangents;  // dim columns of ambient values per sample

  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(per_side)
                    : static_cast<std::size_t>(per_side) * static_cast<std::size_t>(per_side);
  }
  const double* point(std::size_t i) const { return points.data() + i * static_cast<std::size_t>(ambient); }
  const double* tangent(std::size_t i) const {
    return tangents.data() + i * static_cast<std::size_t>(ambient * dim);
  }
};

// Closed oriented n-manifold (n = 1 or 2) in R^{n+2} given by a smooth
// periodic chart on the unit n-torus. Instances are immutable; the sample
// cache is filled once per level behind a once_flag and is safe to share.
class ParamManifold {
 public:
  ParamManifold(int dim, std::string kind);
  virtual ~ParamManifold() = default;
  ParamManifold(const ParamManifold&) = delete;
  ParamManifold& operator=(const ParamManifold&) = delete;

  int dim() const { return dim_; }
  int ambient() const { return dim_ + 2; }
  const std::string& kind() const { return kind_; }

  virtual Vec point(const Param& s) const = 0;
  // ambient x dim matrix of partial derivatives d chart / d s_i.
  virtual Mat tangents(const Param& s) const = 0;
  // Second partial d^2 chart / d s_i d s_j.
  virtual Vec second(const Param& s, int i, int j) const = 0;

  // Built-ins that know a closed-form normal framing return it here
  // (v1, v2), orthonormal and normal to M. Curves return nullopt.
  virtual std::optional<std::pair<Vec, Vec>> explicit_normal_frame(const Param& s) const;

  // Samples on the uniform grid with 2^log2_per_side points per direction.
  // Levels up to kMaxCachedSamples total points are cached.
  std::shared_ptr<const SampleSet> samples(int log2_per_side) const;

  // Radius of the smallest origin-centred ball containing the sampled chart,
  // and the sampled diameter.
  double bounding_radius() const;
  double diameter() const;

  static constexpr std::size_t kMaxCachedSamples = std::size_t{1} << 17;
  static constexpr int kMaxLevel = 20;

 private:
  std::shared_ptr<const SampleSet> build_samples(int log2_per_side) const;
  void compute_extent() const;

  int dim_;
  std::string kind_;
  mutable std::array<std::once_flag, kMaxLevel + 1> level_once_;
  mutable std::array<std::shared_ptr<const SampleSet>, kMaxLevel + 1> level_cache_;
  mutable std::once_flag extent_once_;
  mutable double bounding_radius_ = 0.0;
  mutable double diameter_ = 0.0;
};

using ManifoldPtr = std::shared_ptr<const ParamManifold>;

// Unit circle in the x1x2-plane, counterclockwise: s -> (cos 2 pi s, sin 2 pi s, 0).
class Circle final : public ParamManifold {
 public:
  Circle();
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;
};

// (p, q) torus knot on the torus with radii R > r:
//   ((R + r cos q t) cos p t, (R + r cos q t) sin p t, r sin q t),  t = 2 pi s.
class TorusKnot final : public ParamManifold {
 public:
  TorusKnot(int p, int q, double major, double minor);
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;

 private:
  int p_;
  int q_;
  double major_;
  double minor_;
};

// Closed curve through the given points, C^2 by periodic cubic spline
// interpolation at uniform parameters j/m.
class SplineCurve final : public ParamManifold {
 public:
  explicit SplineCurve(std::vector<Vec3> points);
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;

  const std::vector<Vec3>& knots() const { return knots_; }

 private:
  struct Segment {
    int index;
    double t;  // local coordinate in [0,1)
  };
  Segment locate(double s) const;

  std::vector<Vec3> knots_;
  std::vector<Vec3> moments_;  // second derivatives w.r.t. s at the knots
};

// Torus of revolution in the hyperplane x4 = 0 of R^4:
//   ((R + r cos 2 pi s2) cos 2 pi s1, (R + r cos 2 pi s2) sin 2 pi s1, r sin 2 pi s2, 0).
// Normal framing: outward normal within the hyperplane, then e4.
class FlatTorus4 final : public ParamManifold {
 public:
  FlatTorus4(double major, double minor);
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;
  std::optional<std::pair<Vec, Vec>> explicit_normal_frame(const Param& s) const override;

 private:
  double major_;
  double minor_;
};

// x -> scale * rotation * x + shift applied to another manifold. The rotation
// must be orthogonal with determinant +1.
class TransformedManifold final : public ParamManifold {
 public:
  TransformedManifold(ManifoldPtr base, Mat rotation, Vec shift, double scale = 1.0);
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;
  std::optional<std::pair<Vec, Vec>> explicit_normal_frame(const Param& s) const override;

 private:
  ManifoldPtr base_;
  Mat rotation_;
  Vec shift_;
  double scale_;
};

// Same image with the opposite orientation (first parameter reversed).
class ReversedManifold final : public ParamManifold {
 public:
  explicit ReversedManifold(ManifoldPtr base);
  Vec point(const Param& s) const override;
  Mat tangents(const Param& s) const override;
  Vec second(const Param& s, int i, int j) const override;
  std::optional<std::pair<Vec, Vec>> explicit_normal_frame(const Param& s) const override;

 private:
  static Param flip(const Param& s);
  ManifoldPtr base_;
};

// Unit vector (y - x)/|y - x|; throws ProximityError when |y - x| < 1e-12.
Vec secant(const Vec& x, const Vec& y);

// Periodic distance between parameters (max over coordinates).
double param_distance(const Param& a, const Param& b, int dim);

struct NearestPoint {
  Param w{};
  double distance = 0.0;
  bool ambiguous = false;
};

// Coarse scan on 1024 (n = 1) or 128^2 (n = 2) samples, Newton polish of the
// best local minima. ambiguous is set when two distinct local minima agree to
// within 1e-9.
NearestPoint nearest_point(const ParamManifold& m, const Vec& x);

// Conservative reach proxy eps0 = 0.5 * min(half the shortest doubly-normal
// chord, smallest curvature radius) from sampled data.
double tube_radius(const ParamManifold& m);

// Smallest chart distance between samples whose parameters are at least
// `separation` apart (periodic); used as an injectivity audit.
double injectivity_audit(const ParamManifold& m, double separation = 0.05);

// Throws ConfigError if the chart looks non-injective (audit below 1e-3) or
// its derivative loses rank on the sample grid.
void validate_manifold(const ParamManifold& m);

// Largest sampled curvature (curves) or normal curvature (surfaces).
double max_curvature(const ParamManifold& m);

}  // namespace solidangle
