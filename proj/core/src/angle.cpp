#include "solidangle/angle.hpp"

#include <cmath>
#include <numbers>

namespace solidangle {

double wrap01(double turns) {
  double v = turns - std::floor(turns);
  // floor can round up to exactly 1 for tiny negative inputs.
  if (v >= 1.0) v = 0.0;
  return v;
}

Angle::Angle(double turns) : value_(wrap01(turns)) {}

double angdiff(double a, double b) {
  double d = wrap01(a - b);
  if (d > 0.5) d -= 1.0;
  return d;
}

double angdiff(Angle a, Angle b) { return angdiff(a.value(), b.value()); }

double mod_distance(double a, double b) { return std::abs(angdiff(a, b)); }

double mod_distance(Angle a, Angle b) { return std::abs(angdiff(a, b)); }

double centered(Angle a) { return angdiff(a.value(), 0.0); }

Angle circular_mean(std::span<const Angle> angles) {
  double c = 0.0;
  double s = 0.0;
  for (Angle a : angles) {
    c += std::cos(2.0 * std::numbers::pi * a.value());
    s += std::sin(2.0 * std::numbers::pi * a.value());
  }
  // A resultant lost in rounding has no direction.
  if (std::hypot(c, s) <= 1e-12 * static_cast<double>(angles.size())) return Angle(0.0);
  return Angle(std::atan2(s, c) / (2.0 * std::numbers::pi));
}

std::vector<double> lift_path(std::span<const Angle> path) {
  std::vector<double> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i == 0) {
      out.push_back(path[0].value());
    } else {
      out.push_back(out.back() + angdiff(path[i], path[i - 1]));
    }
  }
  return out;
}

int loop_winding(std::span<const Angle> loop) {
  if (loop.empty()) return 0;
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Angle next = loop[(i + 1) % loop.size()];
    total += angdiff(next, loop[i]);
  }
  return static_cast<int>(std::lround(total));
}

}  // namespace solidangle
