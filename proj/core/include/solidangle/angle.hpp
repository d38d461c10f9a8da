#pragma once

#include <span>
#include <vector>

namespace solidangle {

// A point of R/Z stored as its representative in [0, 1).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double turns);

  double value() const { return value_; }

  Angle operator-() const { return Angle(-value_); }
  friend Angle operator+(Angle a, double turns) { return Angle(a.value_ + turns); }
  friend Angle operator-(Angle a, double turns) { return Angle(a.value_ - turns); }
  friend bool operator==(Angle a, Angle b) = default;

 private:
  double value_ = 0.0;
};

// Reduces a real number to [0, 1).
double wrap01(double turns);

// Signed difference a - b reduced to (-1/2, 1/2].
double angdiff(Angle a, Angle b);
double angdiff(double a, double b);

// |angdiff(a, b)|, the distance on the circle R/Z.
double mod_distance(Angle a, Angle b);
double mod_distance(double a, double b);

// Lift of an Angle to the representative in (-1/2, 1/2].
double centered(Angle a);

// Circular mean of a set of angles (turns, in [0,1)); returns 0 for an empty
// set or a set whose resultant vanishes.
Angle circular_mean(std::span<const Angle> angles);

// Lifts a sampled path of Angles to reals so consecutive values differ by
// angdiff; the first value keeps its [0,1) representative.
std::vector<double> lift_path(std::span<const Angle> path);

// Total winding of a closed sampled loop (the last sample connects back to the
// first). The result is an exact integer value for any finite sample set.
int loop_winding(std::span<const Angle> loop);

}  // namespace solidangle
