#pragma once

#include <array>
#include <span>
#include <vector>

namespace solidangle {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with `order` points, computed by Newton iteration on the
// Legendre recurrence. Rules are memoized; the returned reference is stable.
const GaussRule& gauss_legendre(int order);

// Barycentric point and weight of a rule on the reference triangle
// {(a,b): a,b >= 0, a+b <= 1}; weights sum to the triangle area 1/2.
struct TrianglePoint {
  double a;
  double b;
  double weight;
};

// Collapsed (Duffy) Gauss product rule with 5x4 points; exact for
// polynomials of total degree <= 7.
std::span<const TrianglePoint> triangle_rule_degree7();

}  // namespace solidangle
