#include "solidangle/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

GaussRule build_gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return rule;
}

std::vector<TrianglePoint> build_triangle_rule() {
  const GaussRule& gu = gauss_legendre(5);
  const GaussRule& gv = gauss_legendre(4);
  std::vector<TrianglePoint> pts;
  for (std::size_t i = 0; i < gu.nodes.size(); ++i) {
    const double u = 0.5 * (gu.nodes[i] + 1.0);
    for (std::size_t j = 0; j < gv.nodes.size(); ++j) {
      const double v = 0.5 * (gv.nodes[j] + 1.0);
      pts.push_back({u, v * (1.0 - u), 0.25 * gu.weights[i] * gv.weights[j] * (1.0 - u)});
    }
  }
  return pts;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    if (order == 1) {
      slot = std::make_unique<GaussRule>(GaussRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<GaussRule>(build_gauss_legendre(order));
    }
  }
  return *slot;
}

std::span<const TrianglePoint> triangle_rule_degree7() {
  static const std::vector<TrianglePoint> rule = build_triangle_rule();
  return rule;
}

}  // namespace solidangle
