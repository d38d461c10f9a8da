#pragma once

#include <string>
#include <vector>

#include "solidangle/frame.hpp"
#include "solidangle/potential.hpp"

namespace solidangle {

// Unit directions of the 3^d - 1 stencil around the origin (26 in R^3, 80 in R^4).
std::vector<Vec> stencil_directions(int ambient);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct DecayRow {
  double radius = 0.0;
  double max_mod_distance = 0.0;  // max over the stencil of mod-distance(Phi, 0)
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double slope = 0.0;
};

// Phi at radius * direction for every stencil direction.
DecayReport decay_report(const ParamManifold& m, const std::vector<double>& radii, double tol = kDefaultTol,
                         int workers = 1);

// sum_i x_i dPhi/dx_i + (n+1) Phi, with Phi lifted to (-1/2, 1/2].
double euler_residual(const ParamManifold& m, const Vec& x, double tol = kDefaultTol);

struct EulerRow {
  double radius = 0.0;
  double max_abs_residual = 0.0;
  double max_abs_phi = 0.0;  // (n+1) |Phi| at the same points, for scale
};

struct EulerReport {
  std::vector<EulerRow> rows;
  double slope = 0.0;
};

EulerReport euler_report(const ParamManifold& m, const std::vector<double>& radii, double tol = kDefaultTol,
                         int workers = 1);

// Central differences in tubular coordinates (curves only).
struct TubeRow {
  double w = 0.0;
  double r = 0.0;
  double phi = 0.0;  // meridional angle
  double value = 0.0;
  double dphi_dphi = 0.0;
  double dphi_dr = 0.0;
};

struct TubeReport {
  std::vector<TubeRow> rows;
  int epsilon = 0;                  // meridional winding sign
  double max_dev_from_eps = 0.0;    // max |dPhi/dphi - eps|
  double radial_exponent = 0.0;     // fitted exponent of max |dPhi/dr| against r
  double max_log_ratio = 0.0;       // max |dPhi/dr| / (-ln r) over r < 1
};

TubeReport tube_derivative_report(const NormalFrame& frame, const std::vector<double>& r_values,
                                  const std::vector<double>& phi_grid, int w_count, double tol = kGridTol,
                                  int workers = 1);

// Degree of phi -> Phi(c(w) + r (cos 2 pi phi v1 + sin 2 pi phi v2)) at base
// points w; r defaults to eps0 / 2. For n = 2 the base points form a
// square grid with base_count points in total (rounded to a square).
struct WindingRow {
  Param w{};
  int winding = 0;
};

std::vector<WindingRow> winding_report(const NormalFrame& frame, int base_count, double r = -1.0,
                                       int meridian_samples = 64, double tol = kGridTol, int workers = 1);

std::string decay_csv(const DecayReport& r);
std::string euler_csv(const EulerReport& r);
std::string tube_csv(const TubeReport& r);
std::string winding_csv(const std::vector<WindingRow>& rows);

}  // namespace solidangle
