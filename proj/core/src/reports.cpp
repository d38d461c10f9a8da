#include "solidangle/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "solidangle/errors.hpp"
#include "solidangle/parallel.hpp"

namespace solidangle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec tube_point(const NormalFrame& frame, const Param& w, double r, double phi) {
  const auto [v1, v2] = frame.at(w);
  return frame.manifold().point(w) + r * (std::cos(kTwoPi * phi) * v1 + std::sin(kTwoPi * phi) * v2);
}

}  // namespace

std::vector<Vec> stencil_directions(int ambient) {
  std::vector<Vec> out;
  int total = 1;
  for (int i = 0; i < ambient; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    Vec v(ambient);
    int c = code;
    for (int i = 0; i < ambient; ++i) {
      v[i] = static_cast<double>(c % 3) - 1.0;
      c /= 3;
    }
    if (v.squaredNorm() > 0.0) out.push_back(v.normalized());
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayReport decay_report(const ParamManifold& m, const std::vector<double>& radii, double tol, int workers) {
  const auto dirs = stencil_directions(m.ambient());
  const std::size_t nd = dirs.size();
  std::vector<double> dist(radii.size() * nd);
  parallel_for(dist.size(), workers, [&](std::size_t i) {
    const double radius = radii[i / nd];
    dist[i] = mod_distance(phi(m, radius * dirs[i % nd], tol).angle, Angle(0.0));
  });
  DecayReport rep;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    DecayRow row{radii[k], 0.0};
    for (std::size_t d = 0; d < nd; ++d) row.max_mod_distance = std::max(row.max_mod_distance, dist[k * nd + d]);
    rep.rows.push_back(row);
    xs.push_back(row.radius);
    ys.push_back(row.max_mod_distance);
  }
  if (xs.size() >= 2) rep.slope = loglog_slope(xs, ys);
  return rep;
}

double euler_residual(const ParamManifold& m, const Vec& x, double tol) {
  const PhiAndGrad pg = phi_and_grad(m, x, tol);
  return x.dot(pg.grad) + (m.dim() + 1) * centered(pg.value.angle);
}

EulerReport euler_report(const ParamManifold& m, const std::vector<double>& radii, double tol, int workers) {
  const auto dirs = stencil_directions(m.ambient());
  const std::size_t nd = dirs.size();
  std::vector<double> res(radii.size() * nd);
  std::vector<double> val(radii.size() * nd);
  parallel_for(res.size(), workers, [&](std::size_t i) {
    const Vec x = radii[i / nd] * dirs[i % nd];
    const PhiAndGrad pg = phi_and_grad(m, x, tol);
    const double lifted = centered(pg.value.angle);
    res[i] = std::abs(x.dot(pg.grad) + (m.dim() + 1) * lifted);
    val[i] = std::abs((m.dim() + 1) * lifted);
  });
  EulerReport rep;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    EulerRow row{radii[k], 0.0, 0.0};
    for (std::size_t d = 0; d < nd; ++d) {
      row.max_abs_residual = std::max(row.max_abs_residual, res[k * nd + d]);
      row.max_abs_phi = std::max(row.max_abs_phi, val[k * nd + d]);
    }
    rep.rows.push_back(row);
    xs.push_back(row.radius);
    ys.push_back(row.max_abs_residual);
  }
  if (xs.size() >= 2) rep.slope = loglog_slope(xs, ys);
  return rep;
}

TubeReport tube_derivative_report(const NormalFrame& frame, const std::vector<double>& r_values,
                                  const std::vector<double>& phi_grid, int w_count, double tol, int workers) {
  const ParamManifold& m = frame.manifold();
  if (m.dim() != 1) throw DomainError("tube_derivative_report: curves only");
  if (w_count < 1) throw DomainError("tube_derivative_report: need w_count >= 1");
  const std::size_t nr = r_values.size();
  const std::size_t np = phi_grid.size();
  const std::size_t nw = static_cast<std::size_t>(w_count);
  TubeReport rep;
  rep.rows.resize(nr * np * nw);
  parallel_for(rep.rows.size(), workers, [&](std::size_t i) {
    const double r = r_values[i / (np * nw)];
    const double ph = phi_grid[(i / nw) % np];
    const Param w{static_cast<double>(i % nw) / static_cast<double>(nw), 0.0};
    const double hphi = 1e-4;
    const double hr = 1e-3 * r;
    auto eval = [&](double rr, double pp) { return phi(m, tube_point(frame, w, rr, pp), tol).angle; };
    TubeRow row;
    row.w = w[0];
    row.r = r;
    row.phi = ph;
    row.value = eval(r, ph).value();
    row.dphi_dphi = angdiff(eval(r, ph + hphi), eval(r, ph - hphi)) / (2.0 * hphi);
    row.dphi_dr = angdiff(eval(r + hr, ph), eval(r - hr, ph)) / (2.0 * hr);
    rep.rows[i] = row;
  });
  double mean = 0.0;
  for (const auto& row : rep.rows) mean += row.dphi_dphi;
  rep.epsilon = mean >= 0.0 ? 1 : -1;
  std::vector<double> rs, gmax;
  for (std::size_t k = 0; k < nr; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j < np * nw; ++j) {
      const auto& row = rep.rows[k * np * nw + j];
      rep.max_dev_from_eps = std::max(rep.max_dev_from_eps, std::abs(row.dphi_dphi - rep.epsilon));
      g = std::max(g, std::abs(row.dphi_dr));
    }
    if (r_values[k] < 1.0) rep.max_log_ratio = std::max(rep.max_log_ratio, g / -std::log(r_values[k]));
    rs.push_back(r_values[k]);
    gmax.push_back(std::max(g, 1e-300));
  }
  if (rs.size() >= 2) rep.radial_exponent = loglog_slope(rs, gmax);
  return rep;
}

std::vector<WindingRow> winding_report(const NormalFrame& frame, int base_count, double r, int meridian_samples,
                                       double tol, int workers) {
  const ParamManifold& m = frame.manifold();
  if (r <= 0.0) r = 0.5 * tube_radius(m);
  std::vector<WindingRow> rows;
  if (m.dim() == 1) {
    for (int j = 0; j < base_count; ++j) rows.push_back({{static_cast<double>(j) / base_count, 0.0}, 0});
  } else {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(base_count)))));
    for (int a = 0; a < side; ++a)
      for (int b = 0; b < side; ++b)
        rows.push_back({{static_cast<double>(a) / side, static_cast<double>(b) / side}, 0});
  }
  const std::size_t ms = static_cast<std::size_t>(meridian_samples);
  std::vector<Angle> values(rows.size() * ms);
  parallel_for(values.size(), workers, [&](std::size_t i) {
    const Param& w = rows[i / ms].w;
    const double ph = static_cast<double>(i % ms) / static_cast<double>(ms);
    values[i] = phi(m, tube_point(frame, w, r, ph), tol).angle;
  });
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].winding = loop_winding(std::span<const Angle>(values.data() + k * ms, ms));
  }
  return rows;
}

std::string decay_csv(const DecayReport& r) {
  std::ostringstream o;
  o << "radius,max_mod_distance\n";
  for (const auto& row : r.rows) o << fmt17(row.radius) << ',' << fmt17(row.max_mod_distance) << "\n";
  o << "# slope," << fmt17(r.slope) << "\n";
  return o.str();
}

std::string euler_csv(const EulerReport& r) {
  std::ostringstream o;
  o << "radius,max_abs_residual,max_abs_scaled_phi\n";
  for (const auto& row : r.rows) {
    o << fmt17(row.radius) << ',' << fmt17(row.max_abs_residual) << ',' << fmt17(row.max_abs_phi) << "\n";
  }
  o << "# slope," << fmt17(r.slope) << "\n";
  return o.str();
}

std::string tube_csv(const TubeReport& r) {
  std::ostringstream o;
  o << "w,r,phi,value,dphi_dphi,dphi_dr\n";
  for (const auto& row : r.rows) {
    o << fmt17(row.w) << ',' << fmt17(row.r) << ',' << fmt17(row.phi) << ',' << fmt17(row.value) << ','
      << fmt17(row.dphi_dphi) << ',' << fmt17(row.dphi_dr) << "\n";
  }
  o << "# epsilon," << r.epsilon << "\n";
  o << "# max_dev_from_eps," << fmt17(r.max_dev_from_eps) << "\n";
  o << "# radial_exponent," << fmt17(r.radial_exponent) << "\n";
  o << "# max_log_ratio," << fmt17(r.max_log_ratio) << "\n";
  return o.str();
}

std::string winding_csv(const std::vector<WindingRow>& rows) {
  std::ostringstream o;
  o << "w1,w2,winding\n";
  for (const auto& row : rows) o << fmt17(row.w[0]) << ',' << fmt17(row.w[1]) << ',' << row.winding << "\n";
  return o.str();
}

}  // namespace solidangle
