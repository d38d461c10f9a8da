#include "commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "solidangle/collar.hpp"
#include "solidangle/elliptic.hpp"
#include "solidangle/errors.hpp"
#include "solidangle/frame.hpp"
#include "solidangle/lambda.hpp"
#include "solidangle/manifold_io.hpp"
#include "solidangle/oracles.hpp"
#include "solidangle/parallel.hpp"
#include "solidangle/reports.hpp"
#include "solidangle/seifert_mesh.hpp"

namespace solidangle::cli {

namespace {

std::string f17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tol > 0.0 ? cfg.tol : fallback; }

ManifoldPtr need_curve(const RunConfig& cfg) {
  if (cfg.curve.empty()) throw ConfigError(cfg.command + ": --curve is required");
  return load_manifold(cfg.curve);
}

Vec parse_point(const RunConfig& cfg, int ambient) {
  if (cfg.point.empty()) throw ConfigError(cfg.command + ": --point is required");
  std::vector<double> xs;
  std::stringstream ss(cfg.point);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--point: cannot parse '" + item + "' as a number");
    }
  }
  if (static_cast<int>(xs.size()) != ambient) {
    throw ConfigError("--point: expected " + std::to_string(ambient) + " coordinates, got " +
                      std::to_string(xs.size()));
  }
  Vec x(ambient);
  for (int i = 0; i < ambient; ++i) x[i] = xs[static_cast<std::size_t>(i)];
  return x;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = need_curve(cfg);
  const PhiValue v = phi(*m, parse_point(cfg, m->ambient()), tol_or(cfg, kDefaultTol));
  out << "angle,raw,n_samples,err_estimate,pole_candidate,pole_margin\n";
  out << f17(v.angle.value()) << ',' << f17(v.raw) << ',' << v.n_samples << ',' << f17(v.err_estimate) << ','
      << v.pole.candidate << ',' << f17(v.pole.margin) << "\n";
  return kExitOk;
}

int cmd_grad(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = need_curve(cfg);
  const PhiAndGrad pg = phi_and_grad(*m, parse_point(cfg, m->ambient()), tol_or(cfg, kDefaultTol));
  out << "angle";
  for (int i = 0; i < m->ambient(); ++i) out << ",d" << i + 1;
  out << "\n" << f17(pg.value.angle.value());
  for (int i = 0; i < m->ambient(); ++i) out << ',' << f17(pg.grad[i]);
  out << "\n";
  return kExitOk;
}

int cmd_oracle_compare(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = need_curve(cfg);
  if (m->kind() != "circle") throw ConfigError("oracle-compare: the manifold must be the circle");
  const auto pts = oracle_sample(cfg.seed, 500);
  const double tol = tol_or(cfg, kDefaultTol);
  std::vector<std::array<double, 3>> vals(pts.size());
  parallel_for(pts.size(), cfg.workers, [&](std::size_t i) {
    const Vec x = make_vec({pts[i][0], pts[i][1], pts[i][2]});
    const auto cp = oracles::to_cylindrical(x);
    vals[i] = {phi(*m, x, tol).angle.value(), oracles::circle_phi(cp).value(),
               oracles::circle_phi_paxton(cp).value()};
  });
  std::ostringstream csv;
  csv << "x1,x2,x3,phi,circle_phi,paxton,dist_phi_oracle,dist_phi_paxton,dist_oracle_paxton\n";
  double worst[3] = {0, 0, 0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& v = vals[i];
    const double d[3] = {mod_distance(v[0], v[1]), mod_distance(v[0], v[2]), mod_distance(v[1], v[2])};
    for (int k = 0; k < 3; ++k) worst[k] = std::max(worst[k], d[k]);
    csv << f17(pts[i][0]) << ',' << f17(pts[i][1]) << ',' << f17(pts[i][2]) << ',' << f17(v[0]) << ','
        << f17(v[1]) << ',' << f17(v[2]) << ',' << f17(d[0]) << ',' << f17(d[1]) << ',' << f17(d[2]) << "\n";
  }
  csv << "# max_dist_phi_oracle," << f17(worst[0]) << "\n";
  csv << "# max_dist_phi_paxton," << f17(worst[1]) << "\n";
  csv << "# max_dist_oracle_paxton," << f17(worst[2]) << "\n";
  if (cfg.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw Error("oracle-compare: cannot write '" + cfg.out + "'");
    f << csv.str();
    out << "max_dist_phi_oracle," << f17(worst[0]) << "\n";
  }
  return kExitOk;
}

int cmd_surface(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = need_curve(cfg);
  if (cfg.out.empty()) throw ConfigError("surface: --out is required");
  const MeshFormat format = parse_mesh_format(cfg.format);
  if (cfg.grid < 4) throw ConfigError("surface: --grid must be >= 4");
  const Angle t(cfg.level);
  check_level(t);
  SurfaceOptions opt;
  opt.grid = cfg.grid;
  opt.tol = tol_or(cfg, kGridTol);
  opt.workers = cfg.workers;
  const SurfaceResult r = seifert_surface(m, t, opt);
  export_mesh(r.mesh, cfg.out, format);
  std::ostringstream csv;
  csv << mesh_stats_csv(r.stats);
  csv << "level," << f17(t.value()) << "\n";
  csv << "grid," << cfg.grid << "\n";
  csv << "grid_spacing," << f17(r.spacing) << "\n";
  csv << "tube_radius," << f17(r.eps0) << "\n";
  csv << "weld_radius," << f17(r.r_weld) << "\n";
  csv << "collar_rings," << r.r_rings.size() - 1 << "\n";
  csv << "masked_node_fraction," << f17(r.masked_fraction) << "\n";
  csv << "failed_nodes," << r.grid_failed << "\n";
  csv << "masked_tets," << r.masked_tets << "\n";
  csv << "inadmissible_tets," << r.inadmissible_tets << "\n";
  csv << "max_weld_distance," << f17(r.max_weld_distance) << "\n";
  std::ofstream f(cfg.out + ".stats.csv");
  if (!f) throw Error("surface: cannot write '" + cfg.out + ".stats.csv'");
  f << csv.str();
  out << csv.str();
  return kExitOk;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw Error("cannot write '" + p.string() + "'");
  f << text;
}

int cmd_reports(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = need_curve(cfg);
  if (cfg.out.empty()) throw ConfigError("reports: --out (output directory) is required");
  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  const double tol = tol_or(cfg, kDefaultTol);
  std::vector<double> radii;
  for (int k = 0; k < 8; ++k) radii.push_back(10.0 * std::pow(10.0, k / 7.0));
  const DecayReport decay = decay_report(*m, radii, tol, cfg.workers);
  write_file(dir / "decay.csv", decay_csv(decay));
  out << "decay_slope," << f17(decay.slope) << "\n";
  const EulerReport euler = euler_report(*m, radii, tol, cfg.workers);
  write_file(dir / "euler.csv", euler_csv(euler));
  out << "euler_slope," << f17(euler.slope) << "\n";
  const NormalFrame frame(m);
  const double eps0 = tube_radius(*m);
  if (m->dim() == 1) {
    std::vector<double> rs;
    for (double f : {0.004, 0.01, 0.04, 0.1, 0.4}) rs.push_back(f * eps0);
    std::vector<double> phis;
    for (int k = 0; k < 8; ++k) phis.push_back(k / 8.0);
    const TubeReport tube = tube_derivative_report(frame, rs, phis, 8, kGridTol, cfg.workers);
    write_file(dir / "tube.csv", tube_csv(tube));
    out << "tube_epsilon," << tube.epsilon << "\n";
    out << "tube_max_dev_from_eps," << f17(tube.max_dev_from_eps) << "\n";
  }
  const auto winding = winding_report(frame, 32, 0.5 * eps0, 64, kGridTol, cfg.workers);
  write_file(dir / "winding.csv", winding_csv(winding));
  int lo = winding.front().winding, hi = lo;
  for (const auto& w : winding) {
    lo = std::min(lo, w.winding);
    hi = std::max(hi, w.winding);
  }
  out << "winding_min," << lo << "\n" << "winding_max," << hi << "\n";
  return kExitOk;
}

int cmd_selfcheck(const RunConfig& cfg, std::ostream& out) {
  int failed = 0;
  auto check = [&](const std::string& name, double err, double bound) {
    const bool ok = err <= bound;
    failed += ok ? 0 : 1;
    out << (ok ? "PASS " : "FAIL ") << name << " err=" << f17(err) << " bound=" << f17(bound) << "\n";
  };
  const auto circle = std::make_shared<Circle>();
  const double tol = tol_or(cfg, kDefaultTol);
  check("circle inside value", mod_distance(phi(*circle, make_vec({0.5, 0, 0}), tol).angle, Angle(0.5)), 1e-9);
  check("circle outside value", mod_distance(phi(*circle, make_vec({2, 0, 0}), tol).angle, Angle(0.0)), 1e-9);
  const Vec x = make_vec({0.3, 0.4, 0.7});
  check("circle vs elliptic oracle",
        mod_distance(phi(*circle, x, tol).angle, oracles::circle_phi(oracles::to_cylindrical(x))), 1e-8);
  check("lambda n=1 closed form", std::abs(lambda_eval(1, 0.3) - 1.0 / (0.3 - 1.0)), 1e-12);
  const double k_log = elliptic::ellK(elliptic::EllipticModulus::from_k_prime(1e-4));
  check("K log asymptote", std::abs(k_log - std::log(4.0 / 1e-4)), 1e-6);
  const SeifertMesh disk = disk_mesh(16, 1024);
  const Vec y = make_vec({0.2, 0.1, 0.5});
  check("disk mesh vs potential",
        mod_distance(Angle(phi_via_seifert_mesh(disk, y)), phi(*circle, y, tol).angle), 1e-5);
  return failed == 0 ? kExitOk : kExitDomain;
}

}  // namespace

std::vector<std::array<double, 3>> oracle_sample(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 3>> pts;
  int stratum = 0;
  while (static_cast<int>(pts.size()) < count) {
    const double th = 2.0 * std::numbers::pi * u(rng);
    double r = 0.0, z = 0.0;
    switch (stratum) {
      case 0:  // generic
        r = 5.0 * u(rng);
        z = -5.0 + 10.0 * u(rng);
        break;
      case 1:  // in the plane of the circle
        r = 5.0 * u(rng);
        break;
      case 2:  // above and below the circle itself
        r = 1.0;
        z = -5.0 + 10.0 * u(rng);
        break;
      default:  // on the axis
        z = -5.0 + 10.0 * u(rng);
        break;
    }
    const double dist = std::hypot(r - 1.0, z);
    if (dist < 0.05 || std::hypot(r, z) > 5.0) continue;
    pts.push_back({r * std::cos(th), r * std::sin(th), z});
    if (stratum == 3) {
      pts.back()[0] = 0.0;
      pts.back()[1] = 0.0;
    }
    stratum = (stratum + 1) % 4;
  }
  return pts;
}

int execute(const RunConfig& cfg, std::ostream& out) {
  if (cfg.workers < 1) throw ConfigError("--workers must be >= 1");
  if (cfg.command == "eval") return cmd_eval(cfg, out);
  if (cfg.command == "grad") return cmd_grad(cfg, out);
  if (cfg.command == "oracle-compare") return cmd_oracle_compare(cfg, out);
  if (cfg.command == "surface") return cmd_surface(cfg, out);
  if (cfg.command == "reports") return cmd_reports(cfg, out);
  if (cfg.command == "selfcheck") return cmd_selfcheck(cfg, out);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solid-angle map of closed codimension-2 submanifolds"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"eval", "Evaluate Phi at --point"},
      {"grad", "Evaluate Phi and its gradient at --point"},
      {"oracle-compare", "Compare against the circle's closed forms at 500 seeded points"},
      {"surface", "Extract the Seifert surface Phi^-1(level) as a mesh"},
      {"reports", "Write decay, Euler, tube-derivative and winding CSVs"},
      {"selfcheck", "Quick consistency checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--curve", cfg.curve, "Manifold spec (JSON)");
    sub->add_option("--point", cfg.point, "Comma-separated coordinates");
    sub->add_option("--level", cfg.level, "Level t (turns)");
    sub->add_option("--grid", cfg.grid, "Grid nodes per axis");
    sub->add_option("--tol", cfg.tol, "Quadrature tolerance");
    sub->add_option("--out", cfg.out, "Output path");
    sub->add_option("--format", cfg.format, "Mesh format: obj or ply");
    sub->add_option("--workers", cfg.workers, "Worker threads");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    return execute(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"solidangle"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace solidangle::cli
