// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cslheat/cslheat.hpp"

using namespace cslheat;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string g_specs;
std::string g_cli;

ExperimentSpec spec(const std::string& name) { return load_spec(g_specs + "/" + name); }

struct Regression
{
  std::string name;
  ExperimentSpec spec;
};

std::vector<Regression> regression_suite()
{
  return {{"point", spec("point.json")},
          {"cube 0.1 r_c", spec("cube_small.json")},
          {"cube 10 r_c", spec("cube_large.json")},
          {"plate 1mm x 1mm x 10um", spec("plate.json")},
          {"16-layer stack", spec("stack16.json")}};
}

// 1 -------------------------------------------------------------------------
Outcome closed_form_total()
{
  const double g = gamma_total(1.0, {1e-16, 1e-7});
  const double r = rel(g, 2.98e-17);
  return {r <= 1e-3, fmt("gamma_total = %.10e W, rel. difference to 2.98e-17 = %.3e (tolerance 1e-3)", g, r)};
}

// 2 -------------------------------------------------------------------------
Outcome point_mass_reduction()
{
  const ExperimentSpec s = spec("point.json");
  const double cm = gamma_cm(s.mass_model, s.csl, s.quadrature).value;
  const double total = gamma_total(total_mass(s.mass_model), s.csl);
  const double r = rel(cm, total);
  return {r <= 1e-9, fmt("gamma_cm / gamma_total - 1 = %.3e", r)};
}

// 3 -------------------------------------------------------------------------
Outcome geometry_invariants()
{
  std::mt19937_64 gen(20240601);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  const double r_c = 1e-7;
  auto len = [&] { return r_c * std::pow(10.0, uni(-1.5, 1.5)); };
  auto mat = [&] { return Material{"m", uni(100.0, 25000.0)}; };
  auto vec = [&](double s) { return Vec3{uni(-s, s), uni(-s, s), uni(-s, s)}; };

  std::size_t pairs = 0;
  double worst_norm = 0.0, worst_bound = 0.0, worst_herm = 0.0, worst_shift = 0.0;
  for (int i = 0; i < 12000; ++i) {
    MassModel m;
    m.offset = vec(5 * r_c);
    switch (i % 5) {
      case 0: m.shape = PointMass{uni(1e-20, 1.0), vec(r_c)}; break;
      case 1: m.shape = Cuboid{len(), len(), len(), mat()}; break;
      case 2: m.shape = Sphere{len(), mat()}; break;
      case 3: m.shape = Cylinder{len(), len(), mat()}; break;
      default: {
        LayeredStack s{len(), len(), {}};
        const int n = 1 + i % 9;
        for (int l = 0; l < n; ++l) s.layers.push_back({mat(), 0.2 * len()});
        m.shape = s;
      }
    }
    const double M = total_mass(m);
    const Wavevector k = (std::pow(10.0, uni(-2.0, 2.0)) / r_c) * vec(1.0);
    const Complex v = mu_tilde(m, k);
    const Vec3 a = vec(10 * r_c);
    worst_norm = std::max(worst_norm, std::abs(mu_tilde(m, {}) - M) / M);
    worst_bound = std::max(worst_bound, std::abs(v) / M - 1.0);
    worst_herm = std::max(worst_herm, std::abs(mu_tilde(m, -k) - std::conj(v)) / M);
    worst_shift = std::max(worst_shift,
                           std::abs(mu_tilde(translated(m, a), k) - v * std::exp(Complex(0.0, -k.dot(a)))) / M);
    ++pairs;
  }
  const bool ok = pairs >= 10000 && worst_norm <= 1e-12 && worst_bound <= 1e-12 && worst_herm <= 1e-12 &&
                  worst_shift <= 1e-12;
  return {ok, std::to_string(pairs) + " pairs; " +
                  fmt("max |mu(0)-M|/M = %.1e, max |mu|/M - 1 = %.1e, hermitian %.1e, translation %.1e", worst_norm,
                      worst_bound, worst_herm, worst_shift)};
}

// 4 -------------------------------------------------------------------------
Outcome double_commutator()
{
  std::mt19937_64 gen(4);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  double worst = 0.0, worst_moved = 0.0;
  const double hbar = PhysicalConstants::hbar;
  for (int t = 0; t < 100; ++t) {
    Lattice lat;
    const int n = 1 + static_cast<int>(uni(0.0, 200.0));
    for (int i = 0; i < n; ++i)
      lat.sites.push_back({std::pow(10.0, uni(-27.0, -18.0)), {uni(-1e-3, 1e-3), uni(-1e-3, 1e-3), uni(-1e-3, 1e-3)}});
    lat.n_cells = lat.sites.size();
    lat.cell_volume = 1e-29;
    const double kn = std::pow(10.0, uni(2.0, 10.0));
    const Wavevector k{uni(-kn, kn), uni(-kn, kn), uni(-kn, kn)};
    const double f = f_double_commutator(lat, k);
    worst = std::max(worst, rel(f, -hbar * hbar * lat.total_mass() * k.norm2()));
    for (int r = 0; r < 10; ++r) {
      Lattice moved = lat;
      std::shuffle(moved.sites.begin(), moved.sites.end(), gen);
      for (auto& s : moved.sites) s.position = {uni(-1.0, 1.0), uni(-1.0, 1.0), uni(-1.0, 1.0)};
      worst_moved = std::max(worst_moved, rel(f_double_commutator(moved, k), f));
    }
  }
  return {worst <= 1e-14 && worst_moved <= 1e-14,
          fmt("100 lattices x 10 rearrangements; max rel. error %.2e, max spread %.2e", worst, worst_moved)};
}

// 5 -------------------------------------------------------------------------
struct Estimate
{
  double value;
  double error;  // one standard error or equivalent error estimate
};

/// Gaussian-weighted pair sum on a product lattice of spacing r_c/100, with
/// the Richardson estimate |S(d) - S(2d)| / 3 of its O(d^2) discretisation
/// error.
Estimate lattice_rate(const MassModel& m, const CslParams& csl)
{
  if (const auto* p = std::get_if<PointMass>(&m.shape)) {
    Lattice one;
    one.sites.push_back({p->mass, p->position});
    return {gamma_cm_pair_sum(one, csl), 0.0};
  }
  const double d = csl.r_c / 100.0;
  const double fine = gamma_cm_pair_sum(build_grid_lattice(m, d), csl);
  const double coarse = gamma_cm_pair_sum(build_grid_lattice(m, 2 * d), csl);
  return {fine, std::abs(fine - coarse) / 3.0};
}

Outcome oracle_triangle()
{
  bool ok = true;
  std::ostringstream detail;
  for (const auto& g : regression_suite()) {
    const auto& s = g.spec;
    QuadratureSpec q = s.quadrature;
    q.mc_samples = 200000;
    const CmRate quad = gamma_cm(s.mass_model, s.csl, q);
    const McEstimate mc = gamma_cm_mc(s.mass_model, s.csl, q);
    const Estimate lat = lattice_rate(s.mass_model, s.csl);
    const Estimate est[3] = {{quad.value, quad.rel_error * quad.value}, {mc.value, mc.std_error}, lat};
    const char* names[3] = {"quad", "mc", "lattice"};
    double worst_z = 0.0, worst_rel = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double diff = std::abs(est[i].value - est[j].value);
        const double sigma = std::hypot(est[i].error, est[j].error);
        const double z = sigma > 0.0 ? diff / sigma : (diff == 0.0 ? 0.0 : INFINITY);
        const double r = diff / std::abs(est[i].value);
        worst_z = std::max(worst_z, z);
        worst_rel = std::max(worst_rel, r);
        if (!(z <= 3.0 && r <= 1e-3)) {
          ok = false;
          detail << " [" << g.name << ": " << names[i] << " vs " << names[j] << " disagree]";
        }
      }
    detail << "\n    " << g.name << fmt(": quad %.6e, mc %.6e +- %.1e, lattice %.6e", quad.value, mc.value,
                                         mc.std_error, lat.value)
           << fmt(" +- %.1e; max z %.2f, max rel %.1e", lat.error, worst_z, worst_rel);
  }
  return {ok, "5 geometries, 2e5 MC samples, lattice d = r_c/100" + detail.str()};
}

// 6 -------------------------------------------------------------------------
Outcome splitting_and_sign()
{
  bool ok = true;
  std::ostringstream detail;
  double large_fraction = 0.0;
  for (const auto& g : regression_suite()) {
    const auto& s = g.spec;
    const HeatingReport r = heating_report(s.mass_model, s.csl, s.quadrature);
    const InternalRate in = gamma_internal(s.mass_model, s.csl, s.quadrature);
    const bool split =
        r.internal_clamped ? r.gamma_int == 0.0 : rel(r.gamma_cm + r.gamma_int, r.gamma_total) <= 1e-15;
    ok = ok && split && r.gamma_int >= 0.0 && in.value >= 0.0 && in.value == r.gamma_int;
    if (g.name == "cube 10 r_c") large_fraction = r.gamma_int / r.gamma_total;
    detail << " " << g.name << fmt(": int/total = %.6f", r.gamma_int / r.gamma_total)
           << (r.internal_clamped ? " (clamped);" : ";");
  }
  ok = ok && large_fraction >= 0.9;
  return {ok, detail.str()};
}

// 7 -------------------------------------------------------------------------
Outcome discrete_convergence()
{
  const double r_c = 1e-7, L = 2 * r_c;
  const MassModel cube{Cuboid{L, L, L, Material{"silicon", 2329.0}}, {}};
  const double M = total_mass(cube);
  const Wavevector k = (1.0 / (7.0 * r_c)) * Vec3{2.0, 3.0, 6.0};  // |k| = 1/r_c
  const Complex exact = mu_tilde(cube, k);
  std::vector<double> ds, es;
  for (double div : {10.0, 20.0, 40.0, 80.0}) {
    ds.push_back(L / div);
    es.push_back(std::abs(mu_tilde_discrete(build_lattice(cube, L / div), k) - exact) / M);
  }
  const double slope = detail::loglog_slope(ds, es);
  return {std::abs(slope - 2.0) <= 0.3,
          fmt("log-log slope %.4f over d = L/10..L/80 (errors %.2e -> %.2e)", slope, es.front(), es.back())};
}

// 8 -------------------------------------------------------------------------
Outcome layering_enhancement()
{
  const ExperimentSpec s = spec("optimize.json");
  const LayeringSetup& setup = *s.task.layering;
  const std::size_t n_max = s.task.n_layers_max;
  const OptimizationResult opt = optimize_layers(setup, s.task.n_layers_min, n_max, s.csl, s.quadrature);

  // exhaustive oracle over the same range, evaluated independently
  std::size_t oracle_n = 0;
  double oracle_best = -1.0, single = 0.0;
  for (std::size_t n = s.task.n_layers_min; n <= n_max; ++n) {
    const double g = gamma_cm(to_mass_model(make_design(setup, n)), s.csl, s.quadrature).value;
    if (n == 1) single = g;
    if (g > oracle_best) {
      oracle_best = g;
      oracle_n = n;
    }
  }
  const double r_c = s.csl.r_c;
  const double t_a = opt.best.layer_thicknesses[0], t_b = opt.best.layer_thicknesses[1];
  const double worst_ratio = std::max({t_a / r_c, r_c / t_a, t_b / r_c, r_c / t_b});
  const bool argmax = opt.best.n_periods == oracle_n && opt.gamma_cm == oracle_best;
  const bool enhanced = opt.gamma_cm > single;
  const bool thickness = worst_ratio <= 3.0;
  std::ostringstream d;
  d << "contrast " << setup.material_a.density / setup.material_b.density << ", best " << opt.best.n_periods
    << " periods (oracle " << oracle_n << ")"
    << fmt(", gain over single slab %.3f, layer thicknesses %.4f / %.4f r_C", opt.gamma_cm / single, t_a / r_c,
           t_b / r_c)
    << "; argmax " << (argmax ? "ok" : "WRONG") << ", enhancement " << (enhanced ? "ok" : "MISSING")
    << ", thickness within factor 3 " << (thickness ? "ok" : "NO");
  return {argmax && enhanced && thickness, d.str()};
}

// 9 -------------------------------------------------------------------------
Outcome discriminability()
{
  const ExperimentSpec s = spec("discriminate.json");
  const LayeringSetup& setup = *s.task.layering;
  std::vector<LayerDesign> designs;
  for (std::size_t n : s.task.designs) designs.push_back(make_design(setup, n));
  const auto rep = discriminability_report(designs, s.csl, *s.thermal, s.quadrature);
  bool thermal_equal = true;
  for (std::size_t i = 0; i < designs.size(); ++i)
    thermal_equal = thermal_equal && rep.designs[i].saturation_power - rep.designs[i].gamma_cm ==
                                         rep.designs[0].saturation_power - rep.designs[0].gamma_cm;
  const double t16 = designs.back().mean_layer_thickness() / s.csl.r_c;
  return {rep.spread > 0.1 && thermal_equal,
          fmt("designs 1 vs %.0f periods, layer thickness %.3f r_C, spread %.4f, thermal gain %.6e W", static_cast<double>(designs.back().n_periods), t16, rep.spread, rep.gamma_th) +
              (thermal_equal ? " (identical)" : " (DIFFERS)")};
}

// 10 ------------------------------------------------------------------------
Outcome lambda_round_trip()
{
  std::mt19937_64 gen(10);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  auto suite = regression_suite();
  suite.push_back({"sphere", spec("point.json")});
  suite.back().spec.mass_model = {Sphere{3e-7, {"gold", 19320.0}}, {}};
  suite.push_back({"cylinder", spec("point.json")});
  suite.back().spec.mass_model = {Cylinder{2e-7, 5e-6, {"silica", 2203.0}}, {}};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto& s = suite[i % suite.size()].spec;
    const double lambda0 = std::pow(10.0, uni(-20.0, -4.0));
    const double r_c = std::pow(10.0, uni(-8.0, -6.0));
    const double p = gamma_cm(s.mass_model, {lambda0, r_c}, s.quadrature).value;
    worst = std::max(worst, rel(lambda_bound(p, s.mass_model, r_c, s.quadrature), lambda0));
  }
  return {worst <= 1e-9, fmt("10 random (lambda0, r_c, geometry); max rel. error %.2e", worst)};
}

// 11 ------------------------------------------------------------------------
std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_reproducibility()
{
  const fs::path dir = fs::temp_directory_path() / "cslheat_acceptance";
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"mu", "mu_cube.json"},           {"heat --mc", "stack16.json"},     {"heat --csv", "plate.json"},
      {"scan", "scan_stack.json"},      {"optimize", "optimize.json"},     {"discriminate", "discriminate.json"},
      {"bound", "bound.json"},          {"lattice-check", "point.json"}};
  bool ok = true;
  std::ostringstream d;
  int idx = 0;
  for (const auto& [cmd, file] : runs) {
    std::string out[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path target = dir / ("run" + std::to_string(idx) + "_" + std::to_string(rep) + ".out");
      fs::remove(target);
      const std::string line = "\"" + g_cli + "\" " + cmd + " --spec \"" + g_specs + "/" + file +
                               "\" --seed 1 --out \"" + target.string() + "\"";
      const int rc = std::system(line.c_str());
      if (rc != 0) {
        ok = false;
        d << " [" << cmd << " exited with status " << rc << "]";
      }
      out[rep] = slurp(target);
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    ok = ok && same;
    d << " " << cmd << (same ? " identical" : " DIFFERENT") << " (" << out[0].size() << " B);";
    ++idx;
  }
  return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"cslheat acceptance run"};
  app.add_option("--cli", g_cli, "path to the cslheat executable")->required();
  app.add_option("--specs", g_specs, "directory holding the regression specs")->required();
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form total rate", closed_form_total},
      {"point-mass reduction", point_mass_reduction},
      {"geometry-factor invariants", geometry_invariants},
      {"double-commutator identity", double_commutator},
      {"oracle triangle", oracle_triangle},
      {"splitting and sign", splitting_and_sign},
      {"discrete-continuum convergence", discrete_convergence},
      {"layering enhancement", layering_enhancement},
      {"discriminability", discriminability},
      {"lambda-bound round trip", lambda_round_trip},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-32s %s  (%.1f s) %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
