#pragma once

// Self-check suite for the lattice oracles, as run by `cslheat lattice-check`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslheat/geometry.hpp"
#include "cslheat/heating.hpp"
#include "cslheat/lattice.hpp"

namespace cslheat {

struct LatticeCheckOptions
{
  std::uint64_t seed = 1;
  std::size_t random_lattices = 100;
  std::size_t rearrangements = 10;
  double r_c = 1e-7;
  double commutator_tolerance = 1e-14;
};

struct CheckOutcome
{
  std::string name;
  bool passed = false;
  nlohmann::json details;
};

struct LatticeCheckReport
{
  std::vector<CheckOutcome> checks;
  bool all_passed = false;
};

namespace detail {

class UnitStream
{
 public:
  explicit UnitStream(std::uint64_t seed) : state_(seed) {}
  double next() noexcept { return to_unit(splitmix64(state_)); }
  double between(double lo, double hi) noexcept { return lo + (hi - lo) * next(); }
  std::size_t below(std::size_t n) noexcept
  {
    return std::min(n - 1, static_cast<std::size_t>(next() * static_cast<double>(n)));
  }

 private:
  std::uint64_t state_;
};

inline Vec3 random_vec(UnitStream& rng, double scale)
{
  return {rng.between(-scale, scale), rng.between(-scale, scale), rng.between(-scale, scale)};
}

inline double rel_diff(double a, double b)
{
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

/// Least-squares slope of log(err) against log(d).
inline double loglog_slope(const std::vector<double>& d, const std::vector<double>& err)
{
  const std::size_t n = d.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(d[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

inline CheckOutcome check_commutator(const LatticeCheckOptions& opt)
{
  UnitStream rng(opt.seed);
  double worst = 0.0;
  double worst_rearranged = 0.0;
  for (std::size_t t = 0; t < opt.random_lattices; ++t) {
    Lattice lat;
    const std::size_t n = 1 + rng.below(64);
    for (std::size_t i = 0; i < n; ++i)
      lat.sites.push_back({std::pow(10.0, rng.between(-27.0, -20.0)), random_vec(rng, 1e-5)});
    lat.n_cells = n;
    lat.cell_volume = 1e-30;
    const Wavevector k = random_vec(rng, std::pow(10.0, rng.between(4.0, 9.0)));
    const double expected = -PhysicalConstants::hbar * PhysicalConstants::hbar * lat.total_mass() * k.norm2();
    const double f = f_double_commutator(lat, k);
    worst = std::max(worst, rel_diff(f, expected));
    for (std::size_t r = 0; r < opt.rearrangements; ++r) {
      Lattice moved = lat;
      for (std::size_t i = moved.sites.size(); i > 1; --i)
        std::swap(moved.sites[i - 1].position, moved.sites[rng.below(i)].position);
      for (auto& s : moved.sites) s.position = s.position + random_vec(rng, 1e-6);
      worst_rearranged = std::max(worst_rearranged, rel_diff(f_double_commutator(moved, k), f));
    }
  }
  Lattice single;
  single.sites.push_back({1e-25, {1e-7, -2e-7, 3e-7}});
  const double single_f = f_double_commutator(single, Wavevector{1e7, 0.0, 0.0});
  const double single_expected = -PhysicalConstants::hbar * PhysicalConstants::hbar * 1e-25 * 1e14;
  const double zero_k = f_double_commutator(single, Wavevector{});
  const bool ok = worst <= opt.commutator_tolerance && worst_rearranged <= opt.commutator_tolerance &&
                  rel_diff(single_f, single_expected) <= opt.commutator_tolerance && zero_k == 0.0;
  return {"double_commutator",
          ok,
          {{"lattices", opt.random_lattices},
           {"rearrangements_per_lattice", opt.rearrangements},
           {"max_rel_error_vs_closed_form", worst},
           {"max_rel_spread_under_rearrangement", worst_rearranged},
           {"single_site_rel_error", rel_diff(single_f, single_expected)},
           {"tolerance", opt.commutator_tolerance}}};
}

inline CheckOutcome check_convergence(const LatticeCheckOptions& opt)
{
  const double L = 2.0 * opt.r_c;
  const MassModel cube{Cuboid{L, L, L, Material{"unit", 1000.0}}, {}};
  const double M = total_mass(cube);
  const Wavevector k = (1.0 / (3.0 * opt.r_c)) * Vec3{1.0, 2.0, 2.0};  // |k| = 1/r_c
  const FormFactorValue exact = mu_tilde(cube, k);
  std::vector<double> spacings, errors;
  for (double div : {10.0, 20.0, 40.0, 80.0}) {
    const double d = L / div;
    spacings.push_back(d);
    errors.push_back(std::abs(mu_tilde_discrete(build_lattice(cube, d), k) - exact) / M);
  }
  const double slope = loglog_slope(spacings, errors);
  const double err50 = std::abs(mu_tilde_discrete(build_lattice(cube, L / 50.0), k) - exact) / M;
  const bool ok = std::abs(slope - 2.0) <= 0.3 && err50 <= 1e-3;
  return {"continuum_convergence",
          ok,
          {{"edge", L},
           {"k_norm", std::sqrt(k.norm2())},
           {"spacings", spacings},
           {"rel_errors", errors},
           {"loglog_slope", slope},
           {"rel_error_at_L_over_50", err50}}};
}

inline CheckOutcome check_bound(const LatticeCheckOptions& opt)
{
  UnitStream rng(opt.seed ^ 0x5EED);
  const Material a{"a", 19320.0}, b{"b", 2329.0};
  const double r = opt.r_c;
  LayeredStack stack{2 * r, 2 * r, {{a, 0.5 * r}, {b, 0.75 * r}, {a, 0.75 * r}}};
  const std::vector<MassModel> models = {
      {Cuboid{2 * r, 3 * r, 1 * r, a}, {}},
      {Sphere{r, b}, {0.1 * r, 0.0, 0.0}},
      {Cylinder{r, 2 * r, a}, {}},
      {stack, {}},
  };
  double worst = 0.0;
  bool mass_ok = true;
  for (const auto& m : models) {
    const Lattice lat = build_lattice(m, r / 10.0);
    const double sum = lat.total_mass();
    mass_ok = mass_ok && rel_diff(sum, total_mass(m)) <= 1e-12;
    for (int i = 0; i < 200; ++i) {
      const Wavevector k = random_vec(rng, 8.0 / r);
      worst = std::max(worst, std::abs(mu_tilde_discrete(lat, k)) / sum);
    }
  }
  return {"geometry_factor_bound",
          worst <= 1.0 + 1e-12 && mass_ok,
          {{"max_abs_mu_over_mass", worst}, {"mass_rescale_exact", mass_ok}}};
}

inline CheckOutcome check_total_rate(const LatticeCheckOptions& opt)
{
  UnitStream rng(opt.seed ^ 0x707A1);
  bool ok = true;
  for (int t = 0; t < 20; ++t) {
    Lattice lat;
    const std::size_t n = 1 + rng.below(32);
    for (std::size_t i = 0; i < n; ++i) lat.sites.push_back({rng.between(1e-26, 1e-24), random_vec(rng, 1e-6)});
    const CslParams csl{std::pow(10.0, rng.between(-20.0, -8.0)), std::pow(10.0, rng.between(-8.0, -5.0))};
    ok = ok && gamma_total_discrete(lat, csl) == gamma_total(lat.total_mass(), csl);
    Lattice doubled = lat;
    for (auto& s : doubled.sites) s.mass *= 2.0;
    ok = ok && rel_diff(gamma_total_discrete(doubled, csl), 2.0 * gamma_total_discrete(lat, csl)) <= 1e-15;
  }
  return {"total_rate_matches_closed_form", ok, nlohmann::json::object()};
}

inline CheckOutcome check_pair_sum(const LatticeCheckOptions& opt)
{
  const double r = opt.r_c;
  const Material a{"a", 19320.0}, b{"b", 2329.0};
  const MassModel stack{LayeredStack{2 * r, 2 * r, {{a, r}, {b, r}}}, {}};
  const CslParams csl{1.0, r};
  const GridLattice g = build_grid_lattice(stack, r / 5.0);
  const double factorised = gamma_cm_pair_sum(g, csl);
  const double direct = gamma_cm_pair_sum(expand(g), csl);
  const double mu_err = std::abs(mu_tilde_discrete(g, Wavevector{3e6, -2e6, 5e6}) -
                                 mu_tilde_discrete(expand(g), Wavevector{3e6, -2e6, 5e6})) /
                        g.total_mass();
  const double diff = rel_diff(factorised, direct);
  return {"factorised_pair_sum",
          diff <= 1e-12 && mu_err <= 1e-12,
          {{"rel_difference", diff}, {"mu_abs_difference_over_mass", mu_err}}};
}

}  // namespace detail

/// Runs every lattice check. Deterministic for a given seed.
inline LatticeCheckReport run_lattice_check(const LatticeCheckOptions& opt = {})
{
  LatticeCheckReport rep;
  rep.checks.push_back(detail::check_commutator(opt));
  rep.checks.push_back(detail::check_convergence(opt));
  rep.checks.push_back(detail::check_bound(opt));
  rep.checks.push_back(detail::check_total_rate(opt));
  rep.checks.push_back(detail::check_pair_sum(opt));
  rep.all_passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  return rep;
}

inline nlohmann::json to_json(const LatticeCheckReport& rep)
{
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
  return {{"all_passed", rep.all_passed}, {"checks", checks}};
}

}  // namespace cslheat
