#pragma once

// Studies built on the heating rates: thermal leakage, r_c scans, layered
// test-mass design at fixed mass, discriminability of CSL heating against
// thermal leakage, and lambda upper bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cslheat/core.hpp"
#include "cslheat/geometry.hpp"
#include "cslheat/heating.hpp"
#include "cslheat/parallel.hpp"

namespace cslheat {

struct ThermalModel
{
  double gamma_th = 0.0;     // damping rate, 1/s
  double temperature = 0.0;  // K

  bool valid() const noexcept { return gamma_th >= 0.0 && temperature >= 0.0; }
  bool operator==(const ThermalModel&) const = default;
};

/// gamma_th k_B T. Reads no geometry.
inline double thermal_gain(const ThermalModel& thermal) noexcept
{
  return thermal.gamma_th * PhysicalConstants::k_boltzmann * thermal.temperature;
}

// ---------------------------------------------------------------------------
// r_c scans

struct ScanRow
{
  double value = 0.0;  // grid coordinate
  double gamma_cm_per_lambda = 0.0;  // J
  double reduction_factor = 0.0;
  std::optional<double> lambda_bound;  // 1/s
  bool failed = false;
  std::string error;
};

struct ScanTable
{
  std::string axis;
  std::vector<ScanRow> rows;
};

/// Upper bound on lambda from an observed centre-of-mass heating power, using
/// Gamma_cm linear in lambda. Returns +inf when the per-lambda rate underflows.
inline double lambda_bound_from_rate(double observed_power, double gamma_cm_per_lambda)
{
  if (observed_power == 0.0) return 0.0;
  if (!(gamma_cm_per_lambda > std::numeric_limits<double>::min()))
    return std::numeric_limits<double>::infinity();
  return observed_power / gamma_cm_per_lambda;
}

inline double lambda_bound(double observed_power, const MassModel& model, double r_c, const QuadratureSpec& quad)
{
  if (!(observed_power >= 0.0)) throw ValidationError("observed_power", "must be non-negative");
  if (observed_power == 0.0) return 0.0;
  const double per_lambda = gamma_cm(model, CslParams{1.0, r_c}, quad).value;
  return lambda_bound_from_rate(observed_power, per_lambda);
}

/// Gamma_cm / lambda and the reduction factor at each r_c of a strictly
/// increasing grid. Points whose quadrature fails are marked, not dropped.
inline ScanTable scan_rc(const MassModel& model, const std::vector<double>& rc_grid, const QuadratureSpec& quad,
                         std::optional<double> observed_power = std::nullopt, unsigned threads = 0)
{
  for (std::size_t i = 0; i < rc_grid.size(); ++i) {
    if (!(rc_grid[i] > 0.0)) throw ValidationError("task.rc_grid", "values must be positive");
    if (i > 0 && !(rc_grid[i] > rc_grid[i - 1]))
      throw ValidationError("task.rc_grid", "values must be strictly increasing");
  }
  ScanTable table;
  table.axis = "r_c";
  table.rows.resize(rc_grid.size());
  parallel_for(rc_grid.size(), threads, [&](std::size_t i) {
    ScanRow& row = table.rows[i];
    row.value = rc_grid[i];
    try {
      const CmRate r = gamma_cm(model, CslParams{1.0, rc_grid[i]}, quad);
      row.gamma_cm_per_lambda = r.value;
      row.reduction_factor = r.reduction;
      if (observed_power) row.lambda_bound = lambda_bound_from_rate(*observed_power, r.value);
    } catch (const QuadratureNotConverged& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return table;
}

// ---------------------------------------------------------------------------
// Layered designs

/// Alternating A/B stack of `n_periods` bilayers, A at the bottom, with all A
/// slabs of one thickness and all B slabs of another.
struct LayerDesign
{
  std::size_t n_periods = 0;
  Material material_a;
  Material material_b;
  std::vector<double> layer_thicknesses;  // 2 * n_periods slabs, bottom to top
  double lx = 0.0, ly = 0.0;
  double total_mass = 0.0;

  /// Mass in the even (A) or odd (B) slabs.
  double slab_mass(std::size_t parity) const noexcept
  {
    const double rho = parity == 0 ? material_a.density : material_b.density;
    double t = 0.0;
    for (std::size_t i = parity; i < layer_thicknesses.size(); i += 2) t += layer_thicknesses[i];
    return rho * t * lx * ly;
  }
  double mass_a() const noexcept { return slab_mass(0); }
  double mass_b() const noexcept { return slab_mass(1); }
  double height() const noexcept
  {
    double h = 0.0;
    for (double t : layer_thicknesses) h += t;
    return h;
  }
  double mean_layer_thickness() const noexcept
  {
    return layer_thicknesses.empty() ? 0.0 : height() / static_cast<double>(layer_thicknesses.size());
  }
};

/// Shared constraints of a family of designs: total mass and mass_A / mass_B.
struct LayeringSetup
{
  Material material_a;
  Material material_b;
  double mass_ratio = 1.0;  // mass of A / mass of B
  double total_mass = 0.0;  // kg
  double lx = 0.0, ly = 0.0;
  double min_layer_thickness = 0.0;  // envelope; 0 means unconstrained
  double max_height = std::numeric_limits<double>::infinity();
};

inline LayerDesign make_design(const LayeringSetup& setup, std::size_t n_periods)
{
  if (n_periods == 0) throw InfeasibleDesign("a design needs at least one A/B period");
  if (!(setup.total_mass > 0.0) || !(setup.mass_ratio > 0.0) || !(setup.lx > 0.0) || !(setup.ly > 0.0) ||
      !(setup.material_a.density > 0.0) || !(setup.material_b.density > 0.0))
    throw InfeasibleDesign("layering setup needs positive mass, mass ratio, cross-section and densities");
  const double area = setup.lx * setup.ly;
  const double mass_a = setup.total_mass * setup.mass_ratio / (1.0 + setup.mass_ratio);
  const double mass_b = setup.total_mass / (1.0 + setup.mass_ratio);
  const double n = static_cast<double>(n_periods);
  const double t_a = mass_a / (setup.material_a.density * area) / n;
  const double t_b = mass_b / (setup.material_b.density * area) / n;

  LayerDesign d;
  d.n_periods = n_periods;
  d.material_a = setup.material_a;
  d.material_b = setup.material_b;
  d.lx = setup.lx;
  d.ly = setup.ly;
  d.total_mass = setup.total_mass;
  d.layer_thicknesses.reserve(2 * n_periods);
  for (std::size_t i = 0; i < n_periods; ++i) {
    d.layer_thicknesses.push_back(t_a);
    d.layer_thicknesses.push_back(t_b);
  }
  return d;
}

inline bool within_envelope(const LayeringSetup& setup, const LayerDesign& d) noexcept
{
  const double thinnest = *std::min_element(d.layer_thicknesses.begin(), d.layer_thicknesses.end());
  return thinnest >= setup.min_layer_thickness && d.height() <= setup.max_height;
}

inline MassModel to_mass_model(const LayerDesign& d)
{
  LayeredStack s;
  s.lx = d.lx;
  s.ly = d.ly;
  for (std::size_t i = 0; i < d.layer_thicknesses.size(); ++i)
    s.layers.push_back({i % 2 == 0 ? d.material_a : d.material_b, d.layer_thicknesses[i]});
  return MassModel{s, {}};
}

struct DesignCandidate
{
  std::size_t n_periods = 0;
  double gamma_cm = 0.0;  // W
  double mean_layer_thickness = 0.0;
};

struct OptimizationResult
{
  LayerDesign best;
  double gamma_cm = 0.0;
  std::vector<DesignCandidate> candidates;  // in increasing n_periods
};

/// Exhaustive search over period counts in [n_min, n_max]. Candidates within
/// `tie_tolerance` (relative) of the maximum count as ties and the one with
/// the fewest periods wins.
inline OptimizationResult optimize_layers(const LayeringSetup& setup, std::size_t n_min, std::size_t n_max,
                                          const CslParams& csl, const QuadratureSpec& quad,
                                          double tie_tolerance = 1e-9, unsigned threads = 0)
{
  if (n_min == 0 || n_max < n_min) throw InfeasibleDesign("empty layer-count range");
  std::vector<LayerDesign> designs;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    LayerDesign d = make_design(setup, n);
    if (within_envelope(setup, d)) designs.push_back(std::move(d));
  }
  if (designs.empty()) throw InfeasibleDesign("no layer count satisfies the thickness/height envelope");

  std::vector<double> rates(designs.size());
  parallel_for(designs.size(), threads,
               [&](std::size_t i) { rates[i] = gamma_cm(to_mass_model(designs[i]), csl, quad).value; });

  OptimizationResult out;
  const double best_rate = *std::max_element(rates.begin(), rates.end());
  std::size_t best = designs.size();
  for (std::size_t i = 0; i < designs.size(); ++i) {
    out.candidates.push_back({designs[i].n_periods, rates[i], designs[i].mean_layer_thickness()});
    if (best == designs.size() && rates[i] >= best_rate * (1.0 - tie_tolerance)) best = i;
  }
  out.best = designs[best];
  out.gamma_cm = rates[best];
  return out;
}

// ---------------------------------------------------------------------------
// Discriminability

struct DesignPower
{
  std::size_t n_periods = 0;
  double gamma_cm = 0.0;
  double saturation_power = 0.0;  // gamma_cm + gamma_th
};

struct DiscriminabilityReport
{
  std::vector<DesignPower> designs;
  double gamma_th = 0.0;
  double spread = 0.0;  // (max - min) / mean of gamma_cm
  double threshold = 0.1;
  bool discriminating = false;
};

inline void check_design_family(const std::vector<LayerDesign>& designs, double rel = 1e-9)
{
  if (designs.size() < 2) throw ConstraintViolation("discriminability needs at least two designs");
  const auto& ref = designs.front();
  const double ratio_ref = ref.mass_a() / ref.mass_b();
  for (std::size_t i = 0; i < designs.size(); ++i) {
    const auto& d = designs[i];
    const double m = d.mass_a() + d.mass_b();
    if (std::abs(m - ref.mass_a() - ref.mass_b()) > rel * m)
      throw ConstraintViolation("design " + std::to_string(i) + " differs in total mass");
    if (std::abs(d.mass_a() / d.mass_b() - ratio_ref) > rel * ratio_ref)
      throw ConstraintViolation("design " + std::to_string(i) + " differs in material mass ratio");
  }
}

inline DiscriminabilityReport discriminability_report(const std::vector<LayerDesign>& designs,
                                                      const CslParams& csl, const ThermalModel& thermal,
                                                      const QuadratureSpec& quad, double threshold = 0.1,
                                                      unsigned threads = 0)
{
  check_design_family(designs);
  DiscriminabilityReport rep;
  rep.threshold = threshold;
  rep.gamma_th = thermal_gain(thermal);
  rep.designs.resize(designs.size());
  parallel_for(designs.size(), threads, [&](std::size_t i) {
    const double g = gamma_cm(to_mass_model(designs[i]), csl, quad).value;
    rep.designs[i] = {designs[i].n_periods, g, g + rep.gamma_th};
  });
  double lo = rep.designs.front().gamma_cm, hi = lo;
  CompensatedSum sum;
  for (const auto& d : rep.designs) {
    lo = std::min(lo, d.gamma_cm);
    hi = std::max(hi, d.gamma_cm);
    sum.add(d.gamma_cm);
  }
  const double mean = sum.value() / static_cast<double>(rep.designs.size());
  rep.spread = mean > 0.0 ? (hi - lo) / mean : 0.0;
  rep.discriminating = rep.spread > threshold;
  return rep;
}

}  // namespace cslheat
