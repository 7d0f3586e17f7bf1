#pragma once

// CSL heating rates of a rigid body:
//
//   total            G     = (3/4) hbar^2 lambda M / (m_N^2 r_c^2)
//   centre of mass   G_cm  = lambda r_c^3 hbar^2 / (2 M pi^{3/2} m_N^2)
//                            \int d^3k exp(-r_c^2 k^2) k^2 |mu(k)|^2
//   internal         G_int = G - G_cm
//
// In u = r_c k the centre-of-mass rate is G times the reduction factor
//
//   R = \int d^3u exp(-u^2) u^2 |mu(u / r_c) / M|^2 / ((3/2) pi^{3/2}),
//
// which is what both integrators below evaluate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <boost/random/sobol.hpp>

#include "cslheat/core.hpp"
#include "cslheat/geometry.hpp"
#include "cslheat/parallel.hpp"
#include "cslheat/quadrature.hpp"
#include "cslheat/summation.hpp"

namespace cslheat {

inline constexpr double gaussian_second_moment = 1.5 * pi_three_halves;  // \int d^3u e^{-u^2} u^2

/// Closed-form total energy gain rate in W. Geometry independent.
inline double gamma_total(double mass, const CslParams& csl) noexcept
{
  constexpr double h2 = PhysicalConstants::hbar * PhysicalConstants::hbar;
  constexpr double mn2 = PhysicalConstants::m_nucleon * PhysicalConstants::m_nucleon;
  return 0.75 * (h2 / mn2) * mass / (csl.r_c * csl.r_c) * csl.lambda_rate;
}

struct ReductionFactor
{
  double value = 0.0;
  double rel_error = 0.0;  // quadrature error estimate
};

struct CmRate
{
  double value = 0.0;  // W
  double reduction = 0.0;
  double rel_error = 0.0;
};

struct InternalRate
{
  double value = 0.0;  // W
  bool clamped = false;
};

struct HeatingReport
{
  double gamma_total = 0.0;
  double gamma_cm = 0.0;
  double gamma_int = 0.0;
  double reduction_factor = 0.0;
  double quadrature_estimate_error = 0.0;
  bool internal_clamped = false;
};

struct McEstimate
{
  double value = 0.0;
  double std_error = 0.0;
  double reduction = 0.0;
  double reduction_std_error = 0.0;
  std::uint64_t samples = 0;
};

namespace detail {

struct Moments
{
  double a = 0.0;  // \int du e^{-u^2} g(u)
  double b = 0.0;  // \int du e^{-u^2} u^2 g(u)
  double rel_error = 0.0;
};

inline void check_converged(const QuadratureResult& r, const QuadratureSpec& quad, const char* what)
{
  const double rel = r.value != 0.0 ? r.abs_error / std::abs(r.value) : r.abs_error;
  if (!r.converged && rel > 10.0 * quad.rel_tol)
    throw QuadratureNotConverged(std::string("k-space quadrature did not converge: ") + what, r.value, rel);
}

inline double relative(const QuadratureResult& r)
{
  return r.value != 0.0 ? r.abs_error / std::abs(r.value) : 0.0;
}

/// Panel width limit for a body dimension `length`: half the oscillation
/// period 2 pi r_c / length of its factor in u.
inline double panel_width(double length, double r_c)
{
  constexpr double coarse = 0.5;
  if (!(length > 0.0)) return coarse;
  return std::min(coarse, pi * r_c / length);
}

/// Even 1D moments over [-u_max, u_max] of a squared factor g(u).
template <class G>
Moments axis_moments(G&& g, double length, double r_c, const QuadratureSpec& quad)
{
  AdaptiveOptions opt;
  opt.rel_tol = quad.rel_tol;
  opt.max_initial_panel = panel_width(length, r_c);
  const auto ra = integrate_adaptive([&](double u) { return std::exp(-u * u) * g(u); }, 0.0, quad.u_max, opt);
  check_converged(ra, quad, "axis moment A");
  const auto rb =
      integrate_adaptive([&](double u) { return u * u * std::exp(-u * u) * g(u); }, 0.0, quad.u_max, opt);
  check_converged(rb, quad, "axis moment B");
  return {2.0 * ra.value, 2.0 * rb.value, relative(ra) + relative(rb)};
}

inline double squared(Complex z) noexcept { return std::norm(z); }

}  // namespace detail

/// Gamma_cm / Gamma for `model` at correlation length r_c, by adaptive
/// quadrature. Separable bodies reduce to products of 1D moments; spheres and
/// cylinders use their rotational symmetry.
inline ReductionFactor reduction_factor(const MassModel& model, double r_c, const QuadratureSpec& quad)
{
  using detail::axis_moments;
  using detail::squared;
  const Vec3 ext = extent(model);

  auto combine = [](const detail::Moments& mx, const detail::Moments& my, const detail::Moments& mz) {
    const double integral = mx.b * my.a * mz.a + mx.a * my.b * mz.a + mx.a * my.a * mz.b;
    return ReductionFactor{integral / gaussian_second_moment, mx.rel_error + my.rel_error + mz.rel_error};
  };

  if (std::holds_alternative<PointMass>(model.shape)) {
    const auto m = axis_moments([](double) { return 1.0; }, 0.0, r_c, quad);
    return combine(m, m, m);
  }
  if (is_separable(model)) {
    auto axis = [&](Axis ax, double len) {
      return axis_moments([&](double u) { return squared(separable_factors(model, ax, u / r_c)); }, len, r_c,
                          quad);
    };
    return combine(axis(Axis::x, ext.x), axis(Axis::y, ext.y), axis(Axis::z, ext.z));
  }
  if (const auto* s = std::get_if<Sphere>(&model.shape)) {
    const double scale = s->radius / r_c;
    AdaptiveOptions opt;
    opt.rel_tol = quad.rel_tol;
    opt.max_initial_panel = detail::panel_width(2.0 * s->radius, r_c);
    const auto r = integrate_adaptive(
        [&](double u) {
          const double k = sphere_kernel(u * scale);
          const double u2 = u * u;
          return u2 * u2 * std::exp(-u2) * k * k;
        },
        0.0, quad.u_max, opt);
    detail::check_converged(r, quad, "sphere radial moment");
    return {4.0 * pi * r.value / gaussian_second_moment, detail::relative(r)};
  }
  const auto& c = std::get<Cylinder>(model.shape);
  const double scale = c.radius / r_c;
  AdaptiveOptions opt;
  opt.rel_tol = quad.rel_tol;
  opt.max_initial_panel = detail::panel_width(2.0 * c.radius, r_c);
  auto radial = [&](int power) {
    const auto r = integrate_adaptive(
        [&](double u) {
          const double j = jinc(u * scale);
          return std::pow(u, power) * std::exp(-u * u) * j * j;
        },
        0.0, quad.u_max, opt);
    detail::check_converged(r, quad, "cylinder radial moment");
    return r;
  };
  const auto a_perp = radial(1);
  const auto b_perp = radial(3);
  const auto mz = axis_moments([&](double u) { return squared(sinc(0.5 * u / r_c * c.height)); }, c.height, r_c,
                               quad);
  const double integral = 2.0 * pi * (b_perp.value * mz.a + a_perp.value * mz.b);
  return {integral / gaussian_second_moment, detail::relative(a_perp) + detail::relative(b_perp) + mz.rel_error};
}

inline CmRate gamma_cm(const MassModel& model, const CslParams& csl, const QuadratureSpec& quad)
{
  const ReductionFactor r = reduction_factor(model, csl.r_c, quad);
  return {gamma_total(total_mass(model), csl) * r.value, r.value, r.rel_error};
}

inline InternalRate gamma_internal(const MassModel& model, const CslParams& csl, const QuadratureSpec& quad)
{
  const double total = gamma_total(total_mass(model), csl);
  const double cm = gamma_cm(model, csl, quad).value;
  const double diff = total - cm;
  if (diff >= 0.0) return {diff, false};
  if (diff >= -10.0 * quad.rel_tol * total) return {0.0, true};
  throw QuadratureNotConverged("centre-of-mass rate exceeds the total rate beyond tolerance", diff,
                               -diff / total);
}

inline HeatingReport heating_report(const MassModel& model, const CslParams& csl, const QuadratureSpec& quad)
{
  HeatingReport rep;
  rep.gamma_total = gamma_total(total_mass(model), csl);
  const ReductionFactor r = reduction_factor(model, csl.r_c, quad);
  rep.reduction_factor = r.value;
  rep.quadrature_estimate_error = r.rel_error;
  rep.gamma_cm = rep.gamma_total * r.value;
  const double diff = rep.gamma_total - rep.gamma_cm;
  if (diff >= 0.0) {
    rep.gamma_int = diff;
  } else if (diff >= -10.0 * quad.rel_tol * rep.gamma_total) {
    rep.gamma_int = 0.0;
    rep.internal_clamped = true;
  } else {
    throw QuadratureNotConverged("centre-of-mass rate exceeds the total rate beyond tolerance", diff,
                                 -diff / rep.gamma_total);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

namespace detail {

/// SplitMix64 step; the whole sampler is driven by this one documented mixer.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-axis proposal density in u: a mixture of the Gaussian e^{-u^2}/sqrt(pi)
/// and the Fejer density (a/pi) sinc^2(a u) with a = extent / (2 r_c), which
/// matches the central peak of a slab factor of that width.
class AxisProposal
{
 public:
  /// `gaussian_weight` is used only when a > 1; narrower bodies get the pure
  /// Gaussian because their factor is flat over the Gaussian bulk.
  AxisProposal(double extent, double r_c, double gaussian_weight, double gaussian_scale = 1.0)
  {
    a_ = extent / (2.0 * r_c);
    s_ = gaussian_scale;
    w_sinc_ = a_ > 1.0 ? 1.0 - gaussian_weight : 0.0;
  }

  double pdf(double u) const noexcept
  {
    const double v = u / s_;
    double p = (1.0 - w_sinc_) * std::exp(-v * v) / (s_ * std::sqrt(pi));
    if (w_sinc_ > 0.0) {
      const double s = sinc(a_ * u);
      p += w_sinc_ * a_ / pi * s * s;
    }
    return p;
  }

  double cdf(double u) const noexcept
  {
    double c = (1.0 - w_sinc_) * 0.5 * std::erfc(-u / s_);
    if (w_sinc_ > 0.0) c += w_sinc_ * sinc2_cdf(a_ * u);
    return c;
  }

  /// Inverse CDF by safeguarded Newton iteration.
  double quantile(double x) const noexcept
  {
    constexpr double bound = 40.0;  // e^{-u^2} underflows the weight beyond this
    double lo = -bound;
    double hi = bound;
    if (x <= cdf(lo)) return lo;
    if (x >= cdf(hi)) return hi;
    double u = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double f = cdf(u) - x;
      if (f > 0.0)
        hi = u;
      else
        lo = u;
      const double d = pdf(u);
      double next = d > 0.0 ? u - f / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - u) <= 1e-15 * (1.0 + std::abs(u)) || hi - lo <= 1e-15 * (1.0 + std::abs(u))) return next;
      u = next;
    }
    return u;
  }

 private:
  double a_ = 0.0;
  double s_ = 1.0;
  double w_sinc_ = 0.0;
};

inline double to_unit(std::uint64_t v) noexcept
{
  return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

inline constexpr unsigned mc_replicates = 16;

/// Randomised quasi-Monte-Carlo estimate of Gamma_cm.
///
/// The integrand splits as sum_i e^{-u^2} u_i^2 |mu/M|^2 and each term gets
/// its own product proposal: along axis i a Gaussian of width 1.25 (the u_i^2
/// weight pushes mass out of the central peak), along the other two axes the
/// sinc^2 peak of a slab of the body's extent over a 2% Gaussian floor. Every
/// draw along axis i is paired with a copy shifted by a quarter period of the
/// slab oscillation, pi / (2a), which cancels most of the sin^2 ripple; the
/// shifted copy has the same density up to translation, so the pair mean is
/// still unbiased. Axes no wider than 2 r_c carry no ripple and are not
/// shifted.
///
/// mc_samples counts form-factor evaluations, shared evenly between the
/// three terms and 16 independent replicates. Each replicate walks a 3D Sobol
/// sequence under a digital shift drawn from SplitMix64(seed, replicate); the
/// spread of replicate means gives the standard error. Replicates are reduced
/// in index order, so the result depends only on (model, csl, quad), not on
/// `threads`.
inline McEstimate gamma_cm_mc(const MassModel& model, const CslParams& csl, const QuadratureSpec& quad,
                              unsigned threads = 0)
{
  const std::uint64_t pairs = std::max<std::uint64_t>(quad.mc_samples / (6 * mc_replicates), 2);
  const Vec3 ext = extent(model);
  constexpr double floor_weight = 0.02;
  constexpr double wide = 1.25;
  using detail::AxisProposal;
  // proposals[i][j]: proposal on axis j for the term carrying u_i^2.
  const std::array<std::array<AxisProposal, 3>, 3> proposals = {{
      {AxisProposal(ext.x, csl.r_c, 1.0, wide), AxisProposal(ext.y, csl.r_c, floor_weight),
       AxisProposal(ext.z, csl.r_c, floor_weight)},
      {AxisProposal(ext.x, csl.r_c, floor_weight), AxisProposal(ext.y, csl.r_c, 1.0, wide),
       AxisProposal(ext.z, csl.r_c, floor_weight)},
      {AxisProposal(ext.x, csl.r_c, floor_weight), AxisProposal(ext.y, csl.r_c, floor_weight),
       AxisProposal(ext.z, csl.r_c, 1.0, wide)},
  }};
  const double ext_axis[3] = {ext.x, ext.y, ext.z};

  std::vector<double> means(mc_replicates, 0.0);
  parallel_for(mc_replicates, threads, [&](std::size_t rep) {
    std::uint64_t state = quad.rng_seed ^ (0xD1B54A32D192ED03ULL * (rep + 1));
    CompensatedSum acc;
    for (std::size_t term = 0; term < 3; ++term) {
      const auto& prop = proposals[term];
      const double a = ext_axis[term] / (2.0 * csl.r_c);
      const double shift_u = a > 1.0 ? pi / (2.0 * a) : 0.0;
      const std::uint64_t shift[3] = {detail::splitmix64(state), detail::splitmix64(state),
                                      detail::splitmix64(state)};
      boost::random::sobol qrng(3);
      for (std::uint64_t i = 0; i < pairs; ++i) {
        double u[3];
        double q = 1.0;
        for (std::size_t j = 0; j < 3; ++j) {
          u[j] = prop[j].quantile(detail::to_unit(qrng() ^ shift[j]));
          q *= prop[j].pdf(u[j]);
        }
        for (int copy = 0; copy < 2; ++copy) {
          double v[3] = {u[0], u[1], u[2]};
          if (copy == 1) v[term] += shift_u;
          const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
          const double weight = std::exp(-v2) / q;
          if (!(weight > 0.0) || !std::isfinite(weight)) continue;
          const Wavevector k{v[0] / csl.r_c, v[1] / csl.r_c, v[2] / csl.r_c};
          acc.add(weight * v[term] * v[term] * std::norm(normalized_form_factor(model, k)));
        }
      }
    }
    means[rep] = acc.value() / static_cast<double>(2 * pairs) / gaussian_second_moment;
  });

  CompensatedSum s;
  for (double m : means) s.add(m);
  const double mean = s.value() / mc_replicates;
  CompensatedSum ss;
  for (double m : means) ss.add((m - mean) * (m - mean));
  const double se = std::sqrt(ss.value() / (mc_replicates - 1) / mc_replicates);

  const double total = gamma_total(total_mass(model), csl);
  return {total * mean, total * se, mean, se, 6 * pairs * mc_replicates};
}

}  // namespace cslheat
