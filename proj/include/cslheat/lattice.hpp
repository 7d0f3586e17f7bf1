#pragma once

// Discrete lattices and the brute-force oracles built on them: the direct
// geometry-factor sum mu(k) = sum_l m_l exp(-i k.R_l), the double commutator
// F(k) = <[mu^dagger, [mu, H]]> from canonical commutators, and the
// Gaussian-weighted pair sum for the centre-of-mass rate.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <variant>
#include <vector>

#include "cslheat/core.hpp"
#include "cslheat/geometry.hpp"
#include "cslheat/heating.hpp"
#include "cslheat/parallel.hpp"
#include "cslheat/summation.hpp"

namespace cslheat {

struct Site
{
  double mass = 0.0;  // kg
  Vec3 position{};    // equilibrium position, m
};

struct Lattice
{
  std::vector<Site> sites;
  double cell_volume = 0.0;  // m^3
  std::size_t n_cells = 0;

  double total_mass() const noexcept
  {
    CompensatedSum s;
    for (const auto& site : sites) s.add(site.mass);
    return s.value();
  }
};

inline constexpr std::size_t default_site_cap = 100'000'000;

namespace detail {

/// Cell centres of a grid of n cells of width d centred on the origin.
inline double cell_centre(std::size_t i, std::size_t n, double d) noexcept
{
  return (static_cast<double>(i) + 0.5 - 0.5 * static_cast<double>(n)) * d;
}

inline std::size_t cells_along(double length, double d) noexcept
{
  const double n = std::ceil(length / d - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

inline void check_spacing(const MassModel& model, double d)
{
  if (!(d > 0.0)) throw Error("lattice spacing must be positive");
  if (std::holds_alternative<PointMass>(model.shape)) return;
  const Vec3 e = extent(model);
  if (!(d < std::min({e.x, e.y, e.z}) * (1.0 + 1e-12)))
    throw Error("lattice spacing must be smaller than every body dimension");
}

constexpr std::size_t block_size = 1 << 14;

}  // namespace detail

/// Simple-cubic fill of the body: one site per cell of volume d^3 whose centre
/// lies inside the body, with mass density(centre) d^3, then rescaled by one
/// common factor so that the lattice mass equals total_mass(model).
inline Lattice build_lattice(const MassModel& model, double spacing, std::size_t site_cap = default_site_cap)
{
  detail::check_spacing(model, spacing);
  Lattice lat;
  lat.cell_volume = spacing * spacing * spacing;
  if (const auto* p = std::get_if<PointMass>(&model.shape)) {
    lat.sites.push_back({p->mass, p->position + model.offset});
    lat.n_cells = 1;
    return lat;
  }
  const Vec3 e = extent(model);
  const std::size_t nx = detail::cells_along(e.x, spacing);
  const std::size_t ny = detail::cells_along(e.y, spacing);
  const std::size_t nz = detail::cells_along(e.z, spacing);
  const double count = static_cast<double>(nx) * static_cast<double>(ny) * static_cast<double>(nz);
  if (count > static_cast<double>(site_cap))
    throw TooManySites("lattice would need " + std::to_string(static_cast<long double>(count)) +
                       " sites, cap is " + std::to_string(site_cap));

  lat.sites.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t l = 0; l < nz; ++l) {
        const Vec3 r = Vec3{detail::cell_centre(i, nx, spacing), detail::cell_centre(j, ny, spacing),
                            detail::cell_centre(l, nz, spacing)} +
                       model.offset;
        const double rho = density_at(model, r);
        if (rho > 0.0) lat.sites.push_back({rho * lat.cell_volume, r});
      }
  if (lat.sites.empty()) throw Error("no lattice cell centre falls inside the body");
  const double scale = total_mass(model) / lat.total_mass();
  for (auto& s : lat.sites) s.mass *= scale;
  lat.n_cells = lat.sites.size();
  return lat;
}

/// Direct sum sum_l m_l exp(-i k.R_l), compensated and reduced in site order.
inline FormFactorValue mu_tilde_discrete(const Lattice& lat, const Wavevector& k, unsigned threads = 1)
{
  const std::size_t n = lat.sites.size();
  const std::size_t blocks = (n + detail::block_size - 1) / detail::block_size;
  std::vector<CompensatedComplexSum> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * detail::block_size);
    for (std::size_t i = b * detail::block_size; i < end; ++i) {
      const auto& s = lat.sites[i];
      partial[b].add(s.mass * detail::phase_factor(k.dot(s.position)));
    }
  });
  CompensatedComplexSum total;
  for (const auto& p : partial) total.merge(p);
  return total.value();
}

// ---------------------------------------------------------------------------
// Canonical-commutator algebra

/// c + sum_{l,a} (cu_{l,a} u_{l,a} + cp_{l,a} p_{l,a}) for site displacements u
/// and momenta p obeying [u_{l,a}, p_{m,b}] = i hbar delta_lm delta_ab.
struct LinearOperator
{
  std::vector<std::array<Complex, 3>> cu;
  std::vector<std::array<Complex, 3>> cp;
  Complex constant{0.0, 0.0};
};

/// Linearised density mode: mu(k) = sum_l m_l e^{-ik.R_l} (1 - i k.u_l),
/// or its adjoint.
inline LinearOperator linearized_density_mode(const Lattice& lat, const Wavevector& k, bool adjoint)
{
  const std::size_t n = lat.sites.size();
  LinearOperator op;
  op.cu.resize(n);
  op.cp.assign(n, {Complex{}, Complex{}, Complex{}});
  const double sign = adjoint ? -1.0 : 1.0;
  const Complex minus_i{0.0, -sign};
  CompensatedComplexSum c;
  for (std::size_t l = 0; l < n; ++l) {
    const auto& s = lat.sites[l];
    const Complex phase = s.mass * detail::phase_factor(sign * k.dot(s.position));
    c.add(phase);
    for (int a = 0; a < 3; ++a) op.cu[l][a] = phase * minus_i * k[a];
  }
  op.constant = c.value();
  return op;
}

/// [op, H] for H = sum_l p_l^2 / (2 m_l) + V(u). V depends on positions only
/// and commutes with an operator linear in u, so only the kinetic term acts:
/// [u_{l,a}, p_{l,a}^2 / 2m_l] = i hbar p_{l,a} / m_l.
inline LinearOperator commutator_with_hamiltonian(const LinearOperator& op, const Lattice& lat)
{
  for (const auto& row : op.cp)
    for (const auto& c : row)
      if (c != Complex{}) throw Error("commutator_with_hamiltonian: operator must be linear in positions only");
  const Complex ih{0.0, PhysicalConstants::hbar};
  LinearOperator out;
  out.cu.assign(op.cu.size(), {Complex{}, Complex{}, Complex{}});
  out.cp.resize(op.cu.size());
  for (std::size_t l = 0; l < op.cu.size(); ++l)
    for (int a = 0; a < 3; ++a) out.cp[l][a] = op.cu[l][a] * ih / lat.sites[l].mass;
  return out;
}

/// [A, B] of two linear operators; a c-number.
inline Complex commutator(const LinearOperator& lhs, const LinearOperator& rhs)
{
  const Complex ih{0.0, PhysicalConstants::hbar};
  CompensatedComplexSum acc;
  for (std::size_t l = 0; l < lhs.cu.size(); ++l)
    for (int a = 0; a < 3; ++a) acc.add(lhs.cu[l][a] * rhs.cp[l][a] - lhs.cp[l][a] * rhs.cu[l][a]);
  return ih * acc.value();
}

/// F(k) = Tr(rho [mu^dagger, [mu, H]]), in units of hbar^2 kg / m^2.
/// The double commutator is a c-number, so the state drops out.
inline double f_double_commutator(const Lattice& lat, const Wavevector& k)
{
  const LinearOperator mu = linearized_density_mode(lat, k, false);
  const LinearOperator mu_dag = linearized_density_mode(lat, k, true);
  return commutator(mu_dag, commutator_with_hamiltonian(mu, lat)).real();
}

/// Total rate from the site masses; position independent.
inline double gamma_total_discrete(const Lattice& lat, const CslParams& csl)
{
  return gamma_total(lat.total_mass(), csl);
}

namespace detail {

/// exp(-s^2) (3/2 - s^2): the k-space Gaussian moment of exp(-i k.r) for
/// s = |r| / (2 r_c), up to constant factors.
inline double pair_kernel(double s2) noexcept { return std::exp(-s2) * (1.5 - s2); }

}  // namespace detail

/// Gamma_cm from the real-space pair sum
///   Gamma_cm = Gamma sum_{l,l'} m_l m_l' exp(-s^2)(3/2 - s^2) / ((3/2) M^2),
/// s = |R_l - R_l'| / (2 r_c). O(N^2); intended for small lattices.
inline double gamma_cm_pair_sum(const Lattice& lat, const CslParams& csl, unsigned threads = 1)
{
  const std::size_t n = lat.sites.size();
  const double inv = 1.0 / (4.0 * csl.r_c * csl.r_c);
  std::vector<CompensatedSum> rows(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto& a = lat.sites[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& b = lat.sites[j];
      const double dx = a.position.x - b.position.x;
      const double dy = a.position.y - b.position.y;
      const double dz = a.position.z - b.position.z;
      rows[i].add(a.mass * b.mass * detail::pair_kernel((dx * dx + dy * dy + dz * dz) * inv));
    }
  });
  CompensatedSum total;
  for (const auto& r : rows) total.merge(r);
  const double m = lat.total_mass();
  return gamma_total(m, csl) * total.value() / (1.5 * m * m);
}

// ---------------------------------------------------------------------------
// Product lattices

/// Simple-cubic lattice of a cuboid or layered stack held in factorised form:
/// the site (i, j, l) sits at the cell centre (x_i, y_j, z_l) + offset with mass
/// mass_scale * w_x[i] * w_y[j] * w_z[l]. Same cell convention as
/// build_lattice, without materialising the sites.
struct GridLattice
{
  double spacing = 0.0;
  std::array<std::vector<double>, 3> weights;
  double mass_scale = 0.0;
  Vec3 offset{};

  double coordinate(int axis, std::size_t i) const noexcept
  {
    return detail::cell_centre(i, weights[axis].size(), spacing);
  }
  double total_mass() const noexcept
  {
    double m = mass_scale;
    for (const auto& w : weights) m *= compensated_sum(w);
    return m;
  }
  std::size_t site_count() const noexcept
  {
    return weights[0].size() * weights[1].size() * weights[2].size();
  }
};

inline GridLattice build_grid_lattice(const MassModel& model, double spacing)
{
  if (!is_separable(model)) throw NotSeparable("product lattices need a cuboid or layered stack");
  detail::check_spacing(model, spacing);
  const Vec3 e = extent(model);
  GridLattice g;
  g.spacing = spacing;
  g.offset = model.offset;
  for (int a = 0; a < 3; ++a) {
    const std::size_t n = detail::cells_along(e[a], spacing);
    auto& w = g.weights[a];
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = detail::cell_centre(i, n, spacing);
      if (a < 2) {
        w[i] = std::abs(c) < 0.5 * e[a] ? 1.0 : 0.0;
      } else {
        // density along z through the central column
        Vec3 probe{};
        probe.z = c;
        w[i] = density_at(model, probe + model.offset);
      }
    }
  }
  double raw = 1.0;
  for (const auto& w : g.weights) raw *= compensated_sum(w);
  if (!(raw > 0.0)) throw Error("no lattice cell centre falls inside the body");
  g.mass_scale = total_mass(model) / raw;
  return g;
}

/// Materialises a product lattice (site order x-major, as build_lattice).
inline Lattice expand(const GridLattice& g, std::size_t site_cap = default_site_cap)
{
  if (g.site_count() > site_cap) throw TooManySites("product lattice exceeds the site cap");
  Lattice lat;
  lat.cell_volume = g.spacing * g.spacing * g.spacing;
  for (std::size_t i = 0; i < g.weights[0].size(); ++i)
    for (std::size_t j = 0; j < g.weights[1].size(); ++j)
      for (std::size_t l = 0; l < g.weights[2].size(); ++l) {
        const double m = g.mass_scale * g.weights[0][i] * g.weights[1][j] * g.weights[2][l];
        if (m > 0.0)
          lat.sites.push_back({m, Vec3{g.coordinate(0, i), g.coordinate(1, j), g.coordinate(2, l)} + g.offset});
      }
  lat.n_cells = lat.sites.size();
  return lat;
}

inline FormFactorValue mu_tilde_discrete(const GridLattice& g, const Wavevector& k)
{
  Complex product = g.mass_scale * detail::phase_factor(k.dot(g.offset));
  for (int a = 0; a < 3; ++a) {
    CompensatedComplexSum s;
    const auto& w = g.weights[a];
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != 0.0) s.add(w[i] * detail::phase_factor(k[a] * g.coordinate(a, i)));
    product *= s.value();
  }
  return product;
}

namespace detail {

/// Autocorrelation-weighted 1D sums over pairs of cells:
///   q = sum_{i,j} w_i w_j e^{-s^2},  p = sum_{i,j} w_i w_j e^{-s^2} (1/2 - s^2),
/// with s = (i - j) d / (2 r_c). Pairs beyond s = 27.5 underflow and are skipped.
inline std::pair<double, double> axis_pair_sums(const std::vector<double>& w, double d, double r_c)
{
  const std::size_t n = w.size();
  const double step = d / (2.0 * r_c);
  const std::size_t window = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(27.5 / step)));
  const bool uniform = std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
  CompensatedSum q, p;
  for (std::size_t delta = 0; delta <= window; ++delta) {
    double corr;
    if (uniform) {
      corr = w.front() * w.front() * static_cast<double>(n - delta);
    } else {
      CompensatedSum c;
      for (std::size_t i = 0; i + delta < n; ++i) c.add(w[i] * w[i + delta]);
      corr = c.value();
    }
    const double mult = delta == 0 ? 1.0 : 2.0;
    const double s = step * static_cast<double>(delta);
    const double g = std::exp(-s * s);
    q.add(mult * corr * g);
    p.add(mult * corr * g * (0.5 - s * s));
  }
  return {q.value(), p.value()};
}

}  // namespace detail

/// Pair-sum Gamma_cm of a product lattice. The kernel factorises over axes,
///   e^{-s^2}(3/2 - s^2) = prod_a e^{-s_a^2} * sum_a (1/2 - s_a^2),
/// so the N^2 sum costs O(N_axis * window) per axis.
inline double gamma_cm_pair_sum(const GridLattice& g, const CslParams& csl)
{
  std::array<std::pair<double, double>, 3> qp;
  for (int a = 0; a < 3; ++a) qp[a] = detail::axis_pair_sums(g.weights[a], g.spacing, csl.r_c);
  const double q0 = qp[0].first, q1 = qp[1].first, q2 = qp[2].first;
  const double sum = qp[0].second * q1 * q2 + q0 * qp[1].second * q2 + q0 * q1 * qp[2].second;
  double raw = 1.0;
  for (const auto& w : g.weights) raw *= compensated_sum(w);
  const double m = g.total_mass();
  return gamma_total(m, csl) * sum / (1.5 * raw * raw);
}

}  // namespace cslheat
