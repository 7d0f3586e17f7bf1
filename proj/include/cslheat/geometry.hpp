#pragma once

// Continuum mass models and their geometry factors
//
//   mu(k) = \int d^3x exp(-i k.x) rho(x),
//
// the Fourier transform of the classical mass density. Every body is centred
// on the origin before the optional rigid offset is applied; cylinders have
// their axis along z and layered stacks are layered along z, starting at
// z = -H/2.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "cslheat/core.hpp"
#include "cslheat/special_functions.hpp"

namespace cslheat {

using Complex = std::complex<double>;

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;

  double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  double norm2() const noexcept { return dot(*this); }
  double operator[](int axis) const noexcept { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend Vec3 operator+(const Vec3& a, const Vec3& b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, const Vec3& a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
};

/// Wavevector in 1/m.
using Wavevector = Vec3;

/// Geometry factor value in kg.
using FormFactorValue = Complex;

enum class Axis { x = 0, y = 1, z = 2 };

struct Material
{
  std::string name;
  double density = 0.0;  // kg/m^3

  bool operator==(const Material&) const = default;
};

struct PointMass
{
  double mass = 0.0;
  Vec3 position{};
  bool operator==(const PointMass&) const = default;
};

struct Cuboid
{
  double lx = 0.0, ly = 0.0, lz = 0.0;
  Material material;
  bool operator==(const Cuboid&) const = default;
};

struct Sphere
{
  double radius = 0.0;
  Material material;
  bool operator==(const Sphere&) const = default;
};

struct Cylinder
{
  double radius = 0.0;
  double height = 0.0;
  Material material;
  bool operator==(const Cylinder&) const = default;
};

struct Layer
{
  Material material;
  double thickness = 0.0;
  bool operator==(const Layer&) const = default;
};

struct LayeredStack
{
  double lx = 0.0, ly = 0.0;
  std::vector<Layer> layers;  // bottom (z = -H/2) to top

  double height() const noexcept
  {
    double h = 0.0;
    for (const auto& l : layers) h += l.thickness;
    return h;
  }
  bool operator==(const LayeredStack&) const = default;
};

using Shape = std::variant<PointMass, Cuboid, Sphere, Cylinder, LayeredStack>;

struct MassModel
{
  Shape shape;
  Vec3 offset{};

  bool operator==(const MassModel&) const = default;
};

inline bool is_separable(const MassModel& m) noexcept
{
  return std::holds_alternative<Cuboid>(m.shape) || std::holds_alternative<LayeredStack>(m.shape);
}

inline double total_mass(const MassModel& model)
{
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return s.mass;
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          return s.material.density * s.lx * s.ly * s.lz;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return s.material.density * (4.0 / 3.0) * pi * s.radius * s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return s.material.density * pi * s.radius * s.radius * s.height;
        } else {
          double areal = 0.0;  // kg/m^2
          for (const auto& l : s.layers) areal += l.material.density * l.thickness;
          return areal * s.lx * s.ly;
        }
      },
      model.shape);
}

/// Full extent of the body along each axis (zero for a point mass).
inline Vec3 extent(const MassModel& model)
{
  return std::visit(
      [](const auto& s) -> Vec3 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return {};
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          return {s.lx, s.ly, s.lz};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return {2 * s.radius, 2 * s.radius, 2 * s.radius};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return {2 * s.radius, 2 * s.radius, s.height};
        } else {
          return {s.lx, s.ly, s.height()};
        }
      },
      model.shape);
}

namespace detail {

// exp(-i phase)
inline Complex phase_factor(double phase) noexcept { return {std::cos(phase), -std::sin(phase)}; }

/// Normalised z factor of a layered stack:
///   sum_j rho_j t_j exp(-i k zc_j) sinc(k t_j / 2) / sum_j rho_j t_j
inline Complex stack_z_factor(const LayeredStack& s, double kz) noexcept
{
  const double h = s.height();
  double z = -0.5 * h;
  Complex acc{0.0, 0.0};
  double areal = 0.0;
  for (const auto& l : s.layers) {
    const double w = l.material.density * l.thickness;
    const double zc = z + 0.5 * l.thickness;
    acc += w * sinc(0.5 * kz * l.thickness) * phase_factor(kz * zc);
    areal += w;
    z += l.thickness;
  }
  return acc / areal;
}

}  // namespace detail

/// 1D factor f_axis(k_axis) of an axis-separable body, such that
/// mu(k) / M = f_x(k_x) f_y(k_y) f_z(k_z) before the offset phase.
inline Complex separable_factors(const MassModel& model, Axis axis, double k_axis)
{
  if (const auto* c = std::get_if<Cuboid>(&model.shape)) {
    const double len = axis == Axis::x ? c->lx : (axis == Axis::y ? c->ly : c->lz);
    return sinc(0.5 * k_axis * len);
  }
  if (const auto* s = std::get_if<LayeredStack>(&model.shape)) {
    if (axis == Axis::x) return sinc(0.5 * k_axis * s->lx);
    if (axis == Axis::y) return sinc(0.5 * k_axis * s->ly);
    return detail::stack_z_factor(*s, k_axis);
  }
  throw NotSeparable("geometry factor of this mass model does not factorise along axes");
}

/// mu(k) / M. Magnitude in [0, 1].
inline Complex normalized_form_factor(const MassModel& model, const Wavevector& k)
{
  const Complex shift = detail::phase_factor(k.dot(model.offset));
  const Complex body = std::visit(
      [&k](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return detail::phase_factor(k.dot(s.position));
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          return sinc(0.5 * k.x * s.lx) * sinc(0.5 * k.y * s.ly) * sinc(0.5 * k.z * s.lz);
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return sphere_kernel(std::sqrt(k.norm2()) * s.radius);
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          const double kperp = std::hypot(k.x, k.y);
          return jinc(kperp * s.radius) * sinc(0.5 * k.z * s.height);
        } else {
          return sinc(0.5 * k.x * s.lx) * sinc(0.5 * k.y * s.ly) * detail::stack_z_factor(s, k.z);
        }
      },
      model.shape);
  return body * shift;
}

inline FormFactorValue mu_tilde(const MassModel& model, const Wavevector& k)
{
  return total_mass(model) * normalized_form_factor(model, k);
}

/// Mass density at x (kg/m^3); zero outside the body. Point masses have no
/// finite density and always return zero.
inline double density_at(const MassModel& model, const Vec3& x)
{
  const Vec3 p = x + (-model.offset);
  return std::visit(
      [&p](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          const bool in = std::abs(p.x) < 0.5 * s.lx && std::abs(p.y) < 0.5 * s.ly && std::abs(p.z) < 0.5 * s.lz;
          return in ? s.material.density : 0.0;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return p.norm2() < s.radius * s.radius ? s.material.density : 0.0;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          const bool in = p.x * p.x + p.y * p.y < s.radius * s.radius && std::abs(p.z) < 0.5 * s.height;
          return in ? s.material.density : 0.0;
        } else {
          if (!(std::abs(p.x) < 0.5 * s.lx && std::abs(p.y) < 0.5 * s.ly)) return 0.0;
          double z = -0.5 * s.height();
          for (const auto& l : s.layers) {
            if (p.z >= z && p.z < z + l.thickness) return l.material.density;
            z += l.thickness;
          }
          return 0.0;
        }
      },
      model.shape);
}

inline MassModel translated(MassModel model, const Vec3& shift)
{
  model.offset = model.offset + shift;
  return model;
}

}  // namespace cslheat
