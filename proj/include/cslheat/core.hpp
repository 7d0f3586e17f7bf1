#pragma once

// Physical constants, collapse-model parameters and the error hierarchy shared
// by every other header. All quantities are SI.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cslheat {

/// CODATA-2018 values. The nucleon reference mass is the neutron mass.
struct PhysicalConstants
{
  static constexpr double hbar = 1.054571817e-34;       // J s
  static constexpr double m_nucleon = 1.67492749804e-27;  // kg
  static constexpr double k_boltzmann = 1.380649e-23;   // J / K

  static constexpr const char* version = "CODATA-2018/neutron";
};

static_assert(PhysicalConstants::hbar > 0 && PhysicalConstants::m_nucleon > 0 &&
              PhysicalConstants::k_boltzmann > 0);

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double pi_three_halves = 5.568327996831707845;  // pi^{3/2}

/// Collapse rate (1/s) and noise correlation length (m).
struct CslParams
{
  double lambda_rate = 0.0;
  double r_c = 1e-7;

  bool valid() const noexcept { return lambda_rate >= 0.0 && r_c > 0.0; }
  bool operator==(const CslParams&) const = default;
};

/// Settings shared by the deterministic and Monte-Carlo k-space integrators.
/// The integration variable is the dimensionless u = r_c * k.
struct QuadratureSpec
{
  double rel_tol = 1e-9;
  double u_max = 8.0;
  std::uint64_t mc_samples = 200000;
  std::uint64_t rng_seed = 1;

  bool operator==(const QuadratureSpec&) const = default;
};

class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error
{
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column)
  {
  }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error
{
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field))
  {
  }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NotSeparable : public Error
{
 public:
  using Error::Error;
};

class TooManySites : public Error
{
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error
{
 public:
  QuadratureNotConverged(const std::string& what, double partial, double rel_error)
      : Error(what), partial_(partial), rel_error_(rel_error)
  {
  }
  double partial_value() const noexcept { return partial_; }
  double estimated_rel_error() const noexcept { return rel_error_; }

 private:
  double partial_;
  double rel_error_;
};

class InfeasibleDesign : public Error
{
 public:
  using Error::Error;
};

class ConstraintViolation : public Error
{
 public:
  using Error::Error;
};

}  // namespace cslheat
