#pragma once

// Elementary kernels of the closed-form geometry factors, all even in x with a
// removable singularity at 0, plus the Bessel J1 and sine-integral evaluations
// they need.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "cslheat/core.hpp"

namespace cslheat {

inline constexpr double small_argument_switch = 1e-4;

/// sin(x)/x.
inline double sinc(double x) noexcept
{
  if (std::abs(x) < small_argument_switch) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// Uniform-sphere kernel 3 (sin x - x cos x) / x^3.
///
/// The closed form loses ~log10(1/x^2) digits to cancellation, so the Taylor
/// series is used for |x| < 1 (10 terms, truncation below 1e-19).
inline double sphere_kernel(double x) noexcept
{
  const double ax = std::abs(x);
  if (ax < 1.0) {
    const double x2 = x * x;
    // coefficients (-1)^m 6 (m+1) / (2m+3)!
    static constexpr std::array<double, 11> c = {
        1.0,
        -1.0 / 10.0,
        1.0 / 280.0,
        -1.0 / 15120.0,
        1.0 / 1330560.0,
        -1.0 / 172972800.0,
        1.0 / 31135104000.0,
        -1.0 / 7410154752000.0,
        1.0 / 2252687044608000.0,
        -1.0 / 851515702861824000.0,
        1.0 / 391697223316439040000.0,
    };
    double acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * x2 + c[i];
    return acc;
  }
  return 3.0 * (std::sin(ax) - ax * std::cos(ax)) / (ax * ax * ax);
}

namespace detail {

template <std::size_t N>
double rational(const std::array<double, N>& p, const std::array<double, N>& q, double y) noexcept
{
  double num = p[N - 1];
  double den = q[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    num = num * y + p[i];
    den = den * y + q[i];
  }
  return num / den;
}

}  // namespace detail

/// Bessel function of the first kind, order one.
///
/// Minimax rational approximations on (0, 4] and (4, 8] written around the
/// first two zeros, and Hankel's asymptotic form with rational P1/Q1 for x > 8
/// (Hart, Computer Approximations; same coefficient set as Boost.Math).
/// Absolute error is below 1e-15 on the real line.
inline double bessel_j1(double x) noexcept
{
  static constexpr std::array<double, 7> p1 = {
      -1.4258509801366645672e+11, 6.6781041261492395835e+09, -1.1548696764841276794e+08,
      9.8062904098958257677e+05,  -4.4615792982775076130e+03, 1.0650724020080236441e+01,
      -1.0767857011487300348e-02};
  static constexpr std::array<double, 7> q1 = {
      4.1868604460820175290e+12, 4.2091902282580133541e+10, 2.0228375140097033958e+08,
      5.9117614494174794095e+05, 1.0742272239517380498e+03, 1.0, 0.0};
  static constexpr std::array<double, 8> p2 = {
      -1.7527881995806511112e+16, 1.6608531731299018674e+15, -3.6658018905416665164e+13,
      3.5580665670910619166e+11,  -1.8113931269860667829e+09, 5.0793266148011179143e+06,
      -7.5023342220781607561e+03, 4.6179191852758252278e+00};
  static constexpr std::array<double, 8> q2 = {
      1.7253905888447681194e+18, 1.7128800897135812012e+16, 8.4899346165481429307e+13,
      2.7622777286244082666e+11, 6.4872502899596389593e+08, 1.1267125065029138050e+06,
      1.3886978985861357615e+03, 1.0};
  static constexpr std::array<double, 7> pc = {
      -4.4357578167941278571e+06, -9.9422465050776411957e+06, -6.6033732483649391093e+06,
      -1.5235293511811373833e+06, -1.0982405543459346727e+05, -1.6116166443246101165e+03,
      0.0};
  static constexpr std::array<double, 7> qc = {
      -4.4357578167941278568e+06, -9.9341243899345856590e+06, -6.5853394797230870728e+06,
      -1.5118095066341608816e+06, -1.0726385991103820119e+05, -1.4550094401904961825e+03,
      1.0};
  static constexpr std::array<double, 7> ps = {
      3.3220913409857223519e+04, 8.5145160675335701966e+04, 6.6178836581270835179e+04,
      1.8494262873223866797e+04, 1.7063754290207680021e+03, 3.5265133846636032186e+01,
      0.0};
  static constexpr std::array<double, 7> qs = {
      7.0871281941028743574e+05, 1.8194580422439972989e+06, 1.4194606696037208929e+06,
      4.0029443582266975117e+05, 3.7890229745772202641e+04, 8.6383677696049909675e+02,
      1.0};
  // zeros j_{1,1}, j_{1,2} split into an exactly representable head and a tail
  constexpr double x1 = 3.8317059702075123156e+00;
  constexpr double x2 = 7.0155866698156187535e+00;
  constexpr double x11 = 9.810e+02;
  constexpr double x12 = -3.2527979248768438556e-04;
  constexpr double x21 = 1.7960e+03;
  constexpr double x22 = -3.8330184381246462950e-05;

  const double w = std::abs(x);
  if (x == 0.0) return 0.0;
  double value;
  if (w <= 4.0) {
    const double y = x * x;
    value = w * (w + x1) * ((w - x11 / 256.0) - x12) * detail::rational(p1, q1, y);
  } else if (w <= 8.0) {
    const double y = x * x;
    value = w * (w + x2) * ((w - x21 / 256.0) - x22) * detail::rational(p2, q2, y);
  } else {
    const double y = 8.0 / w;
    const double y2 = y * y;
    const double z = w - 0.75 * pi;
    const double rc = detail::rational(pc, qc, y2);
    const double rs = detail::rational(ps, qs, y2);
    value = std::sqrt(2.0 / (w * pi)) * (rc * std::cos(z) - y * rs * std::sin(z));
  }
  return x < 0.0 ? -value : value;
}

/// 2 J1(x) / x, the transverse factor of a uniform disc.
inline double jinc(double x) noexcept
{
  if (std::abs(x) < small_argument_switch) {
    const double x2 = x * x;
    return 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
  }
  return 2.0 * bessel_j1(x) / x;
}

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
///
/// Power series for |x| < 2, otherwise the continued fraction of E1(ix)
/// evaluated by the modified Lentz method.
inline double sine_integral(double x) noexcept
{
  const double ax = std::abs(x);
  double si;
  if (ax < 2.0) {
    const double x2 = ax * ax;
    double term = ax;  // x^{2k+1} / (2k+1)!
    double sum = ax;
    for (int k = 1; k < 30; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double add = term / (2.0 * k + 1.0);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    si = sum;
  } else if (ax > 1e17) {
    si = 0.5 * pi;
  } else {
    constexpr double tiny = 1e-300;
    std::complex<double> b(1.0, ax);
    std::complex<double> c(1.0 / tiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 2; i < 1000; ++i) {
      const double a = -static_cast<double>((i - 1) * (i - 1));
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const std::complex<double> del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= std::complex<double>(std::cos(ax), -std::sin(ax));
    si = 0.5 * pi + h.imag();
  }
  return x < 0.0 ? -si : si;
}

/// Cumulative distribution of the density sinc(t)^2 / pi on the real line.
inline double sinc2_cdf(double t) noexcept
{
  if (t == 0.0) return 0.5;
  const double s = std::sin(t);
  return 0.5 + (sine_integral(2.0 * t) - s * s / t) / pi;
}

}  // namespace cslheat
