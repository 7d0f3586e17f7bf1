#pragma once

// Globally adaptive 15-point Gauss-Kronrod integration on a finite interval,
// started from a uniform panelisation so that oscillatory integrands are never
// under-resolved by the first pass.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "cslheat/summation.hpp"

namespace cslheat {

struct QuadratureResult
{
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

struct AdaptiveOptions
{
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  double max_initial_panel = std::numeric_limits<double>::infinity();
  std::size_t max_panels = 2'000'000;
};

namespace detail {

struct Panel
{
  double a, b, value, error;
  bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

template <class F>
Panel gauss_kronrod15(F& f, double a, double b)
{
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  const double fc = f(centre);
  double resg = fc * wg[3];
  double resk = fc * wgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += wgk[j] * (std::abs(fv[2 * j] - reskh) + std::abs(fv[2 * j + 1] - reskh));

  const double ah = std::abs(half);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk * half, err};
}

}  // namespace detail

/// Integrates f over [a, b]. The interval is first split into equal panels no
/// wider than `max_initial_panel`; the panel with the largest error estimate
/// is then bisected until the summed error is below
/// max(abs_tol, rel_tol * |integral|) or `max_panels` is reached. If the
/// initial split alone needs more than `max_panels` panels the result is
/// returned unevaluated, with infinite error and converged = false.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {})
{
  QuadratureResult out;
  if (!(b > a)) return out;

  std::size_t n0 = 1;
  if (std::isfinite(opt.max_initial_panel) && opt.max_initial_panel > 0.0)
    n0 = static_cast<std::size_t>(std::ceil((b - a) / opt.max_initial_panel));
  n0 = std::max<std::size_t>(n0, 1);
  if (n0 > opt.max_panels) {
    // the panel limit alone would exceed the budget: nothing can be trusted
    out.abs_error = std::numeric_limits<double>::infinity();
    out.panels = n0;
    return out;
  }
  const std::size_t cap = std::max(opt.max_panels, 2 * n0);

  std::vector<detail::Panel> heap_storage;
  heap_storage.reserve(2 * n0);
  const double width = (b - a) / static_cast<double>(n0);
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < n0; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == n0 ? b : a + width * static_cast<double>(i + 1);
    heap_storage.push_back(detail::gauss_kronrod15(f, lo, hi));
    value += heap_storage.back().value;
    error += heap_storage.back().error;
  }
  std::priority_queue<detail::Panel> heap(std::less<detail::Panel>{}, std::move(heap_storage));

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
  while (error > target() && heap.size() < cap) {
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    const detail::Panel left = detail::gauss_kronrod15(f, worst.a, mid);
    const detail::Panel right = detail::gauss_kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // final totals summed afresh, in a fixed (interval) order
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  CompensatedSum v, e;
  for (const auto& p : panels) {
    v.add(p.value);
    e.add(p.error);
  }
  out.value = v.value();
  out.abs_error = e.value();
  out.panels = panels.size();
  out.converged = out.abs_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
  return out;
}

}  // namespace cslheat
