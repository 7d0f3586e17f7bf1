#include <catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "cslheat/special_functions.hpp"

using namespace cslheat;

namespace {

struct Ref
{
  double x;
  double value;
};

// Reference values from 40-digit arbitrary-precision evaluation.
const std::vector<Ref> j1_ref = {
    {1e-6, 4.999999999999375e-7},
    {1e-3, 0.00049999993750000260417},
    {0.5, 0.24226845767487388638},
    {1.0, 0.44005058574493351596},
    {2.5, 0.49709410246427403801},
    {4.0, -0.066043328023549136143},
    {5.0, -0.32757913759146522204},
    {7.5, 0.13524842757970550518},
    {8.0, 0.23463634685391462438},
    {10.0, 0.04347274616886143667},
    {25.0, -0.12535024958028990465},
    {50.0, -0.097511828125175137661},
    {100.0, -0.077145352014112158033},
    {1000.0, 0.0047283119070895239176},
};

const std::vector<Ref> si_ref = {
    {1e-6, 9.9999999999994444444e-7},
    {0.5, 0.49310741804306668916},
    {1.5, 1.3246835311721196804},
    {1.999, 1.6049581103936128805},
    {2.001, 1.6058674078140215824},
    {3.0, 1.8486525279994682564},
    {5.0, 1.5499312449446741373},
    {10.0, 1.6583475942188740493},
    {20.0, 1.5482417010434398402},
    {100.0, 1.5622254668890562934},
    {1000.0, 1.5702331219687712181},
    {100000.0, 1.5708063203993941228},
};

const std::vector<Ref> sphere_ref = {
    {1e-5, 0.99999999999},
    {0.01, 0.99999000003571421958},
    {0.5, 0.97522218381639941316},
    {0.999, 0.90369206241959641531},
    {1.001, 0.90331985213353689897},
    {2.0, 0.65309666246998742602},
    {10.0, 0.023540082539625464128},
    {50.0, -0.0011642562306794302197},
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("sinc has a removable singularity at zero")
{
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(pi)) < 1e-16);
  CHECK(rel(sinc(0.5), std::sin(0.5) / 0.5) < 1e-15);
  // both sides of the series switch agree with the closed form
  for (double x : {0.5e-4, 0.99e-4, 1.01e-4, 2e-4}) {
    const double exact = 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
    CHECK(std::abs(sinc(x) - exact) <= 1e-15);
    CHECK(sinc(-x) == sinc(x));
  }
}

TEST_CASE("J1 matches high-precision references")
{
  for (const auto& r : j1_ref) {
    INFO("x = " << r.x);
    CHECK(std::abs(bessel_j1(r.x) - r.value) <= 1e-14 * std::max(1.0, std::abs(r.value)));
    CHECK(bessel_j1(-r.x) == -bessel_j1(r.x));
  }
  CHECK(bessel_j1(0.0) == 0.0);
}

TEST_CASE("jinc = 2 J1(x)/x")
{
  CHECK(jinc(0.0) == 1.0);
  CHECK(std::abs(jinc(1e-5) - 0.9999999999875) <= 1e-15);
  CHECK(std::abs(jinc(0.5) - 0.96907383069949554554) <= 1e-14);
  CHECK(std::abs(jinc(3.8317059702075125)) <= 1e-14);
  CHECK(std::abs(jinc(10.0) - 0.0086945492337722873339) <= 1e-14);
  for (double x : {0.99e-4, 1.01e-4}) CHECK(std::abs(jinc(x) - (1.0 - x * x / 8.0)) <= 1e-15);
}

TEST_CASE("sphere kernel 3(sin x - x cos x)/x^3")
{
  CHECK(sphere_kernel(0.0) == 1.0);
  for (const auto& r : sphere_ref) {
    INFO("x = " << r.x);
    CHECK(std::abs(sphere_kernel(r.x) - r.value) <= 1e-14 * std::max(1.0, std::abs(r.value)));
  }
  // first zero, the first positive root of tan x = x
  CHECK(std::abs(sphere_kernel(4.493409457909064175)) < 1e-15);
  // both sides of each branch switch
  CHECK(std::abs(sphere_kernel(0.99999999) - 0.9035060386803219201416) <= 1e-15);
  CHECK(std::abs(sphere_kernel(1.00000001) - 0.9035060349582187994592) <= 1e-15);
  CHECK(std::abs(sphere_kernel(0.0000999) - 0.9999999990019990003557) <= 1e-15);
  CHECK(std::abs(sphere_kernel(0.0001001) - 0.9999999989979990003586) <= 1e-15);
}

TEST_CASE("sine integral")
{
  CHECK(sine_integral(0.0) == 0.0);
  for (const auto& r : si_ref) {
    INFO("x = " << r.x);
    CHECK(rel(sine_integral(r.x), r.value) <= 1e-14);
    CHECK(sine_integral(-r.x) == -sine_integral(r.x));
  }
}

TEST_CASE("sinc^2 cumulative distribution")
{
  CHECK(std::abs(sinc2_cdf(0.0) - 0.5) < 1e-16);
  CHECK(std::abs(sinc2_cdf(0.5) - 0.65482127375092578303) <= 1e-14);
  CHECK(std::abs(sinc2_cdf(3.0) - 0.95137910037505230455) <= 1e-14);
  CHECK(std::abs(sinc2_cdf(30.0) - 0.99471894395467091747) <= 1e-14);
  CHECK(std::abs(sinc2_cdf(-3.0) + sinc2_cdf(3.0) - 1.0) <= 1e-15);
  double prev = 0.0;
  for (double t = -50.0; t <= 50.0; t += 0.37) {
    const double c = sinc2_cdf(t);
    CHECK(c >= prev);
    prev = c;
  }
}
