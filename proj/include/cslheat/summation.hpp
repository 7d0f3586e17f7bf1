#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace cslheat {

/// Neumaier's improved Kahan summation. Deterministic for a fixed input order.
class CompensatedSum
{
 public:
  void add(double x) noexcept
  {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept
  {
    add(x);
    return *this;
  }

  void merge(const CompensatedSum& other) noexcept
  {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum
{
 public:
  void add(std::complex<double> z) noexcept
  {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void merge(const CompensatedComplexSum& other) noexcept
  {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline double compensated_sum(std::span<const double> xs) noexcept
{
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace cslheat
