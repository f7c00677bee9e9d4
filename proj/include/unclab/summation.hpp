#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace unclab {

/// Neumaier's variant of Kahan summation. Works for real and complex scalars;
/// complex values are compensated component-wise.
template <typename Scalar>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Scalar init) : sum_(init) {}

  CompensatedSum& operator+=(Scalar value) {
    add(value);
    return *this;
  }

  CompensatedSum& operator-=(Scalar value) {
    add(-value);
    return *this;
  }

  Scalar value() const { return combine(); }
  operator Scalar() const { return combine(); }

 private:
  static void step(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  void add(Scalar x) {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
      double sr = sum_.real(), si = sum_.imag();
      double cr = comp_.real(), ci = comp_.imag();
      step(sr, cr, x.real());
      step(si, ci, x.imag());
      sum_ = {sr, si};
      comp_ = {cr, ci};
    } else {
      step(sum_, comp_, x);
    }
  }

  Scalar combine() const { return sum_ + comp_; }

  Scalar sum_{};
  Scalar comp_{};
};

}  // namespace unclab
