#include "unclab/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "unclab/errors.hpp"
#include "unclab/summation.hpp"

namespace unclab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// sum_{k>0} w^k / k^2 for 0 <= w <= 1/2, remainder bounded geometrically.
EvalResult dilog_positive_series(double w) {
  CompensatedSum<double> sum;
  double power = 1.0;
  int k = 0;
  double remainder = 0.0;
  while (true) {
    ++k;
    power *= w;
    const double term = power / (static_cast<double>(k) * k);
    sum += term;
    const double next = power * w / ((k + 1.0) * (k + 1.0));
    remainder = next / (1.0 - w);
    if (remainder <= 0.25 * kEps * std::abs(sum.value()) || power == 0.0) break;
  }
  return {sum.value(), remainder, k};
}

// Alternating case -1/2 <= z < 0: terms decrease in magnitude, so the first
// omitted term bounds the error.
EvalResult dilog_alternating_series(double z) {
  CompensatedSum<double> sum;
  double power = 1.0;
  int k = 0;
  double next = 0.0;
  while (true) {
    ++k;
    power *= z;
    sum += power / (static_cast<double>(k) * k);
    next = std::abs(power * z) / ((k + 1.0) * (k + 1.0));
    if (next <= 0.25 * kEps * std::abs(sum.value())) break;
  }
  return {sum.value(), next, k};
}

// (2j)! / B_{2j} reciprocals: B_{2j} / (2j)! for j = 1..5.
constexpr std::array<double, 5> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
};

}  // namespace

EvalResult dilog(double z) {
  if (!(z >= -1.0 && z <= 0.0))
    throw InvalidParameter("dilog: argument must lie in [-1, 0], got " + std::to_string(z));
  if (z == 0.0) return {0.0, 0.0, 0};

  if (z >= -0.5) return dilog_alternating_series(z);

  // Landen: w = z/(z-1) lies in (1/3, 1/2].
  const double w = z / (z - 1.0);
  const EvalResult inner = dilog_positive_series(w);
  const double log_term = std::log1p(-z);
  const double value = -inner.value - 0.5 * log_term * log_term;
  return {value, inner.est_error + 4.0 * kEps * std::abs(value), inner.terms_used};
}

EvalResult zeta(double s) {
  if (!(s > 1.0))
    throw InvalidParameter("zeta: requires s > 1, got " + std::to_string(s));

  constexpr int kCutoff = 20;
  const double n0 = kCutoff;

  CompensatedSum<double> sum;
  for (int n = kCutoff - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);

  // Euler-Maclaurin tail from n0 to infinity.
  const double n0_pow = std::pow(n0, -s);
  sum += n0 * n0_pow / (s - 1.0);
  sum += 0.5 * n0_pow;

  double rising = s;              // s (s+1) ... (s+2j-2)
  double power = n0_pow / n0;     // n0^{-s-2j+1}
  double omitted = 0.0;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * rising * power;
    if (j + 1 == kBernoulliOverFactorial.size()) {
      omitted = std::abs(term);
      break;
    }
    sum += term;
    const double a = s + 2.0 * static_cast<double>(j) + 1.0;
    rising *= a * (a + 1.0);
    power /= n0 * n0;
  }

  const double value = sum.value();
  return {value, omitted + 2.0 * kEps * value, kCutoff + 4};
}

double ln1p(double x) {
  if (!(x > -1.0))
    throw InvalidParameter("ln1p: requires x > -1, got " + std::to_string(x));
  return std::log1p(x);
}

}  // namespace unclab
