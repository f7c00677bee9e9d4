#include "unclab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "unclab/errors.hpp"
#include "unclab/moments.hpp"
#include "unclab/special_functions.hpp"
#include "unclab/summation.hpp"

namespace unclab {

namespace {
constexpr double kPi = std::numbers::pi;
}

ExpFamilyEval exp_closed(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidParameter("exp_closed: alpha must be positive and finite");

  const double e1 = std::exp(-alpha);
  const double e2 = std::exp(-2.0 * alpha);
  const double one_minus_e2 = -std::expm1(-2.0 * alpha);
  const double t = std::tanh(alpha);

  ExpFamilyEval r;
  r.alpha = alpha;
  r.var_lz = 2.0 * e2 / (one_minus_e2 * one_minus_e2);
  r.g_value = -4.0 * t * ln1p(e1);
  r.dilog_value = dilog(-e1).value;
  r.var_phi = kPi * kPi / 3.0 + 4.0 * r.dilog_value + r.g_value;

  r.mean_cos = 2.0 * e1 / (1.0 + e2);
  r.var_sin = 0.5 * one_minus_e2 * one_minus_e2 / (1.0 + e2);
  r.var_cos = 0.5 * (1.0 - e2 * e2 + 4.0 * e2) / (1.0 + e2) - 4.0 * e2 / ((1.0 + e2) * (1.0 + e2));

  r.norm_sq = t / (2.0 * kPi);
  const double half = std::tanh(0.5 * alpha);
  r.boundary_density = r.norm_sq * half * half;
  return r;
}

PolyFamilyEval poly_closed(double alpha, double phi_rel_tol) {
  if (!std::isfinite(alpha)) throw InvalidParameter("poly_closed: alpha must be finite");
  if (!(alpha > 1.5))
    throw DivergentMoment("polynomial family: sigma_Lz diverges for alpha <= 3/2 (alpha = " +
                          std::to_string(alpha) + ")");

  const double z2a = zeta(2.0 * alpha).value;
  PolyFamilyEval r;
  r.alpha = alpha;
  r.norm_sq = 1.0 / (4.0 * kPi * z2a);
  r.var_lz = zeta(2.0 * alpha - 2.0).value / z2a;

  // sigma_phi^2 is linear in the omitted amplitudes, so the window is sized
  // from the leading dropped pairs of xi rather than from the norm tail:
  // one index small (alternating, ~ 2 zeta(alpha) N^{-alpha-2}) and both
  // indices beyond N (~ (pi^2/6) N^{1-2 alpha} / (2 alpha - 1)).
  const double mass = 2.0 * z2a;
  const double za = zeta(alpha).value;
  const double target = 0.5 * phi_rel_tol * (kPi * kPi / 3.0) * mass / 4.0;
  const double n_one = std::pow(2.0 * za / target, 1.0 / (alpha + 2.0));
  const double n_both = std::pow(kPi * kPi / 6.0 / ((2.0 * alpha - 1.0) * target), 1.0 / (2.0 * alpha - 1.0));
  const double N = std::min(std::max({2.0, std::ceil(n_one), std::ceil(n_both)}), static_cast<double>(kDefaultMaxCutoff));
  const long cutoff = static_cast<long>(N);
  Eigen::ArrayXcd window(2 * cutoff + 1);
  for (long n = -cutoff; n <= cutoff; ++n) window(n + cutoff) = polynomial_family()(n, alpha);
  const TruncatedSpectrum s = TruncatedSpectrum::from_coefficients(std::move(window), alpha);
  r.var_phi = phi_moments(s).var;
  // f(pi) = -2 A (1 - 2^{1-alpha}) zeta(alpha), the Dirichlet eta function.
  const double eta = -std::expm1((1.0 - alpha) * std::log(2.0)) * za;
  r.boundary_density = 4.0 * r.norm_sq * eta * eta;
  r.cutoff = s.cutoff();
  return r;
}

double exp_xi_resummed(double alpha, long k_max) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidParameter("exp_xi_resummed: alpha must be positive and finite");
  if (k_max < 1) throw InvalidParameter("exp_xi_resummed: k_max must be positive");

  const double coth = 1.0 / std::tanh(alpha);
  CompensatedSum<double> sum;
  for (long k = 1; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    const double magnitude = 2.0 * (coth + kd) * std::exp(-alpha * kd) / (kd * kd);
    sum += (k % 2 == 0) ? magnitude : -magnitude;
    const double next = 2.0 * (coth + kd + 1.0) * std::exp(-alpha * (kd + 1.0)) / ((kd + 1.0) * (kd + 1.0));
    if (next <= 1e-17 * std::abs(sum.value()) || next == 0.0) return sum.value();
  }
  throw NonConvergent("exp_xi_resummed: alternating remainder not below tolerance at k_max");
}

}  // namespace unclab
