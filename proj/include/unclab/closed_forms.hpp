#pragma once

#include "unclab/spectrum.hpp"

namespace unclab {

/// Closed-form moments of the exponential family C_n = exp(-alpha |n|).
struct ExpFamilyEval {
  double alpha = 0.0;
  double var_phi = 0.0;
  double var_lz = 0.0;
  double g_value = 0.0;      ///< -4 tanh(alpha) ln(1 + e^{-alpha})
  double dilog_value = 0.0;  ///< Li2(-e^{-alpha})
  double mean_cos = 0.0;
  double var_sin = 0.0;
  double var_cos = 0.0;
  double norm_sq = 0.0;
  double boundary_density = 0.0;  ///< |f(pi)|^2

  double product_sq() const { return var_phi * var_lz; }
};

/// All fields are written in terms of e^{-alpha}, tanh and expm1, so nothing
/// overflows for large alpha.
ExpFamilyEval exp_closed(double alpha);

/// Polynomial family C_n = |n|^{-alpha}, C_0 = 0.
struct PolyFamilyEval {
  double alpha = 0.0;
  double var_lz = 0.0;   ///< zeta(2 alpha - 2) / zeta(2 alpha)
  double var_phi = 0.0;  ///< from the xi series on a truncated spectrum
  double norm_sq = 0.0;  ///< 1 / (4 pi zeta(2 alpha))
  double boundary_density = 0.0;
  long cutoff = 0;       ///< window used for var_phi

  double product_sq() const { return var_phi * var_lz; }
};

/// Relative norm-tail tolerance for the var_phi series of poly_closed.
inline constexpr double kPolyPhiRelTol = 1e-8;

/// Throws DivergentMoment for alpha <= 3/2, InvalidParameter for non-finite alpha.
PolyFamilyEval poly_closed(double alpha, double phi_rel_tol = kPolyPhiRelTol);

/// xi(alpha) of the exponential family through the single alternating sum
/// 2 sum_{k>=1} (-1)^k k^{-2} (coth alpha + k) e^{-alpha k}.
/// Throws NonConvergent when the alternating remainder is still too large at k_max.
double exp_xi_resummed(double alpha, long k_max = 10'000'000);

}  // namespace unclab
