#pragma once

#include <optional>

#include "unclab/spectrum.hpp"

namespace unclab {

struct PhiMoments {
  double mean = 0.0;    ///< <phi>
  double second = 0.0;  ///< <phi^2>
  double var = 0.0;     ///< sigma_phi^2
};

/// Angular momentum moments in units of hbar (mean) and hbar^2 (second, var).
struct LzMoments {
  double mean = 0.0;
  double second = 0.0;
  double var = 0.0;
};

struct MomentReport {
  double mean_phi = 0.0;
  double second_phi = 0.0;
  double var_phi = 0.0;
  double mean_lz = 0.0;
  double second_lz = 0.0;
  double var_lz = 0.0;
  double xi = 0.0;
  double product_sq = 0.0;    ///< sigma_phi^2 sigma_Lz^2
  double hr_bound_sq = 0.25;  ///< (hbar/2)^2
  double state_bound = 0.0;   ///< (hbar/2) |1 - 2 pi |f(pi)|^2|

  double product() const;  ///< sigma_phi sigma_Lz
};

struct TrigReport {
  double mean_sin = 0.0;
  double mean_cos = 0.0;
  double second_sin = 0.0;  ///< <sin^2 phi>
  double second_cos = 0.0;  ///< <cos^2 phi>
  double var_sin = 0.0;
  double var_cos = 0.0;
  /// sigma_Lz^2 sigma_sin^2 - <cos>^2 / 4; empty when sigma_Lz diverges.
  std::optional<double> sin_relation_residual;
  /// sigma_Lz^2 sigma_cos^2 - <sin>^2 / 4; empty when sigma_Lz diverges.
  std::optional<double> cos_relation_residual;
};

/// Off-diagonal double sum xi = sum_{m != n} C_m^* C_n (-1)^{n-m} / (n-m)^2
/// (unnormalized coefficients), evaluated shell by shell in k = n - m.
double xi_sum(const TruncatedSpectrum& s);

PhiMoments phi_moments(const TruncatedSpectrum& s);

/// Throws DivergentMoment if sum n^2 |C_n|^2 is not summable for the source
/// family, NonConvergent if it was left unresolved by the cutoff search.
LzMoments lz_moments(const TruncatedSpectrum& s);

MomentReport uncertainty_report(const TruncatedSpectrum& s);

TrigReport trig_report(const TruncatedSpectrum& s);

/// Autocorrelation S_k = sum_n C_{n-k}^* C_n of the stored window.
Complex coefficient_shell(const TruncatedSpectrum& s, long k);

}  // namespace unclab
