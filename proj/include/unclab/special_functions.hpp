#pragma once

namespace unclab {

/// A truncated-series value together with a bound on the truncation error.
struct EvalResult {
  double value = 0.0;
  double est_error = 0.0;
  int terms_used = 0;
};

/// Real dilogarithm Li2(z) = sum_{k>0} z^k / k^2 for z in [-1, 0].
/// Uses the series directly for |z| <= 1/2 and the Landen reflection
/// Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2 otherwise, so fewer than 60 terms
/// are ever summed.
EvalResult dilog(double z);

/// Riemann zeta for real s > 1 by direct summation to 20 plus an
/// Euler-Maclaurin tail with four Bernoulli corrections. est_error is the
/// magnitude of the first omitted correction.
EvalResult zeta(double s);

/// ln(1+x) for x > -1, accurate for tiny |x|.
double ln1p(double x);

}  // namespace unclab
