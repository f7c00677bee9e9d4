#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unclab/spectrum.hpp"

namespace unclab {

/// How a family's moments are evaluated.
enum class Route {
  automatic,  ///< closed-form fast path for the exponential/polynomial families
  series,     ///< always build a spectrum and run the generic series engine
};

struct SeriesOptions {
  double rel_tol = kDefaultRelTol;
  long n_max = kDefaultMaxCutoff;
  Route route = Route::automatic;
};

/// Angle and angular-momentum spread of one state of a family (hbar = 1).
struct UncertaintyPoint {
  double alpha = 0.0;
  double var_phi = 0.0;
  double var_lz = 0.0;
  double state_bound = 0.0;  ///< (1/2) |1 - 2 pi |f(pi)|^2|
  long cutoff = -1;          ///< series window, -1 for a pure closed form

  double product_sq() const { return var_phi * var_lz; }
  double product() const;  ///< sigma_phi sigma_Lz
};

/// Throws DivergentMoment where sigma_Lz is infinite.
UncertaintyPoint evaluate_point(const CoefficientFamily& family, double alpha, const SeriesOptions& opts = {});

/// sigma_phi sigma_Lz, or +inf where sigma_Lz diverges.
double uncertainty_product(const CoefficientFamily& family, double alpha, const SeriesOptions& opts = {});

std::vector<double> linear_grid(double lo, double hi, long points);
std::vector<double> log_grid(double lo, double hi, long points);

// ---------------------------------------------------------------------------
// Dominance

enum class DominanceState { dominant, no_unique_dominant, inconclusive };

struct RatioTrace {
  long n = 0;
  std::vector<double> ratios;  ///< |C_n(alpha) / C_k(alpha)| along the grid
};

struct DominanceVerdict {
  std::optional<long> dominant_index;
  long candidate = 0;                    ///< argmax |C_n| at the largest alpha
  std::optional<long> rival;             ///< index sharing the candidate's decay
  std::vector<RatioTrace> ratio_trace;   ///< probed n != candidate that are not identically zero
  DominanceState verdict = DominanceState::inconclusive;
  std::vector<double> grid;
  std::string detail;
};

struct DominanceOptions {
  double threshold = 1e-3;       ///< tail ratio below which C_n counts as dominated
  double tie_tolerance = 1e-6;   ///< ratio within this of 1 marks a shared decay
};

/// Approximates liminf_{alpha->inf} C_n/C_k = 0 by the behaviour of the
/// ratios on the tail of an increasing grid (>= 8 points, >= one decade).
DominanceVerdict check_dominance(const CoefficientFamily& family, std::span<const double> alpha_grid, long n_probe,
                                 const DominanceOptions& opts = {});

std::string to_string(DominanceState state);

// ---------------------------------------------------------------------------
// Admissibility

struct AdmissibilityReport {
  struct NontrivialVariance {
    bool pass = false;
    double inf_var_phi = 0.0;
    double at_alpha = 0.0;
    double kappa = 0.0;
  } cond_i;
  struct UniformTail {
    bool pass = false;
    double max_tail = 0.0;
    double at_alpha = 0.0;
    long N = 0;
    double eps = 0.0;
  } cond_ii;
  struct MonotoneSubsequence {
    bool pass = false;       ///< verdict under the non-strict reading
    bool strict = false;     ///< |C_n| strictly decreasing for every |n| <= N
    bool nonstrict = false;  ///< |C_n| non-increasing for every |n| <= N
    std::vector<double> strict_sequence;
    std::vector<double> nonstrict_sequence;
  } cond_iii;
  std::vector<double> grid;
  std::vector<double> var_phi;
  std::vector<double> tails;
  std::string notes;

  bool admissible() const { return cond_i.pass && cond_ii.pass && cond_iii.pass; }
};

AdmissibilityReport check_admissibility(const CoefficientFamily& family, std::span<const double> alpha_grid,
                                        double kappa, long N, double eps, const SeriesOptions& opts = {});

// ---------------------------------------------------------------------------
// Searches

inline constexpr double kAlphaSearchLimit = 1e4;

struct AlphaStar {
  double alpha = 0.0;
  double product = 0.0;
};

/// Doubles alpha from the hint until sigma_phi sigma_Lz < epsilon, then
/// bisects back towards the first alpha where that happens. Throws
/// NotAttainable (carrying the smallest product seen, refined around its
/// best sample) if the search limit is reached.
AlphaStar find_alpha_star(const CoefficientFamily& family, double epsilon, double alpha_hint = 1.0,
                          const SeriesOptions& opts = {});

struct Crossing {
  double alpha = 0.0;
  double product = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

inline constexpr double kCrossingLo = 1e-3;
inline constexpr double kCrossingHi = 50.0;

/// First alpha in [1e-3, 50] where sigma_phi sigma_Lz crosses target, to
/// |delta alpha| < 1e-6. Throws NoBracket if no sign change is found.
Crossing find_bound_crossing(const CoefficientFamily& family, double target, const SeriesOptions& opts = {});

// ---------------------------------------------------------------------------
// Asymptotics of the exponential family

enum class AsymptoticRegime { small_alpha, large_alpha };

struct AsymptoticReport {
  AsymptoticRegime regime = AsymptoticRegime::small_alpha;
  std::vector<double> alphas;
  /// small: sigma_phi^2 / alpha^2.  large: sigma_phi^2 / (pi^2/3).
  std::vector<double> phi_ratio;
  /// small: 2 alpha^2 sigma_Lz^2.   large: e^{2 alpha} sigma_Lz^2 / 2.
  std::vector<double> lz_ratio;
  /// sigma_phi^2 sigma_Lz^2 (the small-alpha limit is 1/2).
  std::vector<double> product_sq;
  /// Limits of the ratios extrapolated by a least-squares fit
  /// r = L + c h(alpha), h = alpha (small) or e^{-alpha}, e^{-2 alpha} (large).
  double phi_limit = 0.0;
  double lz_limit = 0.0;
  double max_phi_deviation = 0.0;  ///< max_i |phi_ratio_i - 1|
  double max_lz_deviation = 0.0;
};

AsymptoticReport asymptotic_check(const CoefficientFamily& family, AsymptoticRegime regime,
                                  const SeriesOptions& opts = {});

/// Least-squares coefficients of sum_j c_j alpha^{powers_j} through (alpha_i, y_i).
std::vector<double> fit_powers(std::span<const double> alphas, std::span<const double> values,
                               std::span<const int> powers);

}  // namespace unclab
