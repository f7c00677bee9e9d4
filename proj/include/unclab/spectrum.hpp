#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace unclab {

using Complex = std::complex<double>;

/// (n, alpha) -> unnormalized Fourier amplitude C_n(alpha).
using CoefficientRule = std::function<Complex(long n, double alpha)>;

/// Families with a closed-form fast path are tagged so that analysis code can
/// dispatch to it; everything else goes through the generic series engine.
enum class FamilyKind { exponential, polynomial, single_mode, custom };

struct CoefficientFamily {
  std::string name;
  CoefficientRule rule;
  bool is_real = true;
  bool is_symmetric = true;
  FamilyKind kind = FamilyKind::custom;
  /// When set, C_n vanishes identically for |n| above this radius.
  std::optional<long> support_radius;

  Complex operator()(long n, double alpha) const { return rule(n, alpha); }
};

/// C_n = exp(-alpha |n|).
CoefficientFamily exponential_family();

/// C_n = |n|^{-alpha} for n != 0 and C_0 = 0.
CoefficientFamily polynomial_family();

/// C_m = 1, all other coefficients zero, independent of alpha.
CoefficientFamily single_mode_family(long m = 0);

/// Fixed, alpha-independent amplitudes on a finite set of modes.
CoefficientFamily fixed_modes_family(std::string name, std::vector<std::pair<long, Complex>> modes);

/// The same family with every coefficient multiplied by a positive constant.
CoefficientFamily rescaled(const CoefficientFamily& family, double factor);

/// Checks the is_real / is_symmetric claims on |n| <= n_range for each alpha.
/// Throws InvalidParameter naming the first violation.
void validate_family_metadata(const CoefficientFamily& family, std::span<const double> alphas,
                              long n_range = 32);

/// Which partial sum the cutoff search has to resolve.
enum class TailTarget {
  second_moment,  ///< sum n^2 |C_n|^2, falling back to the norm if it diverges
  norm,           ///< sum |C_n|^2 only
};

enum class SecondMomentStatus { resolved, divergent, unresolved };

/// Normalized coefficient window C_{-N..N} of one state, hbar = 1.
class TruncatedSpectrum {
 public:
  static constexpr double hbar = 1.0;

  /// Builds a spectrum from explicit amplitudes indexed -N..N (odd length).
  /// The tail is taken to be exactly zero.
  static TruncatedSpectrum from_coefficients(Eigen::ArrayXcd coeffs, double alpha = 1.0);

  double alpha() const noexcept { return alpha_; }
  long cutoff() const noexcept { return cutoff_; }
  const Eigen::ArrayXcd& coeffs() const noexcept { return coeffs_; }
  Complex coeff(long n) const noexcept {
    return (n < -cutoff_ || n > cutoff_) ? Complex{} : coeffs_(n + cutoff_);
  }

  /// |A|^2, fixed by 2 pi |A|^2 sum |C_n|^2 = 1.
  double norm_sq() const noexcept { return norm_sq_; }
  /// A, the positive real root of norm_sq.
  double amplitude() const noexcept { return amplitude_; }
  /// sum |C_n|^2 over the window, so that 2 pi |A|^2 = 1 / mass().
  double mass() const noexcept { return mass_; }

  /// Estimated omitted mass of sum n^2 |C_n|^2 (unnormalized units).
  double tail_bound() const noexcept { return tail_bound_; }
  /// Estimated omitted mass of sum |C_n|^2 (unnormalized units).
  double norm_tail() const noexcept { return norm_tail_; }
  SecondMomentStatus second_moment_status() const noexcept { return second_moment_status_; }

  /// True when every stored amplitude has zero imaginary part.
  bool is_real() const noexcept { return is_real_; }

 private:
  friend TruncatedSpectrum build_spectrum(const CoefficientFamily&, double, double, long, TailTarget);

  TruncatedSpectrum(double alpha, Eigen::ArrayXcd coeffs, double tail_bound, double norm_tail,
                    SecondMomentStatus status);

  double alpha_ = 0.0;
  long cutoff_ = 0;
  Eigen::ArrayXcd coeffs_;
  double norm_sq_ = 0.0;
  double amplitude_ = 0.0;
  double mass_ = 0.0;
  double tail_bound_ = 0.0;
  double norm_tail_ = 0.0;
  SecondMomentStatus second_moment_status_ = SecondMomentStatus::resolved;
  bool is_real_ = true;
};

inline constexpr double kDefaultRelTol = 1e-12;
inline constexpr long kDefaultMaxCutoff = 2'000'000;

/// Normalized truncation of a family at one alpha. The cutoff is the smallest
/// N <= n_max whose estimated tail is below rel_tol of the retained sum.
TruncatedSpectrum build_spectrum(const CoefficientFamily& family, double alpha,
                                 double rel_tol = kDefaultRelTol, long n_max = kDefaultMaxCutoff,
                                 TailTarget target = TailTarget::second_moment);

struct StateSample {
  double phi = 0.0;
  Complex value;
};

/// f(phi) = A sum_{|n|<=N} C_n e^{i n phi}.
StateSample evaluate_state(const TruncatedSpectrum& s, double phi);

/// f(phi) and f'(phi) from one pass over the window.
std::pair<Complex, Complex> evaluate_with_derivative(const TruncatedSpectrum& s, double phi);

/// |f(pi)|^2.
double boundary_density(const TruncatedSpectrum& s);

/// Majorant of sum_{n > last} t_n built from the last few computed terms:
/// geometric extrapolation if the terms decay at a uniform ratio, bounded
/// below by the integral comparison for power-law decay. +inf if neither
/// applies (growing, oscillating or too slowly decaying terms).
struct TailMajorant {
  double bound = 0.0;
  double ratio = 0.0;     ///< worst per-index ratio on the window
  double exponent = 0.0;  ///< local power-law decay exponent
};
TailMajorant estimate_tail(std::span<const double> terms, std::span<const long> indices);

/// T_N(alpha) = sum_{|n| > N} n^2 |C_n(alpha)|^2 for every alpha on the grid,
/// summed until the remainder majorant is below 1e-14 of the retained sum.
std::vector<double> tail_second_moment(const CoefficientFamily& family,
                                       std::span<const double> alphas, long N,
                                       long n_probe_max = kDefaultMaxCutoff);

/// Upper bound for T_N(alpha): explicit sum to the probe limit plus the
/// remainder majorant. Used when only a bound is needed.
struct TailSum {
  double retained = 0.0;
  double remainder = 0.0;
  long probe = 0;
  bool converged = false;
  double upper_bound() const { return retained + remainder; }
};
TailSum tail_second_moment_bound(const CoefficientFamily& family, double alpha, long N,
                                 long n_probe_max = kDefaultMaxCutoff);

}  // namespace unclab
